#include <doctest.h>

#include <cmath>

#include "streamsage/loss.hpp"

using namespace streamsage;

TEST_SUITE("loss") {

TEST_CASE("cross-entropy analytic values") {
    const LossFunction ce = LossFunction::cross_entropy();
    CHECK(loss_eval(ce, Prediction::probabilities({0.5, 0.5}), Target::klass(0)) ==
          doctest::Approx(std::log(2.0)));
    CHECK(loss_eval(ce, Prediction::probabilities({0.9, 0.1}), Target::klass(1)) ==
          doctest::Approx(-std::log(0.1)));
    CHECK(loss_eval(ce, Prediction::probabilities({1.0, 0.0}), Target::klass(0)) ==
          doctest::Approx(0.0));
}

TEST_CASE("zero probability is clipped, not infinite") {
    const LossFunction ce = LossFunction::cross_entropy();
    const double worst =
        loss_eval(ce, Prediction::probabilities({1.0, 0.0}), Target::klass(1));
    CHECK(std::isfinite(worst));
    CHECK(worst == doctest::Approx(-std::log(kProbabilityClip)));
}

TEST_CASE("absolute error analytic values") {
    const LossFunction ab = LossFunction::absolute();
    CHECK(loss_eval(ab, Prediction::real(3.0), Target::real(3.0)) == 0.0);
    CHECK(loss_eval(ab, Prediction::real(1.0), Target::real(-1.5)) == doctest::Approx(2.5));
}

TEST_CASE("kind mismatches are rejected") {
    CHECK_THROWS_AS(
        loss_eval(LossFunction::cross_entropy(), Prediction::real(1.0), Target::klass(0)),
        KindError);
    CHECK_THROWS_AS(loss_eval(LossFunction::cross_entropy(),
                              Prediction::probabilities({0.5, 0.5}), Target::real(0.0)),
                    KindError);
    CHECK_THROWS_AS(
        loss_eval(LossFunction::absolute(), Prediction::probabilities({1.0}), Target::real(0.0)),
        KindError);
    CHECK_THROWS_AS(loss_eval(LossFunction::absolute(), Prediction::real(1.0), Target::klass(0)),
                    KindError);
    // label outside the predicted vector
    CHECK_THROWS_AS(loss_eval(LossFunction::cross_entropy(),
                              Prediction::probabilities({0.5, 0.5}), Target::klass(2)),
                    KindError);
}

} // TEST_SUITE
