#ifndef STREAMSAGE_PREDICTOR_HPP
#define STREAMSAGE_PREDICTOR_HPP

#include "streamsage/types.hpp"

namespace streamsage {

// Minimal prediction interface consumed by removal strategies and
// importance estimators. predict must be deterministic and side-effect free.
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual Prediction predict(const Instance& x) const = 0;
};

} // namespace streamsage

#endif
