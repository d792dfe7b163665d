#ifndef STREAMSAGE_TYPES_HPP
#define STREAMSAGE_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "streamsage/error.hpp"

namespace streamsage {

enum class FeatureKind { numeric, categorical };

// One feature value: either a numeric scalar or an index into the feature's
// declared alphabet. Accessing the wrong side throws KindError.
class FeatureValue {
public:
    static FeatureValue numeric(double v) {
        FeatureValue f;
        f.kind_ = FeatureKind::numeric;
        f.num_ = v;
        return f;
    }
    static FeatureValue categorical(std::int32_t index) {
        if (index < 0) throw SchemaError("categorical index must be non-negative");
        FeatureValue f;
        f.kind_ = FeatureKind::categorical;
        f.cat_ = index;
        return f;
    }

    FeatureKind kind() const { return kind_; }
    double num() const {
        if (kind_ != FeatureKind::numeric) throw KindError("feature value is not numeric");
        return num_;
    }
    std::int32_t cat() const {
        if (kind_ != FeatureKind::categorical) throw KindError("feature value is not categorical");
        return cat_;
    }

    bool operator==(const FeatureValue& o) const {
        if (kind_ != o.kind_) return false;
        return kind_ == FeatureKind::numeric ? num_ == o.num_ : cat_ == o.cat_;
    }

private:
    FeatureKind kind_ = FeatureKind::numeric;
    double num_ = 0.0;
    std::int32_t cat_ = 0;
};

// A full observation: one value per schema feature, in schema order.
using Instance = std::vector<FeatureValue>;

enum class TargetKind { klass, real };

// Supervised target: class label index or real value.
class Target {
public:
    static Target klass(std::int32_t label) {
        if (label < 0) throw SchemaError("class label must be non-negative");
        Target t;
        t.kind_ = TargetKind::klass;
        t.label_ = label;
        return t;
    }
    static Target real(double v) {
        Target t;
        t.kind_ = TargetKind::real;
        t.value_ = v;
        return t;
    }

    TargetKind kind() const { return kind_; }
    std::int32_t label() const {
        if (kind_ != TargetKind::klass) throw KindError("target is not a class label");
        return label_;
    }
    double value() const {
        if (kind_ != TargetKind::real) throw KindError("target is not a real value");
        return value_;
    }
    bool operator==(const Target& o) const {
        if (kind_ != o.kind_) return false;
        return kind_ == TargetKind::klass ? label_ == o.label_ : value_ == o.value_;
    }

private:
    TargetKind kind_ = TargetKind::real;
    std::int32_t label_ = 0;
    double value_ = 0.0;
};

struct LabeledSample {
    Instance x;
    Target y;
};

enum class PredictionKind { probabilities, real };

// Model output: a probability vector over classes or a real value.
class Prediction {
public:
    Prediction() = default;
    static Prediction probabilities(std::vector<double> p) {
        if (p.empty()) throw KindError("probability vector must be non-empty");
        Prediction r;
        r.kind_ = PredictionKind::probabilities;
        r.probs_ = std::move(p);
        return r;
    }
    static Prediction real(double v) {
        Prediction r;
        r.kind_ = PredictionKind::real;
        r.value_ = v;
        return r;
    }

    PredictionKind kind() const { return kind_; }
    const std::vector<double>& probs() const {
        if (kind_ != PredictionKind::probabilities)
            throw KindError("prediction is not a probability vector");
        return probs_;
    }
    double value() const {
        if (kind_ != PredictionKind::real) throw KindError("prediction is not a real value");
        return value_;
    }

    bool operator==(const Prediction& o) const {
        if (kind_ != o.kind_) return false;
        return kind_ == PredictionKind::probabilities ? probs_ == o.probs_ : value_ == o.value_;
    }

private:
    PredictionKind kind_ = PredictionKind::real;
    std::vector<double> probs_;
    double value_ = 0.0;
};

// Convex mix wa*a + wb*b of two predictions of the same kind.
// Probability vectors are renormalized so the result sums to one.
Prediction prediction_mix(const Prediction& a, const Prediction& b, double wa, double wb);

// Running mean of predictions of one kind; mixing kinds throws KindError.
class PredictionMean {
public:
    void add(const Prediction& p);
    Prediction mean() const; // StateError when empty
    std::uint64_t count() const { return count_; }

private:
    std::uint64_t count_ = 0;
    bool is_probs_ = false;
    std::vector<double> sum_probs_;
    double sum_real_ = 0.0;
};

} // namespace streamsage

#endif
