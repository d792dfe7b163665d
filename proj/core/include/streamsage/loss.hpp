#ifndef STREAMSAGE_LOSS_HPP
#define STREAMSAGE_LOSS_HPP

#include "streamsage/types.hpp"

namespace streamsage {

enum class LossKind {
    cross_entropy, // probability prediction vs class target
    absolute       // real prediction vs real target
};

struct LossFunction {
    LossKind kind = LossKind::cross_entropy;
    static LossFunction cross_entropy() { return {LossKind::cross_entropy}; }
    static LossFunction absolute() { return {LossKind::absolute}; }
};

// Probabilities fed into the log are clipped to this bound.
inline constexpr double kProbabilityClip = 1e-15;

// Pointwise loss. Pairing a loss with the wrong prediction or target kind
// throws KindError; a non-finite result throws NumericError.
double loss_eval(const LossFunction& loss, const Prediction& pred, const Target& y);

} // namespace streamsage

#endif
