#ifndef STREAMSAGE_WINDOW_HPP
#define STREAMSAGE_WINDOW_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "streamsage/batch_sage.hpp"

namespace streamsage {

// Ring of the most recent <= capacity labeled samples, in arrival order.
class WindowBuffer {
public:
    explicit WindowBuffer(int capacity);

    void push(const LabeledSample& s);
    bool full() const { return buf_.size() == static_cast<std::size_t>(capacity_); }
    int capacity() const { return capacity_; }
    std::size_t size() const { return buf_.size(); }
    std::uint64_t pushes() const { return pushes_; }
    std::vector<LabeledSample> contents() const; // oldest first

private:
    int capacity_;
    std::uint64_t pushes_ = 0;
    std::deque<LabeledSample> buf_;
};

// Sliding-window baseline step: push the sample, then once the window is
// full recompute batch importance over its contents every `stride` pushes
// (so the first output happens exactly when the window first fills).
std::optional<std::vector<double>> swsage_step(WindowBuffer& buf,
                                               const LabeledSample& sample,
                                               const Predictor& model,
                                               const LossFunction& loss,
                                               int inner_samples,
                                               int stride,
                                               RngHandle& rng);

} // namespace streamsage

#endif
