#include "streamsage/window.hpp"

#include "streamsage/error.hpp"

namespace streamsage {

WindowBuffer::WindowBuffer(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw ConfigError("window capacity must be >= 1");
}

void WindowBuffer::push(const LabeledSample& s) {
    buf_.push_back(s);
    if (buf_.size() > static_cast<std::size_t>(capacity_)) buf_.pop_front();
    ++pushes_;
}

std::vector<LabeledSample> WindowBuffer::contents() const {
    return {buf_.begin(), buf_.end()};
}

std::optional<std::vector<double>> swsage_step(WindowBuffer& buf,
                                               const LabeledSample& sample,
                                               const Predictor& model,
                                               const LossFunction& loss,
                                               int inner_samples,
                                               int stride,
                                               RngHandle& rng) {
    if (stride < 1) throw ConfigError("stride must be >= 1");
    buf.push(sample);
    if (!buf.full()) return std::nullopt;
    const std::uint64_t since_full = buf.pushes() - static_cast<std::uint64_t>(buf.capacity());
    if (since_full % static_cast<std::uint64_t>(stride) != 0) return std::nullopt;
    return batch_sage(buf.contents(), model, loss, inner_samples, rng);
}

} // namespace streamsage
