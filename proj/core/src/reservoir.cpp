#include "streamsage/reservoir.hpp"

namespace streamsage {

GeometricReservoir::GeometricReservoir(int capacity) : capacity_(capacity) {
    if (capacity < 1) throw ConfigError("reservoir capacity must be >= 1");
    items_.reserve(static_cast<std::size_t>(capacity));
}

void GeometricReservoir::update(const Instance& x, RngHandle& rng) {
    ++seen_;
    if (items_.size() < static_cast<std::size_t>(capacity_)) {
        items_.push_back(x);
        return;
    }
    items_[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(capacity_)))] = x;
}

const Instance& GeometricReservoir::sample(RngHandle& rng) const {
    if (items_.empty()) throw StateError("sampling from an empty reservoir");
    return items_[static_cast<std::size_t>(rng.below(items_.size()))];
}

} // namespace streamsage
