#include "streamsage/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

namespace streamsage {

namespace {
constexpr double kMinGain = 1e-12;

double entropy_bits(const std::vector<double>& counts, double n) {
    if (n <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts) {
        if (c <= 0.0) continue;
        const double p = c / n;
        h -= p * std::log2(p);
    }
    return h;
}
} // namespace

void TreeConfig::validate() const {
    if (grace_period < 1) throw ConfigError("grace_period must be >= 1");
    if (!(hoeffding_delta > 0.0 && hoeffding_delta < 1.0))
        throw ConfigError("hoeffding_delta must be in (0, 1)");
    if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
    if (max_splits < 1) throw ConfigError("max_splits must be >= 1");
    if (numeric_candidates < 1) throw ConfigError("numeric_candidates must be >= 1");
    if (sketch_capacity < 8) throw ConfigError("sketch_capacity must be >= 8");
    if (tie_threshold < 0.0) throw ConfigError("tie_threshold must be >= 0");
    if (!(drift_decay > 0.0 && drift_decay < 1.0))
        throw ConfigError("drift_decay must be in (0, 1)");
    if (drift_min_samples < 1) throw ConfigError("drift_min_samples must be >= 1");
}

nlohmann::json TreeConfig::to_json() const {
    return nlohmann::json{{"grace_period", grace_period},
                          {"hoeffding_delta", hoeffding_delta},
                          {"max_depth", max_depth},
                          {"max_splits", max_splits},
                          {"adaptation", adaptation},
                          {"numeric_candidates", numeric_candidates},
                          {"sketch_capacity", sketch_capacity},
                          {"tie_threshold", tie_threshold},
                          {"drift_decay", drift_decay},
                          {"drift_min_samples", drift_min_samples}};
}

TreeConfig TreeConfig::from_json(const nlohmann::json& j) {
    TreeConfig c;
    c.grace_period = j.value("grace_period", c.grace_period);
    c.hoeffding_delta = j.value("hoeffding_delta", c.hoeffding_delta);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.max_splits = j.value("max_splits", c.max_splits);
    c.adaptation = j.value("adaptation", c.adaptation);
    c.numeric_candidates = j.value("numeric_candidates", c.numeric_candidates);
    c.sketch_capacity = j.value("sketch_capacity", c.sketch_capacity);
    c.tie_threshold = j.value("tie_threshold", c.tie_threshold);
    c.drift_decay = j.value("drift_decay", c.drift_decay);
    c.drift_min_samples = j.value("drift_min_samples", c.drift_min_samples);
    c.validate();
    return c;
}

IncrementalTree::IncrementalTree(StreamSchema schema, TargetKind target_kind, int num_classes,
                                 TreeConfig config, std::uint64_t allowed_mask, std::uint64_t seed)
    : schema_(std::move(schema)),
      target_kind_(target_kind),
      num_classes_(num_classes),
      config_(config),
      allowed_mask_(allowed_mask),
      rng_(seed) {
    config_.validate();
    if (target_kind_ == TargetKind::klass && num_classes_ < 1)
        throw ConfigError("classification tree needs at least one class");
    if (target_kind_ == TargetKind::real && num_classes_ != 0)
        throw ConfigError("regression tree must not declare classes");
    const int root = alloc_node();
    init_leaf(root, -1, 0, nullptr);
    root_ = root;
}

void IncrementalTree::add_target(TargetStats& s, const Target& y) const {
    if (target_kind_ == TargetKind::klass) {
        s.counts[static_cast<std::size_t>(y.label())] += 1.0;
        s.n += 1.0;
    } else {
        const double v = y.value();
        s.n += 1.0;
        s.sum += v;
        s.sum2 += v * v;
    }
}

double IncrementalTree::encode_target(const Target& y) const {
    return target_kind_ == TargetKind::klass ? static_cast<double>(y.label()) : y.value();
}

double IncrementalTree::stats_metric(const TargetStats& s) const {
    if (target_kind_ == TargetKind::klass) return entropy_bits(s.counts, s.n);
    if (s.n <= 0.0) return 0.0;
    const double mean = s.sum / s.n;
    return std::max(0.0, s.sum2 / s.n - mean * mean);
}

Prediction IncrementalTree::stats_prediction(const TargetStats& s) const {
    if (target_kind_ == TargetKind::klass) {
        std::vector<double> p(s.counts.size());
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = s.counts[k] / s.n;
        return Prediction::probabilities(std::move(p));
    }
    return Prediction::real(s.sum / s.n);
}

int IncrementalTree::alloc_node() {
    if (!free_nodes_.empty()) {
        const int idx = free_nodes_.back();
        free_nodes_.pop_back();
        return idx;
    }
    nodes_.emplace_back();
    return static_cast<int>(nodes_.size()) - 1;
}

void IncrementalTree::init_leaf(int idx, int parent, int depth, LeafEvent* ev) {
    Node fresh;
    fresh.is_leaf = true;
    fresh.parent = parent;
    fresh.depth = depth;
    fresh.leaf_id = next_leaf_id_++;
    if (target_kind_ == TargetKind::klass)
        fresh.stats.counts.assign(static_cast<std::size_t>(num_classes_), 0.0);
    const int d = schema_.dim();
    fresh.num_obs.resize(static_cast<std::size_t>(d));
    fresh.cat_obs.resize(static_cast<std::size_t>(d));
    for (int f = 0; f < d; ++f) {
        if (!((allowed_mask_ >> f) & 1u)) continue;
        if (schema_.feature(f).kind == FeatureKind::categorical) {
            auto& per_symbol = fresh.cat_obs[static_cast<std::size_t>(f)];
            per_symbol.resize(schema_.feature(f).alphabet.size());
            if (target_kind_ == TargetKind::klass)
                for (auto& s : per_symbol)
                    s.counts.assign(static_cast<std::size_t>(num_classes_), 0.0);
        }
    }
    nodes_[static_cast<std::size_t>(idx)] = std::move(fresh);
    leaf_index_[nodes_[static_cast<std::size_t>(idx)].leaf_id] = idx;
    if (ev) ev->created.push_back(nodes_[static_cast<std::size_t>(idx)].leaf_id);
}

void IncrementalTree::reset_observers(Node& node) {
    node.num_obs.clear();
    node.num_obs.shrink_to_fit();
    node.cat_obs.clear();
    node.cat_obs.shrink_to_fit();
}

int IncrementalTree::branch_of(const Node& node, const Instance& x) const {
    const auto f = static_cast<std::size_t>(node.split_feature);
    if (node.numeric_split) return x[f].num() <= node.threshold ? 0 : 1;
    return static_cast<int>(x[f].cat());
}

LeafEvent IncrementalTree::learn_one(const Instance& x, const Target& y) {
    if (static_cast<int>(x.size()) != schema_.dim())
        throw SchemaError("instance has wrong dimension");
    if (y.kind() != target_kind_) throw KindError("target kind does not match tree");
    if (target_kind_ == TargetKind::klass && y.label() >= num_classes_)
        throw SchemaError("class label outside declared range");
    ++seen_;
    LeafEvent ev;
    if (config_.adaptation && splits_made_ > 0) adapt_check(x, y, ev);

    const int leaf_idx = descend_learn(x);
    Node& leaf = nodes_[static_cast<std::size_t>(leaf_idx)];
    add_target(leaf.stats, y);
    for (int f = 0; f < schema_.dim(); ++f) {
        if (!((allowed_mask_ >> f) & 1u)) continue;
        const auto fs = static_cast<std::size_t>(f);
        if (schema_.feature(f).kind == FeatureKind::numeric) {
            NumericObserver& obs = leaf.num_obs[fs];
            ++obs.seen;
            const std::pair<double, double> entry{x[fs].num(), encode_target(y)};
            if (obs.sample.size() < static_cast<std::size_t>(config_.sketch_capacity)) {
                obs.sample.push_back(entry);
            } else {
                const std::uint64_t j = rng_.below(obs.seen);
                if (j < obs.sample.size()) obs.sample[static_cast<std::size_t>(j)] = entry;
            }
        } else {
            add_target(leaf.cat_obs[fs][static_cast<std::size_t>(x[fs].cat())], y);
        }
    }
    ++leaf.since_attempt;
    if (leaf.since_attempt >= config_.grace_period && leaf.depth < config_.max_depth &&
        splits_made_ < config_.max_splits) {
        leaf.since_attempt = 0;
        try_split(leaf_idx, ev);
    }
    return ev;
}

int IncrementalTree::descend_learn(const Instance& x) {
    int idx = root_;
    while (!nodes_[static_cast<std::size_t>(idx)].is_leaf) {
        Node& node = nodes_[static_cast<std::size_t>(idx)];
        ++node.routed_total;
        const int b = branch_of(node, x);
        ++node.child_counts[static_cast<std::size_t>(b)];
        idx = node.children[static_cast<std::size_t>(b)];
    }
    return idx;
}

void IncrementalTree::adapt_check(const Instance& x, const Target& y, LeafEvent& ev) {
    // Error of the current subtree prediction, attributed to every split node
    // on the path; computed before this sample updates any statistics.
    std::vector<int> path;
    int idx = root_;
    while (!nodes_[static_cast<std::size_t>(idx)].is_leaf) {
        path.push_back(idx);
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        idx = node.children[static_cast<std::size_t>(branch_of(node, x))];
    }
    const TargetStats* eff = nullptr;
    for (int at = idx; at != -1; at = nodes_[static_cast<std::size_t>(at)].parent) {
        const Node& node = nodes_[static_cast<std::size_t>(at)];
        const TargetStats& s = node.is_leaf ? node.stats : node.fallback;
        if (s.n > 0.0) {
            eff = &s;
            break;
        }
    }
    if (!eff) return;
    double err;
    if (target_kind_ == TargetKind::klass) {
        const auto best = std::max_element(eff->counts.begin(), eff->counts.end());
        const int pred = static_cast<int>(best - eff->counts.begin());
        err = pred == y.label() ? 0.0 : 1.0;
    } else {
        err = std::abs(eff->sum / eff->n - y.value());
    }
    const double lambda = config_.drift_decay;
    int triggered = -1;
    for (int at : path) {
        Node& node = nodes_[static_cast<std::size_t>(at)];
        node.det_n += 1.0;
        const double d1 = err - node.det_mean;
        node.det_mean += d1 / node.det_n;
        node.det_m2 += d1 * (err - node.det_mean);
        // Burn-in: the chart statistic tracks the long-run mean until the
        // node is eligible for testing. Seeding it from a raw 0/1 error
        // would take ~1/decay samples to wash out and trip the 3-sigma rule
        // on a perfectly stationary error stream.
        if (node.det_n < config_.drift_min_samples)
            node.det_ewma = node.det_mean;
        else
            node.det_ewma = (1.0 - lambda) * node.det_ewma + lambda * err;
        if (triggered == -1 && node.det_n >= config_.drift_min_samples) {
            double var;
            if (target_kind_ == TargetKind::klass) {
                // Laplace-smoothed Bernoulli variance: on a near-pure node
                // the plain estimate degenerates and the band shrinks below
                // the EWMA's per-error jump, so one mistake reads as drift.
                const double p = (node.det_mean * node.det_n + 1.0) / (node.det_n + 2.0);
                var = p * (1.0 - p);
            } else {
                var = std::max(node.det_m2 / node.det_n, 1e-12);
            }
            const double sigma = std::sqrt(var * lambda / (2.0 - lambda));
            if (node.det_ewma - node.det_mean > 3.0 * sigma) triggered = at;
        }
    }
    if (triggered != -1 && splits_made_ < config_.max_splits) replace_subtree(triggered, ev);
}

void IncrementalTree::replace_subtree(int idx, LeafEvent& ev) {
    std::vector<std::uint64_t> leaves;
    std::vector<int> subtree;
    collect_subtree(idx, &leaves, &subtree);
    for (std::uint64_t id : leaves) {
        leaf_index_.erase(id);
        ev.destroyed.push_back(id);
    }
    for (int n : subtree)
        if (n != idx) free_nodes_.push_back(n);
    Node& node = nodes_[static_cast<std::size_t>(idx)];
    if (node.fallback.n > 0.0) replaced_fallback_ = node.fallback;
    const int parent = node.parent;
    const int depth = node.depth;
    init_leaf(idx, parent, depth, &ev);
}

void IncrementalTree::collect_subtree(int idx, std::vector<std::uint64_t>* leaves,
                                      std::vector<int>* nodes) const {
    std::vector<int> stack{idx};
    while (!stack.empty()) {
        const int at = stack.back();
        stack.pop_back();
        if (nodes) nodes->push_back(at);
        const Node& node = nodes_[static_cast<std::size_t>(at)];
        if (node.is_leaf) {
            if (leaves) leaves->push_back(node.leaf_id);
        } else {
            for (int c : node.children) stack.push_back(c);
        }
    }
}

IncrementalTree::Candidate IncrementalTree::best_numeric_candidate(const Node& leaf,
                                                                   int f) const {
    Candidate best;
    const NumericObserver& obs = leaf.num_obs[static_cast<std::size_t>(f)];
    const std::size_t n = obs.sample.size();
    if (n < 2) return best;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = obs.sample[i].first;
    std::sort(values.begin(), values.end());
    if (values.front() == values.back()) return best;

    // Equal-frequency candidate thresholds from the bounded value sample.
    std::vector<double> cands;
    for (int k = 1; k <= config_.numeric_candidates; ++k) {
        const double q = static_cast<double>(k) / (config_.numeric_candidates + 1.0);
        const auto pos = static_cast<std::size_t>(q * static_cast<double>(n - 1));
        const double theta = values[pos];
        if (theta >= values.back()) continue; // would leave the right child empty
        if (!cands.empty() && cands.back() == theta) continue;
        cands.push_back(theta);
    }
    if (cands.empty()) return best;

    const bool classify = target_kind_ == TargetKind::klass;
    const std::size_t kk = classify ? static_cast<std::size_t>(num_classes_) : 0;
    // Parent impurity from the same sample the children are scored on.
    TargetStats parent;
    if (classify) parent.counts.assign(kk, 0.0);
    for (const auto& [v, t] : obs.sample) {
        if (classify) {
            parent.counts[static_cast<std::size_t>(t)] += 1.0;
            parent.n += 1.0;
        } else {
            parent.n += 1.0;
            parent.sum += t;
            parent.sum2 += t * t;
        }
    }
    const double parent_metric = stats_metric(parent);

    for (double theta : cands) {
        TargetStats left, right;
        if (classify) {
            left.counts.assign(kk, 0.0);
            right.counts.assign(kk, 0.0);
        }
        for (const auto& [v, t] : obs.sample) {
            TargetStats& side = v <= theta ? left : right;
            if (classify) {
                side.counts[static_cast<std::size_t>(t)] += 1.0;
                side.n += 1.0;
            } else {
                side.n += 1.0;
                side.sum += t;
                side.sum2 += t * t;
            }
        }
        const double total = left.n + right.n;
        const double weighted =
            (left.n * stats_metric(left) + right.n * stats_metric(right)) / total;
        double gain = parent_metric - weighted;
        if (!classify) gain = parent_metric > kMinGain ? gain / parent_metric : 0.0;
        if (gain > best.gain) {
            best.gain = gain;
            best.feature = f;
            best.numeric = true;
            best.threshold = theta;
        }
    }
    return best;
}

IncrementalTree::Candidate IncrementalTree::categorical_candidate(const Node& leaf,
                                                                  int f) const {
    Candidate cand;
    const auto& per_symbol = leaf.cat_obs[static_cast<std::size_t>(f)];
    double total = 0.0;
    int seen_symbols = 0;
    for (const auto& s : per_symbol) {
        total += s.n;
        if (s.n > 0.0) ++seen_symbols;
    }
    if (total <= 0.0 || seen_symbols < 2) return cand;
    double weighted = 0.0;
    for (const auto& s : per_symbol) {
        if (s.n > 0.0) weighted += s.n * stats_metric(s);
    }
    weighted /= total;
    const double parent_metric = stats_metric(leaf.stats);
    double gain = parent_metric - weighted;
    if (target_kind_ == TargetKind::real)
        gain = parent_metric > kMinGain ? gain / parent_metric : 0.0;
    cand.gain = gain;
    cand.feature = f;
    cand.numeric = false;
    return cand;
}

void IncrementalTree::try_split(int leaf_idx, LeafEvent& ev) {
    const Node& leaf = nodes_[static_cast<std::size_t>(leaf_idx)];
    if (leaf.stats.n < 2.0) return;
    Candidate best;
    double second_gain = 0.0;
    for (int f = 0; f < schema_.dim(); ++f) {
        if (!((allowed_mask_ >> f) & 1u)) continue;
        const Candidate c = schema_.feature(f).kind == FeatureKind::numeric
                                ? best_numeric_candidate(leaf, f)
                                : categorical_candidate(leaf, f);
        if (c.feature < 0) continue;
        // Strict comparison keeps the lowest feature index on gain ties.
        if (c.gain > best.gain) {
            second_gain = std::max(second_gain, best.gain);
            best = c;
        } else {
            second_gain = std::max(second_gain, c.gain);
        }
    }
    if (best.feature < 0 || best.gain <= kMinGain) return;
    const double range =
        target_kind_ == TargetKind::klass ? std::log2(std::max(num_classes_, 2)) : 1.0;
    const double eps =
        std::sqrt(range * range * std::log(1.0 / config_.hoeffding_delta) / (2.0 * leaf.stats.n));
    if (best.gain - second_gain > eps || eps < config_.tie_threshold)
        execute_split(leaf_idx, best, ev);
}

void IncrementalTree::execute_split(int leaf_idx, const Candidate& c, LeafEvent& ev) {
    const int child_count =
        c.numeric ? 2 : static_cast<int>(schema_.feature(c.feature).alphabet.size());
    {
        Node& node = nodes_[static_cast<std::size_t>(leaf_idx)];
        ev.destroyed.push_back(node.leaf_id);
        leaf_index_.erase(node.leaf_id);
        node.fallback = std::move(node.stats);
        node.stats = TargetStats{};
        reset_observers(node);
        node.is_leaf = false;
        node.split_feature = c.feature;
        node.numeric_split = c.numeric;
        node.threshold = c.threshold;
        node.routed_total = 0;
    }
    const int depth = nodes_[static_cast<std::size_t>(leaf_idx)].depth;
    std::vector<int> kids;
    kids.reserve(static_cast<std::size_t>(child_count));
    for (int k = 0; k < child_count; ++k) {
        const int idx = alloc_node(); // may reallocate the node pool
        init_leaf(idx, leaf_idx, depth + 1, &ev);
        kids.push_back(idx);
    }
    Node& node = nodes_[static_cast<std::size_t>(leaf_idx)];
    node.children = std::move(kids);
    node.child_counts.assign(static_cast<std::size_t>(child_count), 0);
    ++splits_made_;
}

std::uint64_t IncrementalTree::route(const Instance& x, const FeatureSubset& present,
                                     RngHandle& rng) const {
    if (present.dim() != schema_.dim())
        throw SchemaError("subset dimension does not match schema");
    if (static_cast<int>(x.size()) != schema_.dim())
        throw SchemaError("instance has wrong dimension");
    int idx = root_;
    while (!nodes_[static_cast<std::size_t>(idx)].is_leaf) {
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        int b;
        if (present.contains(node.split_feature)) {
            b = branch_of(node, x);
        } else {
            b = static_cast<int>(rng.weighted(node.child_counts));
        }
        idx = node.children[static_cast<std::size_t>(b)];
    }
    return nodes_[static_cast<std::size_t>(idx)].leaf_id;
}

std::uint64_t IncrementalTree::route_full(const Instance& x) const {
    int idx = root_;
    while (!nodes_[static_cast<std::size_t>(idx)].is_leaf) {
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        idx = node.children[static_cast<std::size_t>(branch_of(node, x))];
    }
    return nodes_[static_cast<std::size_t>(idx)].leaf_id;
}

Prediction IncrementalTree::predict(const Instance& x) const {
    if (static_cast<int>(x.size()) != schema_.dim())
        throw SchemaError("instance has wrong dimension");
    int idx = root_;
    while (!nodes_[static_cast<std::size_t>(idx)].is_leaf) {
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        idx = node.children[static_cast<std::size_t>(branch_of(node, x))];
    }
    for (int at = idx; at != -1; at = nodes_[static_cast<std::size_t>(at)].parent) {
        const Node& node = nodes_[static_cast<std::size_t>(at)];
        const TargetStats& s = node.is_leaf ? node.stats : node.fallback;
        if (s.n > 0.0) return stats_prediction(s);
    }
    if (replaced_fallback_.n > 0.0) return stats_prediction(replaced_fallback_);
    throw StateError("prediction from an untrained tree");
}

std::vector<std::uint64_t> IncrementalTree::leaf_ids() const {
    std::vector<std::uint64_t> out;
    out.reserve(leaf_index_.size());
    for (const auto& [id, idx] : leaf_index_) out.push_back(id);
    std::sort(out.begin(), out.end());
    return out;
}

const IncrementalTree::Node& IncrementalTree::node_of_leaf(std::uint64_t leaf_id) const {
    const auto it = leaf_index_.find(leaf_id);
    if (it == leaf_index_.end()) throw StateError("unknown leaf id");
    return nodes_[static_cast<std::size_t>(it->second)];
}

std::vector<std::vector<std::uint64_t>>
IncrementalTree::ancestor_leaf_sets(std::uint64_t leaf_id) const {
    const auto it = leaf_index_.find(leaf_id);
    if (it == leaf_index_.end()) throw StateError("unknown leaf id");
    std::vector<std::vector<std::uint64_t>> out;
    int at = nodes_[static_cast<std::size_t>(it->second)].parent;
    while (at != -1) {
        std::vector<std::uint64_t> leaves;
        collect_subtree(at, &leaves, nullptr);
        std::sort(leaves.begin(), leaves.end());
        out.push_back(std::move(leaves));
        at = nodes_[static_cast<std::size_t>(at)].parent;
    }
    return out;
}

int IncrementalTree::depth() const {
    int best = 0;
    for (const auto& [id, idx] : leaf_index_)
        best = std::max(best, nodes_[static_cast<std::size_t>(idx)].depth);
    return best;
}

void IncrementalTree::check_invariants() const {
    if (splits_made_ > config_.max_splits) throw StateError("split budget exceeded");
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const int at = stack.back();
        stack.pop_back();
        const Node& node = nodes_[static_cast<std::size_t>(at)];
        if (node.depth > config_.max_depth) throw StateError("node beyond max depth");
        if (node.is_leaf) {
            const auto it = leaf_index_.find(node.leaf_id);
            if (it == leaf_index_.end() || it->second != at)
                throw StateError("leaf id not registered");
            if (node.leaf_id >= next_leaf_id_) throw StateError("leaf id from the future");
            continue;
        }
        std::uint64_t total = 0;
        for (std::size_t b = 0; b < node.children.size(); ++b) {
            total += node.child_counts[b];
            const Node& child = nodes_[static_cast<std::size_t>(node.children[b])];
            if (child.parent != at) throw StateError("broken parent link");
            if (child.depth != node.depth + 1) throw StateError("broken depth");
            stack.push_back(node.children[b]);
        }
        // Every sample routed through a split node lands in exactly one child.
        if (total != node.routed_total) throw StateError("visit counts not conserved");
    }
}

nlohmann::json IncrementalTree::to_json() const {
    std::function<nlohmann::json(int)> emit = [&](int idx) -> nlohmann::json {
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        auto stats_json = [&](const TargetStats& s) {
            nlohmann::json js{{"n", s.n}};
            if (target_kind_ == TargetKind::klass) {
                js["counts"] = s.counts;
            } else {
                js["sum"] = s.sum;
                js["sum2"] = s.sum2;
            }
            return js;
        };
        if (node.is_leaf) {
            return nlohmann::json{{"leaf", true},
                                  {"id", node.leaf_id},
                                  {"stats", stats_json(node.stats)}};
        }
        nlohmann::json children = nlohmann::json::array();
        for (int c : node.children) children.push_back(emit(c));
        nlohmann::json js{{"leaf", false},
                          {"feature", node.split_feature},
                          {"numeric", node.numeric_split},
                          {"child_counts", node.child_counts},
                          {"routed", node.routed_total},
                          {"fallback", stats_json(node.fallback)},
                          {"children", std::move(children)}};
        if (node.numeric_split) js["threshold"] = node.threshold;
        return js;
    };
    return nlohmann::json{
        {"schema", schema_.to_json()},
        {"target", target_kind_ == TargetKind::klass ? "class" : "real"},
        {"classes", num_classes_},
        {"allowed_mask", allowed_mask_},
        {"config", config_.to_json()},
        {"next_leaf_id", next_leaf_id_},
        {"splits", splits_made_},
        {"seen", seen_},
        {"root", emit(root_)}};
}

IncrementalTree IncrementalTree::from_json(const nlohmann::json& j, std::uint64_t seed) {
    try {
        const StreamSchema schema = StreamSchema::from_json(j.at("schema"));
        const TargetKind kind =
            j.at("target").get<std::string>() == "class" ? TargetKind::klass : TargetKind::real;
        const int classes = j.at("classes").get<int>();
        const TreeConfig config = TreeConfig::from_json(j.at("config"));
        const auto mask = j.at("allowed_mask").get<std::uint64_t>();
        IncrementalTree tree(schema, kind, classes, config, mask, seed);
        tree.nodes_.clear();
        tree.free_nodes_.clear();
        tree.leaf_index_.clear();

        auto stats_from = [&](const nlohmann::json& js) {
            TargetStats s;
            s.n = js.at("n").get<double>();
            if (kind == TargetKind::klass) {
                s.counts = js.at("counts").get<std::vector<double>>();
            } else {
                s.sum = js.at("sum").get<double>();
                s.sum2 = js.at("sum2").get<double>();
            }
            return s;
        };
        std::function<int(const nlohmann::json&, int, int)> build =
            [&](const nlohmann::json& js, int parent, int depth) -> int {
            const int idx = tree.alloc_node();
            if (js.at("leaf").get<bool>()) {
                tree.init_leaf(idx, parent, depth, nullptr);
                Node& node = tree.nodes_[static_cast<std::size_t>(idx)];
                // init_leaf assigned a fresh id; restore the saved one.
                tree.leaf_index_.erase(node.leaf_id);
                --tree.next_leaf_id_;
                node.leaf_id = js.at("id").get<std::uint64_t>();
                node.stats = stats_from(js.at("stats"));
                tree.leaf_index_[node.leaf_id] = idx;
                return idx;
            }
            {
                Node fresh;
                fresh.is_leaf = false;
                fresh.parent = parent;
                fresh.depth = depth;
                fresh.split_feature = js.at("feature").get<int>();
                fresh.numeric_split = js.at("numeric").get<bool>();
                if (fresh.numeric_split) fresh.threshold = js.at("threshold").get<double>();
                fresh.child_counts = js.at("child_counts").get<std::vector<std::uint64_t>>();
                fresh.routed_total = js.at("routed").get<std::uint64_t>();
                fresh.fallback = stats_from(js.at("fallback"));
                tree.nodes_[static_cast<std::size_t>(idx)] = std::move(fresh);
            }
            std::vector<int> kids;
            for (const auto& jc : js.at("children"))
                kids.push_back(build(jc, idx, depth + 1));
            tree.nodes_[static_cast<std::size_t>(idx)].children = std::move(kids);
            return idx;
        };
        tree.root_ = build(j.at("root"), -1, 0);
        tree.next_leaf_id_ = j.at("next_leaf_id").get<std::uint64_t>();
        tree.splits_made_ = j.at("splits").get<int>();
        tree.seen_ = j.at("seen").get<std::uint64_t>();
        return tree;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed tree JSON: ") + e.what());
    }
}

} // namespace streamsage
