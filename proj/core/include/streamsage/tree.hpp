#ifndef STREAMSAGE_TREE_HPP
#define STREAMSAGE_TREE_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "streamsage/rng.hpp"
#include "streamsage/schema.hpp"
#include "streamsage/subset.hpp"
#include "streamsage/types.hpp"

namespace streamsage {

struct TreeConfig {
    int grace_period = 200;       // samples at a leaf between split attempts
    double hoeffding_delta = 1e-7;
    int max_depth = 6;            // leaves at this depth never split
    int max_splits = 30;          // structural-change budget, never refunded
    bool adaptation = true;       // per-node error drift detection
    int numeric_candidates = 10;  // equal-frequency thresholds per attempt
    int sketch_capacity = 512;    // bounded value sample per leaf and feature
    double tie_threshold = 0.05;  // split anyway once the bound is this tight
    double drift_decay = 0.01;    // EWMA decay of the per-node error detector
    int drift_min_samples = 200;  // detector warm-up per node

    void validate() const;

    nlohmann::json to_json() const;
    static TreeConfig from_json(const nlohmann::json& j);
};

// Leaves created and destroyed by one learning step. Ids are stable and
// never reused, so external stores can key auxiliary data by leaf id.
struct LeafEvent {
    std::vector<std::uint64_t> created;
    std::vector<std::uint64_t> destroyed;
    bool empty() const { return created.empty() && destroyed.empty(); }
};

// Incremental decision tree for streams. Splits are accepted when the
// Hoeffding bound separates the top two candidate gains; numeric thresholds
// come from a bounded per-leaf sample, categorical splits are multiway over
// the alphabet. When adaptation is on, a per-node EWMA error detector
// replaces a degraded subtree with a fresh leaf.
class IncrementalTree {
public:
    IncrementalTree(StreamSchema schema, TargetKind target_kind, int num_classes,
                    TreeConfig config, std::uint64_t allowed_mask, std::uint64_t seed);

    LeafEvent learn_one(const Instance& x, const Target& y);

    // Descends to a leaf. Split features contained in `present` route by the
    // instance value; each absent split consumes exactly one random draw and
    // picks a child proportionally to its visit counts (uniform when all
    // counts are zero).
    std::uint64_t route(const Instance& x, const FeatureSubset& present, RngHandle& rng) const;

    // Deterministic descent with every feature present.
    std::uint64_t route_full(const Instance& x) const;

    // Leaf estimate for x: class frequencies or the running mean. Falls back
    // to the nearest ancestor's pre-split statistics for empty leaves and
    // throws StateError when the tree has never seen data.
    Prediction predict(const Instance& x) const;

    std::vector<std::uint64_t> leaf_ids() const; // sorted
    // Leaf ids under each ancestor of the given leaf, nearest ancestor first;
    // the last entry covers the whole tree.
    std::vector<std::vector<std::uint64_t>> ancestor_leaf_sets(std::uint64_t leaf_id) const;

    int split_count() const { return splits_made_; }
    std::uint64_t samples_seen() const { return seen_; }
    int depth() const;
    TargetKind target_kind() const { return target_kind_; }
    int num_classes() const { return num_classes_; }
    const TreeConfig& config() const { return config_; }
    const StreamSchema& schema() const { return schema_; }

    nlohmann::json to_json() const;
    static IncrementalTree from_json(const nlohmann::json& j, std::uint64_t seed);

    // Test hook: structural consistency, including visit-count conservation.
    void check_invariants() const;

private:
    struct TargetStats {
        std::vector<double> counts; // classification
        double n = 0.0;
        double sum = 0.0;  // regression
        double sum2 = 0.0; // regression
    };

    struct NumericObserver {
        std::vector<std::pair<double, double>> sample; // (value, encoded target)
        std::uint64_t seen = 0;
    };

    struct Node {
        bool is_leaf = true;
        int parent = -1;
        int depth = 0;
        // leaf state
        std::uint64_t leaf_id = 0;
        TargetStats stats;
        std::vector<NumericObserver> num_obs;            // indexed by feature
        std::vector<std::vector<TargetStats>> cat_obs;   // per feature, per symbol
        std::int64_t since_attempt = 0;
        // split state
        int split_feature = -1;
        bool numeric_split = true;
        double threshold = 0.0;
        std::vector<int> children;
        std::vector<std::uint64_t> child_counts;
        std::uint64_t routed_total = 0; // samples routed since the split
        TargetStats fallback;           // leaf statistics frozen at split time
        // drift detector
        double det_n = 0.0, det_mean = 0.0, det_m2 = 0.0, det_ewma = 0.0;
    };

    void add_target(TargetStats& s, const Target& y) const;
    double encode_target(const Target& y) const;
    double stats_metric(const TargetStats& s) const; // entropy or variance
    Prediction stats_prediction(const TargetStats& s) const;

    int alloc_node();
    void init_leaf(int idx, int parent, int depth, LeafEvent* ev);
    void reset_observers(Node& node);
    int branch_of(const Node& node, const Instance& x) const;
    int descend_learn(const Instance& x);
    void adapt_check(const Instance& x, const Target& y, LeafEvent& ev);
    void replace_subtree(int idx, LeafEvent& ev);
    void collect_subtree(int idx, std::vector<std::uint64_t>* leaves,
                         std::vector<int>* nodes) const;
    void try_split(int leaf_idx, LeafEvent& ev);
    struct Candidate {
        double gain = -1.0;
        int feature = -1;
        bool numeric = true;
        double threshold = 0.0;
    };
    Candidate best_numeric_candidate(const Node& leaf, int f) const;
    Candidate categorical_candidate(const Node& leaf, int f) const;
    void execute_split(int leaf_idx, const Candidate& c, LeafEvent& ev);
    const Node& node_of_leaf(std::uint64_t leaf_id) const;

    StreamSchema schema_;
    TargetKind target_kind_;
    int num_classes_;
    TreeConfig config_;
    std::uint64_t allowed_mask_;
    RngHandle rng_;
    std::vector<Node> nodes_;
    std::vector<int> free_nodes_;
    std::unordered_map<std::uint64_t, int> leaf_index_;
    std::uint64_t next_leaf_id_ = 0;
    std::uint64_t seen_ = 0;
    int splits_made_ = 0;
    int root_ = 0;
    TargetStats replaced_fallback_; // prediction continuity after root renewal
};

} // namespace streamsage

#endif
