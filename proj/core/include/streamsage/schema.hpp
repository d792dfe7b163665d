#ifndef STREAMSAGE_SCHEMA_HPP
#define STREAMSAGE_SCHEMA_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "streamsage/types.hpp"

namespace streamsage {

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    std::vector<std::string> alphabet; // non-empty iff categorical
};

struct TargetSpec {
    std::string name;
    TargetKind kind = TargetKind::klass;
    int num_classes = 0; // >= 2 iff kind == klass
};

// Declares the feature layout of a stream and its target. Validated on
// construction; instances and targets can be checked against it.
class StreamSchema {
public:
    StreamSchema() = default;
    StreamSchema(std::vector<FeatureSpec> features, TargetSpec target);

    int dim() const { return static_cast<int>(features_.size()); }
    const std::vector<FeatureSpec>& features() const { return features_; }
    const FeatureSpec& feature(int i) const;
    const TargetSpec& target() const { return target_; }

    // Index of a feature by name; SchemaError when absent.
    int feature_index(const std::string& name) const;

    // Index of a categorical symbol in feature i's alphabet; SchemaError
    // when the symbol is not declared.
    std::int32_t symbol_index(int i, const std::string& symbol) const;

    void validate_instance(const Instance& x) const;
    void validate_target(const Target& y) const;

    nlohmann::json to_json() const;
    static StreamSchema from_json(const nlohmann::json& j);
    static StreamSchema load(const std::string& path);
    void save(const std::string& path) const;

    bool operator==(const StreamSchema& o) const;

private:
    std::vector<FeatureSpec> features_;
    TargetSpec target_;
};

} // namespace streamsage

#endif
