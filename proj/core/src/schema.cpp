#include "streamsage/schema.hpp"

#include <cmath>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace streamsage {

StreamSchema::StreamSchema(std::vector<FeatureSpec> features, TargetSpec target)
    : features_(std::move(features)), target_(std::move(target)) {
    if (features_.empty()) throw SchemaError("schema must declare at least one feature");
    if (features_.size() > 63) throw SchemaError("schema supports at most 63 features");
    std::unordered_set<std::string> names;
    for (const auto& f : features_) {
        if (f.name.empty()) throw SchemaError("feature name must be non-empty");
        if (!names.insert(f.name).second)
            throw SchemaError("duplicate feature name: " + f.name);
        if (f.kind == FeatureKind::categorical && f.alphabet.empty())
            throw SchemaError("categorical feature '" + f.name + "' needs an alphabet");
        if (f.kind == FeatureKind::numeric && !f.alphabet.empty())
            throw SchemaError("numeric feature '" + f.name + "' must not declare an alphabet");
    }
    if (target_.name.empty()) throw SchemaError("target name must be non-empty");
    if (names.count(target_.name))
        throw SchemaError("target name collides with feature: " + target_.name);
    if (target_.kind == TargetKind::klass && target_.num_classes < 2)
        throw SchemaError("class target needs at least two classes");
    if (target_.kind == TargetKind::real && target_.num_classes != 0)
        throw SchemaError("real target must not declare classes");
}

const FeatureSpec& StreamSchema::feature(int i) const {
    if (i < 0 || i >= dim()) throw SchemaError("feature index out of range");
    return features_[static_cast<std::size_t>(i)];
}

int StreamSchema::feature_index(const std::string& name) const {
    for (int i = 0; i < dim(); ++i)
        if (features_[static_cast<std::size_t>(i)].name == name) return i;
    throw SchemaError("unknown feature: " + name);
}

std::int32_t StreamSchema::symbol_index(int i, const std::string& symbol) const {
    const FeatureSpec& f = feature(i);
    if (f.kind != FeatureKind::categorical)
        throw SchemaError("feature '" + f.name + "' is not categorical");
    for (std::size_t k = 0; k < f.alphabet.size(); ++k)
        if (f.alphabet[k] == symbol) return static_cast<std::int32_t>(k);
    throw SchemaError("symbol '" + symbol + "' not in alphabet of feature '" + f.name + "'");
}

void StreamSchema::validate_instance(const Instance& x) const {
    if (static_cast<int>(x.size()) != dim())
        throw SchemaError("instance has wrong dimension");
    for (int i = 0; i < dim(); ++i) {
        const FeatureSpec& f = features_[static_cast<std::size_t>(i)];
        const FeatureValue& v = x[static_cast<std::size_t>(i)];
        if (v.kind() != f.kind)
            throw SchemaError("feature '" + f.name + "' has wrong kind");
        if (f.kind == FeatureKind::numeric) {
            if (!std::isfinite(v.num()))
                throw SchemaError("feature '" + f.name + "' is not finite");
        } else if (v.cat() >= static_cast<std::int32_t>(f.alphabet.size())) {
            throw SchemaError("feature '" + f.name + "' index outside alphabet");
        }
    }
}

void StreamSchema::validate_target(const Target& y) const {
    if (y.kind() != target_.kind) throw SchemaError("target has wrong kind");
    if (y.kind() == TargetKind::klass && y.label() >= target_.num_classes)
        throw SchemaError("class label outside declared range");
    if (y.kind() == TargetKind::real && !std::isfinite(y.value()))
        throw SchemaError("real target is not finite");
}

nlohmann::json StreamSchema::to_json() const {
    nlohmann::json feats = nlohmann::json::array();
    for (const auto& f : features_) {
        nlohmann::json jf = {{"name", f.name},
                             {"kind", f.kind == FeatureKind::numeric ? "numeric" : "categorical"}};
        if (f.kind == FeatureKind::categorical) jf["alphabet"] = f.alphabet;
        feats.push_back(std::move(jf));
    }
    nlohmann::json jt = {{"name", target_.name},
                         {"kind", target_.kind == TargetKind::klass ? "class" : "real"}};
    if (target_.kind == TargetKind::klass) jt["classes"] = target_.num_classes;
    return nlohmann::json{{"features", std::move(feats)}, {"target", std::move(jt)}};
}

StreamSchema StreamSchema::from_json(const nlohmann::json& j) {
    try {
        std::vector<FeatureSpec> feats;
        for (const auto& jf : j.at("features")) {
            FeatureSpec f;
            f.name = jf.at("name").get<std::string>();
            const std::string kind = jf.at("kind").get<std::string>();
            if (kind == "numeric") {
                f.kind = FeatureKind::numeric;
            } else if (kind == "categorical") {
                f.kind = FeatureKind::categorical;
                f.alphabet = jf.at("alphabet").get<std::vector<std::string>>();
            } else {
                throw ParseError("unknown feature kind: " + kind);
            }
            feats.push_back(std::move(f));
        }
        TargetSpec t;
        const auto& jt = j.at("target");
        t.name = jt.at("name").get<std::string>();
        const std::string kind = jt.at("kind").get<std::string>();
        if (kind == "class") {
            t.kind = TargetKind::klass;
            t.num_classes = jt.at("classes").get<int>();
        } else if (kind == "real") {
            t.kind = TargetKind::real;
        } else {
            throw ParseError("unknown target kind: " + kind);
        }
        return StreamSchema(std::move(feats), std::move(t));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed schema JSON: ") + e.what());
    }
}

StreamSchema StreamSchema::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open schema file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return from_json(j);
}

void StreamSchema::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write schema file: " + path);
    out << to_json().dump(2) << "\n";
}

bool StreamSchema::operator==(const StreamSchema& o) const {
    if (dim() != o.dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const auto& a = features_[static_cast<std::size_t>(i)];
        const auto& b = o.features_[static_cast<std::size_t>(i)];
        if (a.name != b.name || a.kind != b.kind || a.alphabet != b.alphabet) return false;
    }
    return target_.name == o.target_.name && target_.kind == o.target_.kind &&
           target_.num_classes == o.target_.num_classes;
}

} // namespace streamsage
