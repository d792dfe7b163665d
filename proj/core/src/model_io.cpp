#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streamsage/error.hpp"
#include "streamsage/model.hpp"

namespace streamsage {

namespace {

constexpr const char* kFormat = "streamsage.model";
constexpr int kVersion = 1;

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("model option '" + key + "' expects a number, got '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("model option '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "0" || v == "false") return false;
    if (v == "1" || v == "true") return true;
    throw ConfigError("model option '" + key + "' expects 0/1, got '" + v + "'");
}

} // namespace

ModelSpec ModelSpec::parse(const std::string& text) {
    if (text.empty()) throw ConfigError("empty model spec");
    ModelSpec spec;

    if (text.rfind("constant:", 0) == 0) {
        spec.kind = "constant";
        for (const auto& tok : split_list(text.substr(9), ','))
            spec.constant_values.push_back(parse_double("constant", tok));
        if (spec.constant_values.empty()) throw ConfigError("constant model needs values");
        return spec;
    }
    if (text.rfind("file:", 0) == 0) {
        spec.kind = "file";
        spec.path = text.substr(5);
        const std::string suffix = ",frozen";
        if (spec.path.size() > suffix.size() &&
            spec.path.compare(spec.path.size() - suffix.size(), suffix.size(), suffix) == 0) {
            spec.frozen = true;
            spec.path.resize(spec.path.size() - suffix.size());
        }
        if (spec.path.empty()) throw ConfigError("file model needs a path");
        return spec;
    }

    const std::vector<std::string> parts = split_list(text, ',');
    spec.kind = parts[0];
    if (spec.kind == "hoeffding") spec.kind = "hoeffding_tree";
    if (spec.kind != "sgd_logistic" && spec.kind != "sgd_linear" && spec.kind != "hoeffding_tree")
        throw ConfigError("unknown model kind '" + parts[0] + "'");

    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string::npos)
            throw ConfigError("model option '" + parts[i] + "' is not key=value");
        const std::string key = parts[i].substr(0, eq);
        const std::string val = parts[i].substr(eq + 1);
        if (key == "lr") spec.learning_rate = parse_double(key, val);
        else if (key == "standardize") spec.standardize = parse_bool(key, val);
        else if (key == "grace") spec.tree.grace_period = parse_int(key, val);
        else if (key == "delta") spec.tree.hoeffding_delta = parse_double(key, val);
        else if (key == "depth") spec.tree.max_depth = parse_int(key, val);
        else if (key == "splits") spec.tree.max_splits = parse_int(key, val);
        else if (key == "adaptation") spec.tree.adaptation = parse_bool(key, val);
        else if (key == "candidates") spec.tree.numeric_candidates = parse_int(key, val);
        else if (key == "tie") spec.tree.tie_threshold = parse_double(key, val);
        else throw ConfigError("unknown model option '" + key + "'");
    }
    return spec;
}

std::unique_ptr<Model> model_build(const ModelSpec& spec, const StreamSchema& schema,
                                   std::uint64_t seed) {
    if (spec.kind == "constant") {
        if (schema.target().kind == TargetKind::klass) {
            if (static_cast<int>(spec.constant_values.size()) != schema.target().num_classes)
                throw ConfigError("constant model needs one value per class");
            return std::make_unique<ConstantModel>(
                Prediction::probabilities(spec.constant_values));
        }
        if (spec.constant_values.size() != 1)
            throw ConfigError("constant regression model needs exactly one value");
        return std::make_unique<ConstantModel>(Prediction::real(spec.constant_values[0]));
    }
    if (spec.kind == "sgd_logistic")
        return SgdModel::logistic(schema, spec.learning_rate, spec.standardize);
    if (spec.kind == "sgd_linear")
        return SgdModel::linear(schema, spec.learning_rate, spec.standardize);
    if (spec.kind == "hoeffding_tree") {
        spec.tree.validate();
        return std::make_unique<HoeffdingTreeModel>(schema, spec.tree, seed);
    }
    if (spec.kind == "file") {
        auto model = model_load(spec.path, schema, seed);
        if (spec.frozen) return std::make_unique<FrozenModel>(std::move(model));
        return model;
    }
    throw ConfigError("unknown model kind '" + spec.kind + "'");
}

nlohmann::json model_to_json(const Model& model) {
    return {{"format", kFormat}, {"version", kVersion}, {"kind", model.kind_name()},
            {"payload", model.payload_json()}};
}

std::unique_ptr<Model> model_from_json(const nlohmann::json& j, const StreamSchema& schema,
                                       std::uint64_t seed) {
    try {
        if (j.at("format").get<std::string>() != kFormat)
            throw ParseError("not a model document");
        if (j.at("version").get<int>() != kVersion)
            throw ParseError("unsupported model document version");
        const std::string kind = j.at("kind").get<std::string>();
        const nlohmann::json& payload = j.at("payload");
        if (kind == "constant") return ConstantModel::from_payload(payload);
        if (kind == "sgd_logistic" || kind == "sgd_linear")
            return SgdModel::from_payload(payload, schema);
        if (kind == "hoeffding_tree") return HoeffdingTreeModel::from_payload(payload, seed);
        if (kind == "frozen")
            return std::make_unique<FrozenModel>(
                model_from_json(payload.at("inner"), schema, seed));
        throw ParseError("unknown model kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed model document: ") + e.what());
    }
}

void model_save(const Model& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << model_to_json(model).dump(2) << '\n';
    if (!out) throw ParseError("failed writing '" + path + "'");
}

std::unique_ptr<Model> model_load(const std::string& path, const StreamSchema& schema,
                                  std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
    return model_from_json(j, schema, seed);
}

} // namespace streamsage
