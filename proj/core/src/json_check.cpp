#include "streamsage/json_check.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "streamsage/error.hpp"

namespace streamsage {

namespace {

bool type_matches(const std::string& type, const nlohmann::json& v) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (type == "number") return v.is_number();
    throw ConfigError("unsupported schema type '" + type + "'");
}

void check_node(const nlohmann::json& schema, const nlohmann::json& doc, const std::string& at,
                std::vector<std::string>& out) {
    if (!schema.is_object()) throw ConfigError("schema node at " + at + " is not an object");

    if (schema.contains("type")) {
        const auto type = schema.at("type").get<std::string>();
        if (!type_matches(type, doc)) {
            out.push_back(at + ": expected " + type + ", got " + doc.type_name());
            return; // child checks would only cascade
        }
    }
    if (schema.contains("enum")) {
        bool hit = false;
        for (const auto& v : schema.at("enum"))
            if (v == doc) hit = true;
        if (!hit) out.push_back(at + ": value " + doc.dump() + " is not in the allowed set");
    }
    if (schema.contains("minimum") && doc.is_number()) {
        if (doc.get<double>() < schema.at("minimum").get<double>())
            out.push_back(at + ": value " + doc.dump() + " is below the minimum " +
                          schema.at("minimum").dump());
    }
    if (schema.contains("required") && doc.is_object()) {
        for (const auto& key : schema.at("required"))
            if (!doc.contains(key.get<std::string>()))
                out.push_back(at + ": missing required property '" + key.get<std::string>() + "'");
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (const auto& [key, sub] : schema.at("properties").items())
            if (doc.contains(key)) check_node(sub, doc.at(key), at + "/" + key, out);
    }
    if (schema.contains("items") && doc.is_array()) {
        std::size_t i = 0;
        for (const auto& el : doc) {
            check_node(schema.at("items"), el, at + "/" + std::to_string(i), out);
            ++i;
        }
    }
}

} // namespace

std::vector<std::string> json_check(const nlohmann::json& schema, const nlohmann::json& doc) {
    std::vector<std::string> out;
    check_node(schema, doc, "$", out);
    return out;
}

std::vector<std::string> json_check_file(const std::string& schema_path,
                                         const nlohmann::json& doc) {
    std::ifstream in(schema_path);
    if (!in) throw ParseError("cannot open '" + schema_path + "'");
    nlohmann::json schema;
    try {
        in >> schema;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + schema_path + "': " + e.what());
    }
    return json_check(schema, doc);
}

} // namespace streamsage
