#ifndef STREAMSAGE_JSON_CHECK_HPP
#define STREAMSAGE_JSON_CHECK_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace streamsage {

// Validates a document against a small JSON-schema subset: `type` (object,
// array, string, number, integer, boolean), `properties`, `required`,
// `items`, `enum`, `minimum`. Returns one message per violation, empty when
// the document conforms.
std::vector<std::string> json_check(const nlohmann::json& schema, const nlohmann::json& doc);

std::vector<std::string> json_check_file(const std::string& schema_path,
                                         const nlohmann::json& doc);

} // namespace streamsage

#endif
