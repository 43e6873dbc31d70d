#pragma once

// Structural validator for the JSON-schema subset used by the shipped
// schemas: type (string or union), properties, required, items, enum.

#include <string>
#include <vector>

#include <json.hpp>

namespace schema {

using nlohmann::json;

inline bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

inline void validate(const json& value, const json& sch, const std::string& path,
                     std::vector<std::string>& errors) {
  if (sch.contains("type")) {
    const json& t = sch["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(value, t.get<std::string>());
    } else if (t.is_array()) {
      for (const auto& alt : t)
        if (type_matches(value, alt.get<std::string>())) ok = true;
    }
    if (!ok) errors.push_back(path + ": type mismatch");
  }
  if (sch.contains("enum")) {
    bool ok = false;
    for (const auto& alt : sch["enum"])
      if (value == alt) ok = true;
    if (!ok) errors.push_back(path + ": not in enum");
  }
  if (value.is_object()) {
    if (sch.contains("required"))
      for (const auto& key : sch["required"])
        if (!value.contains(key.get<std::string>()))
          errors.push_back(path + ": missing required key " + key.get<std::string>());
    if (sch.contains("properties"))
      for (const auto& [key, sub] : sch["properties"].items())
        if (value.contains(key)) validate(value[key], sub, path + "/" + key, errors);
  }
  if (value.is_array() && sch.contains("items"))
    for (size_t i = 0; i < value.size(); ++i)
      validate(value[i], sch["items"], path + "[" + std::to_string(i) + "]", errors);
}

inline std::vector<std::string> check(const json& value, const json& sch) {
  std::vector<std::string> errors;
  validate(value, sch, "$", errors);
  return errors;
}

}  // namespace schema
