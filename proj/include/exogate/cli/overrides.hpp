#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "exogate/error.hpp"
#include "exogate/io/json_text.hpp"

namespace exogate::cli {

using io::Json;

inline std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  for (const auto& p : parts)
    if (p.empty()) throw InvalidConfig("empty segment in parameter path '" + path + "'");
  return parts;
}

inline bool is_index(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Sets doc[path] = value. Intermediate objects are created on demand; array
// elements must already exist. Whether the final key is part of the schema
// is decided by the scenario parser, which rejects unknown keys.
inline void set_path(Json& doc, const std::string& path, const Json& value) {
  const auto parts = split_path(path);
  Json* node = &doc;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& key = parts[i];
    const bool last = i + 1 == parts.size();
    if (node->is_array()) {
      if (!is_index(key)) throw InvalidConfig("'" + path + "': expected array index at " + key);
      const std::size_t idx = std::stoul(key);
      if (idx >= node->size()) throw InvalidConfig("'" + path + "': index " + key + " out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = Json::object();
      if (!node->is_object()) throw InvalidConfig("'" + path + "' does not resolve: " + key);
      node = &(*node)[key];
    }
    if (last) *node = value;
  }
}

// Values are read as JSON when they parse (numbers, booleans, arrays),
// otherwise as a bare string.
inline Json parse_value(const std::string& text) {
  Json v = Json::parse(text, nullptr, false);
  if (v.is_discarded()) return Json(text);
  return v;
}

// "--set key.path=value"; later overrides win.
inline void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InvalidConfig("override '" + assignment + "' must look like key.path=value");
  set_path(doc, assignment.substr(0, eq), parse_value(assignment.substr(eq + 1)));
}

}  // namespace exogate::cli
