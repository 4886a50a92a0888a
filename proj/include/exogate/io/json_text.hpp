#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "exogate/error.hpp"

namespace exogate::io {

using Json = nlohmann::json;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses JSON, reporting failures as "<source>:<line>:<col>: <reason>" followed
// by the offending line.
inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t offset = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        line_start = i + 1;
      }
    }
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string reason = e.what();
    if (const auto pos = reason.find("syntax error"); pos != std::string::npos)
      reason = reason.substr(pos);
    throw ParseError(source + ":" + std::to_string(line) + ":" +
                     std::to_string(offset - line_start + 1) + ": " + reason + "\n  " +
                     text.substr(line_start, line_end - line_start));
  }
}

}  // namespace exogate::io
