#pragma once

// Reader for the small TOML subset used by problem/experiment configs:
// comments, [section] / [section.sub] headers, and `key = value` lines where
// value is a number, quoted string, boolean, or flat array of numbers or
// strings. Parsed into an nlohmann::json object so that .toml and .json
// configs feed the same builders.

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace tfpo::tomlmini {

inline std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

inline nlohmann::json parse_scalar(const std::string& tok, int lineno) {
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
    return tok.substr(1, tok.size() - 2);
  if (tok == "true") return true;
  if (tok == "false") return false;
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos == tok.size()) return v;
  } catch (...) {
  }
  throw std::runtime_error("toml: bad value '" + tok + "' at line " + std::to_string(lineno));
}

inline nlohmann::json parse_value(const std::string& raw, int lineno) {
  const std::string v = trim(raw);
  if (v.empty()) throw std::runtime_error("toml: empty value at line " + std::to_string(lineno));
  if (v.front() == '[') {
    if (v.back() != ']') throw std::runtime_error("toml: unterminated array at line " + std::to_string(lineno));
    nlohmann::json arr = nlohmann::json::array();
    std::string body = v.substr(1, v.size() - 2);
    std::string cur;
    bool in_str = false;
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        if (!trim(cur).empty()) arr.push_back(parse_scalar(trim(cur), lineno));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) arr.push_back(parse_scalar(trim(cur), lineno));
    return arr;
  }
  return parse_scalar(v, lineno);
}

inline nlohmann::json* descend(nlohmann::json& root, const std::string& dotted) {
  nlohmann::json* node = &root;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    part = trim(part);
    if (part.empty()) throw std::runtime_error("toml: empty table name component");
    node = &(*node)[part];
  }
  return node;
}

inline nlohmann::json parse(std::istream& in) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::runtime_error("toml: bad table header at line " + std::to_string(lineno));
      table = descend(root, line.substr(1, line.size() - 2));
      if (!table->is_object() && !table->is_null())
        throw std::runtime_error("toml: table redefines a value at line " + std::to_string(lineno));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("toml: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::runtime_error("toml: empty key at line " + std::to_string(lineno));
    (*table)[key] = parse_value(line.substr(eq + 1), lineno);
  }
  return root;
}

inline nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    in >> j;
    return j;
  }
  return parse(in);
}

}  // namespace tfpo::tomlmini
