#include "qfock/config.hpp"

#include "qfock/grammar.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qfock {

bool ConfigTable::has(const std::string& key) const {
  return values_.count(key) > 0;
}

const ConfigTable::Value& ConfigTable::require(const std::string& key,
                                               Value::Type t) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("config: missing required key '" + key + "'");
  if (it->second.type != t)
    throw std::invalid_argument("config: key '" + key + "' has the wrong type");
  return it->second;
}

double ConfigTable::get_number(const std::string& key) const {
  return require(key, Value::Type::Number).number;
}

long long ConfigTable::get_int(const std::string& key) const {
  const Value& v = require(key, Value::Type::Number);
  if (!v.is_integer)
    throw std::invalid_argument("config: key '" + key + "' must be an integer");
  return static_cast<long long>(v.number);
}

const std::string& ConfigTable::get_string(const std::string& key) const {
  return require(key, Value::Type::String).str;
}

Complex ConfigTable::get_complex(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("config: missing required key '" + key + "'");
  if (it->second.type == Value::Type::Number)
    return Complex(it->second.number, 0.0);
  if (it->second.type == Value::Type::String)
    return parse_complex(it->second.str);
  throw std::invalid_argument("config: key '" + key + "' is not a complex value");
}

std::vector<double> ConfigTable::get_number_list(const std::string& key) const {
  return require(key, Value::Type::NumberList).numbers;
}

std::vector<int> ConfigTable::get_int_list(const std::string& key) const {
  std::vector<int> out;
  for (double x : get_number_list(key)) {
    if (x != std::floor(x))
      throw std::invalid_argument("config: key '" + key + "' must list integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

const std::vector<ConfigTable>& ConfigTable::get_table_list(
    const std::string& key) const {
  return require(key, Value::Type::TableList).tables;
}

void ConfigTable::set_number(const std::string& key, double x, bool integral) {
  Value v;
  v.type = Value::Type::Number;
  v.number = x;
  v.is_integer = integral || x == std::floor(x);
  values_[key] = std::move(v);
}

void ConfigTable::set_string(const std::string& key, std::string s) {
  Value v;
  v.type = Value::Type::String;
  v.str = std::move(s);
  values_[key] = std::move(v);
}

void ConfigTable::set_number_list(const std::string& key, std::vector<double> xs) {
  Value v;
  v.type = Value::Type::NumberList;
  v.numbers = std::move(xs);
  values_[key] = std::move(v);
}

std::vector<ConfigTable>& ConfigTable::table_list(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) {
    Value v;
    v.type = Value::Type::TableList;
    it = values_.emplace(key, std::move(v)).first;
  }
  if (it->second.type != Value::Type::TableList)
    throw std::invalid_argument("config: key '" + key + "' is not a table list");
  return it->second.tables;
}

namespace {

struct Line {
  int number;
  std::string text;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// removes a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool parse_number(const std::string& text, double* out, bool* integral) {
  const char* start = text.c_str();
  char* end = nullptr;
  double v = std::strtod(start, &end);
  if (end != start + text.size()) return false;
  *out = v;
  *integral = text.find_first_of(".eE") == std::string::npos;
  return true;
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  bool quoted = false;
  std::string cur;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (!quoted) {
      if (c == '[' || c == '{') ++depth;
      if (c == ']' || c == '}') --depth;
      if (c == sep && depth == 0) {
        parts.push_back(cur);
        cur.clear();
        continue;
      }
    }
    cur += c;
  }
  if (!strip(cur).empty() || !parts.empty()) parts.push_back(cur);
  return parts;
}

ConfigTable::Value parse_value(const std::string& raw, int line);

ConfigTable parse_inline_table(const std::string& body, int line) {
  ConfigTable t;
  for (const std::string& part : split_top_level(body, ',')) {
    const std::string kv = strip(part);
    if (kv.empty()) continue;
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value in inline table");
    t.set(strip(kv.substr(0, eq)), parse_value(strip(kv.substr(eq + 1)), line));
  }
  return t;
}

ConfigTable::Value parse_value(const std::string& raw, int line) {
  ConfigTable::Value v;
  if (raw.empty()) fail(line, "empty value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      fail(line, "unterminated string literal");
    v.type = ConfigTable::Value::Type::String;
    v.str = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') fail(line, "unterminated list");
    const std::string body = strip(raw.substr(1, raw.size() - 2));
    if (!body.empty() && body.front() == '{') {
      v.type = ConfigTable::Value::Type::TableList;
      for (const std::string& part : split_top_level(body, ',')) {
        const std::string item = strip(part);
        if (item.empty()) continue;
        if (item.front() != '{' || item.back() != '}')
          fail(line, "expected { ... } items in table list");
        v.tables.push_back(
            parse_inline_table(item.substr(1, item.size() - 2), line));
      }
      return v;
    }
    v.type = ConfigTable::Value::Type::NumberList;
    for (const std::string& part : split_top_level(body, ',')) {
      const std::string item = strip(part);
      if (item.empty()) continue;
      double x;
      bool integral;
      if (!parse_number(item, &x, &integral))
        fail(line, "expected a number in list: '" + item + "'");
      v.numbers.push_back(x);
    }
    return v;
  }
  double x;
  bool integral;
  if (!parse_number(raw, &x, &integral))
    fail(line, "cannot parse value '" + raw + "'");
  v.type = ConfigTable::Value::Type::Number;
  v.number = x;
  v.is_integer = integral;
  return v;
}

}  // namespace

ConfigTable parse_config_text(const std::string& text) {
  ConfigTable root;
  ConfigTable* current = &root;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip(strip_comment(raw));
    if (line.empty()) continue;

    if (line.size() > 4 && line.compare(0, 2, "[[") == 0 &&
        line.compare(line.size() - 2, 2, "]]") == 0) {
      const std::string name = strip(line.substr(2, line.size() - 4));
      if (name.empty()) fail(lineno, "empty section name");
      auto& list = root.table_list(name);
      list.emplace_back();
      current = &list.back();
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = strip(line.substr(0, eq));
    const std::string val = strip(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    current->set(key, parse_value(val, lineno));
  }
  return root;
}

ConfigTable parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace qfock
