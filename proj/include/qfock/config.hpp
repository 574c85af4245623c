#pragma once

#include "qfock/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace qfock {

/// Flat structured-text configuration, a small TOML subset:
///
///   # comment
///   key = 3.5            # number
///   key = "text"         # string
///   key = [1, 2, 3]      # number list
///   key = [{a = "x", b = 1}, ...]   # inline table list (one line)
///   [[section]]          # array-of-tables header
///
/// Keys may contain dots ("vec.phi1").  Values live on one line.  There are
/// no implicit defaults anywhere: every lookup of a missing key throws.
class ConfigTable {
 public:
  struct Value {
    enum class Type { Number, String, NumberList, TableList };
    Type type = Type::Number;
    double number = 0.0;
    bool is_integer = false;
    std::string str;
    std::vector<double> numbers;
    std::vector<ConfigTable> tables;
  };

  bool has(const std::string& key) const;
  double get_number(const std::string& key) const;
  long long get_int(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  Complex get_complex(const std::string& key) const;  // parsed from a string
  std::vector<double> get_number_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;
  const std::vector<ConfigTable>& get_table_list(const std::string& key) const;

  void set(const std::string& key, Value v) { values_[key] = std::move(v); }
  void set_number(const std::string& key, double x, bool integral = false);
  void set_string(const std::string& key, std::string s);
  void set_number_list(const std::string& key, std::vector<double> xs);
  std::vector<ConfigTable>& table_list(const std::string& key);

  const std::map<std::string, Value>& values() const { return values_; }

 private:
  const Value& require(const std::string& key, Value::Type t) const;
  std::map<std::string, Value> values_;
};

ConfigTable parse_config_text(const std::string& text);
ConfigTable parse_config_file(const std::string& path);

}  // namespace qfock
