#pragma once

#include <map>
#include <string>
#include <vector>

namespace stcmc::toml {

/// Value of the TOML subset used by the configuration files: booleans,
/// integers, floats, strings and single-line arrays of these.
struct Value {
  enum class Type { boolean, integer, number, string, array };
  Type type = Type::string;
  bool b = false;
  long long i = 0;
  double d = 0;
  std::string s;
  std::vector<Value> arr;

  double as_number() const;
  long long as_integer() const;
  bool as_bool() const;
  const std::string& as_string() const;
};

/// Flat table keyed by dotted "section.key" strings.
class Table {
 public:
  static Table parse(const std::string& text);
  static Table parse_file(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  bool has_section(const std::string& section) const;
  const Value& at(const std::string& key) const;

  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  std::vector<double> number_list(const std::string& key) const;
  std::vector<std::string> string_list(const std::string& key) const;

 private:
  std::map<std::string, Value> kv_;
};

}  // namespace stcmc::toml
