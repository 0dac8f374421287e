#include "toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace stcmc::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config parse error at line " + std::to_string(line) + ": " + msg);
}

struct Cursor {
  const std::string& s;
  size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
};

Value parse_scalar(Cursor& c);

Value parse_array(Cursor& c) {
  Value v;
  v.type = Value::Type::array;
  ++c.pos;  // consume '['
  for (;;) {
    if (c.done()) fail(c.line, "unterminated array");
    if (c.peek() == ']') {
      ++c.pos;
      return v;
    }
    v.arr.push_back(parse_scalar(c));
    if (c.peek() == ',') {
      ++c.pos;
      continue;
    }
    if (c.peek() == ']') {
      ++c.pos;
      return v;
    }
    fail(c.line, "expected ',' or ']' in array");
  }
}

Value parse_scalar(Cursor& c) {
  c.skip_ws();
  if (c.pos >= c.s.size()) fail(c.line, "missing value");
  const char ch = c.s[c.pos];
  if (ch == '[') return parse_array(c);
  Value v;
  if (ch == '"') {
    v.type = Value::Type::string;
    ++c.pos;
    std::string out;
    while (c.pos < c.s.size() && c.s[c.pos] != '"') {
      char cc = c.s[c.pos];
      if (cc == '\\' && c.pos + 1 < c.s.size()) {
        ++c.pos;
        switch (c.s[c.pos]) {
          case 'n': cc = '\n'; break;
          case 't': cc = '\t'; break;
          case '"': cc = '"'; break;
          case '\\': cc = '\\'; break;
          default: fail(c.line, "unsupported escape");
        }
      }
      out += cc;
      ++c.pos;
    }
    if (c.pos >= c.s.size()) fail(c.line, "unterminated string");
    ++c.pos;
    v.s = out;
    return v;
  }
  // bare token: bool or number
  size_t start = c.pos;
  while (c.pos < c.s.size() && !std::isspace(static_cast<unsigned char>(c.s[c.pos])) &&
         c.s[c.pos] != ',' && c.s[c.pos] != ']' && c.s[c.pos] != '#')
    ++c.pos;
  const std::string tok = c.s.substr(start, c.pos - start);
  if (tok == "true" || tok == "false") {
    v.type = Value::Type::boolean;
    v.b = tok == "true";
    return v;
  }
  try {
    size_t used = 0;
    if (tok.find_first_of(".eE") == std::string::npos) {
      v.type = Value::Type::integer;
      v.i = std::stoll(tok, &used);
      if (used == tok.size()) return v;
    }
    v.type = Value::Type::number;
    v.d = std::stod(tok, &used);
    if (used != tok.size()) fail(c.line, "bad value token '" + tok + "'");
    return v;
  } catch (const std::exception&) {
    fail(c.line, "bad value token '" + tok + "'");
  }
}

std::string strip_comment(const std::string& raw) {
  bool in_str = false;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '"' && (i == 0 || raw[i - 1] != '\\')) in_str = !in_str;
    if (raw[i] == '#' && !in_str) return raw.substr(0, i);
  }
  return raw;
}

}  // namespace

double Value::as_number() const {
  if (type == Type::number) return d;
  if (type == Type::integer) return static_cast<double>(i);
  throw ConfigError("config value is not a number");
}

long long Value::as_integer() const {
  if (type == Type::integer) return i;
  if (type == Type::number && d == static_cast<long long>(d)) return static_cast<long long>(d);
  throw ConfigError("config value is not an integer");
}

bool Value::as_bool() const {
  if (type != Type::boolean) throw ConfigError("config value is not a boolean");
  return b;
}

const std::string& Value::as_string() const {
  if (type != Type::string) throw ConfigError("config value is not a string");
  return s;
}

Table Table::parse(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    line = line.substr(a, b - a + 1);

    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "bad section header");
      section = line.substr(1, line.size() - 2);
      if (section.empty()) fail(lineno, "empty section name");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key.empty()) fail(lineno, "empty key");
    for (char c : key)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
        fail(lineno, "bad key '" + key + "'");

    const std::string rest = line.substr(eq + 1);
    Cursor cur{rest, 0, lineno};
    const Value v = parse_scalar(cur);
    if (!cur.done()) fail(lineno, "trailing characters after value");

    const std::string full = section.empty() ? key : section + "." + key;
    if (table.kv_.count(full)) fail(lineno, "duplicate key '" + full + "'");
    table.kv_[full] = v;
  }
  return table;
}

Table Table::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool Table::has_section(const std::string& section) const {
  const std::string prefix = section + ".";
  auto it = kv_.lower_bound(prefix);
  return it != kv_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
}

const Value& Table::at(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

double Table::number(const std::string& key, double fallback) const {
  return has(key) ? at(key).as_number() : fallback;
}

long long Table::integer(const std::string& key, long long fallback) const {
  return has(key) ? at(key).as_integer() : fallback;
}

bool Table::boolean(const std::string& key, bool fallback) const {
  return has(key) ? at(key).as_bool() : fallback;
}

std::string Table::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? at(key).as_string() : fallback;
}

std::vector<double> Table::number_list(const std::string& key) const {
  const Value& v = at(key);
  if (v.type != Value::Type::array) throw ConfigError("'" + key + "' is not an array");
  std::vector<double> out;
  for (const Value& e : v.arr) out.push_back(e.as_number());
  return out;
}

std::vector<std::string> Table::string_list(const std::string& key) const {
  const Value& v = at(key);
  if (v.type != Value::Type::array) throw ConfigError("'" + key + "' is not an array");
  std::vector<std::string> out;
  for (const Value& e : v.arr) out.push_back(e.as_string());
  return out;
}

}  // namespace stcmc::toml
