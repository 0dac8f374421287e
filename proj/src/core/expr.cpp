#include "expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

#include "errors.hpp"

namespace stcmc {

namespace {

enum class Op {
  constant, var_x, var_y, var_z, var_r,
  add, sub, mul, div, pow, neg,
  fn_exp, fn_log, fn_sqrt, fn_abs,
  fn_sin, fn_cos, fn_tan, fn_asin, fn_acos, fn_atan,
  fn_sinh, fn_cosh, fn_tanh,
};

}  // namespace

struct FieldExpr::Node {
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const FieldExpr::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<FieldExpr::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<FieldExpr::Node>();
  n->op = Op::constant;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw ConfigError("expression parse error at offset " + std::to_string(pos_) + ": " + msg +
                      " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : -1;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+')) lhs = make(Op::add, lhs, term());
      else if (eat('-')) lhs = make(Op::sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*')) lhs = make(Op::mul, lhs, unary());
      else if (eat('/')) lhs = make(Op::div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Op::pow, base, unary());  // right-associative
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    size_t end = 0;
    double v = std::stod(s_.substr(pos_), &end);
    if (end == 0) fail("bad number");
    pos_ += end;
    return make_const(v);
  }

  NodePtr identifier() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name == "x") return make(Op::var_x);
    if (name == "y") return make(Op::var_y);
    if (name == "z") return make(Op::var_z);
    if (name == "r" || name == "rho") return make(Op::var_r);
    if (name == "pi") return make_const(M_PI);
    if (name == "e") return make_const(M_E);
    static const std::pair<const char*, Op> fns[] = {
        {"exp", Op::fn_exp},   {"log", Op::fn_log},   {"sqrt", Op::fn_sqrt},
        {"abs", Op::fn_abs},   {"sin", Op::fn_sin},   {"cos", Op::fn_cos},
        {"tan", Op::fn_tan},   {"asin", Op::fn_asin}, {"acos", Op::fn_acos},
        {"atan", Op::fn_atan}, {"sinh", Op::fn_sinh}, {"cosh", Op::fn_cosh},
        {"tanh", Op::fn_tanh},
    };
    for (const auto& [fname, op] : fns) {
      if (name == fname) {
        if (!eat('(')) fail("expected '(' after function " + name);
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(op, arg);
      }
    }
    fail("unknown symbol '" + name + "'");
  }
};

double eval_node(const FieldExpr::Node& n, double x, double y, double z) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::var_x: return x;
    case Op::var_y: return y;
    case Op::var_z: return z;
    case Op::var_r: return std::sqrt(x * x + y * y + z * z);
    case Op::add: return eval_node(*n.a, x, y, z) + eval_node(*n.b, x, y, z);
    case Op::sub: return eval_node(*n.a, x, y, z) - eval_node(*n.b, x, y, z);
    case Op::mul: return eval_node(*n.a, x, y, z) * eval_node(*n.b, x, y, z);
    case Op::div: return eval_node(*n.a, x, y, z) / eval_node(*n.b, x, y, z);
    case Op::pow: return std::pow(eval_node(*n.a, x, y, z), eval_node(*n.b, x, y, z));
    case Op::neg: return -eval_node(*n.a, x, y, z);
    case Op::fn_exp: return std::exp(eval_node(*n.a, x, y, z));
    case Op::fn_log: return std::log(eval_node(*n.a, x, y, z));
    case Op::fn_sqrt: return std::sqrt(eval_node(*n.a, x, y, z));
    case Op::fn_abs: return std::abs(eval_node(*n.a, x, y, z));
    case Op::fn_sin: return std::sin(eval_node(*n.a, x, y, z));
    case Op::fn_cos: return std::cos(eval_node(*n.a, x, y, z));
    case Op::fn_tan: return std::tan(eval_node(*n.a, x, y, z));
    case Op::fn_asin: return std::asin(eval_node(*n.a, x, y, z));
    case Op::fn_acos: return std::acos(eval_node(*n.a, x, y, z));
    case Op::fn_atan: return std::atan(eval_node(*n.a, x, y, z));
    case Op::fn_sinh: return std::sinh(eval_node(*n.a, x, y, z));
    case Op::fn_cosh: return std::cosh(eval_node(*n.a, x, y, z));
    case Op::fn_tanh: return std::tanh(eval_node(*n.a, x, y, z));
  }
  throw InvalidArgument("corrupt expression node");
}

}  // namespace

FieldExpr FieldExpr::parse(const std::string& text) {
  FieldExpr e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

double FieldExpr::eval(double x, double y, double z) const {
  if (!root_) throw InvalidArgument("evaluating empty expression");
  return eval_node(*root_, x, y, z);
}

}  // namespace stcmc
