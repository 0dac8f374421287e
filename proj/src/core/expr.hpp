#pragma once

#include <memory>
#include <string>

namespace stcmc {

/// Closed-form scalar field over chart coordinates, parsed from a small
/// arithmetic grammar: + - * / ^, parentheses, exp, log, sqrt, abs, the
/// trigonometric and hyperbolic functions, and the symbols x, y, z,
/// r (= sqrt(x^2+y^2+z^2)), pi, e.
class FieldExpr {
 public:
  FieldExpr() = default;
  static FieldExpr parse(const std::string& text);

  bool empty() const { return root_ == nullptr; }
  double eval(double x, double y, double z) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace stcmc
