#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace r13 {

namespace detail {
struct ExprNode;
}

/// Parsed arithmetic expression in the variables x and y.
///
/// Grammar (lowest to highest precedence): `+ -` (binary), `* /`, unary `-`/`+`,
/// `^` (right associative). Primaries are numbers, `x`, `y`, `pi`, parenthesised
/// expressions and calls to sin, cos, sqrt, exp, abs and atan2(a, b). atan2 has the
/// C library meaning: the polar angle of the point (b, a).
class Expr {
 public:
  Expr();  // the constant 0

  static Expr parse(std::string_view text);
  static Expr constant(double value);

  /// Throws EvalError on division by zero or atan2(0, 0).
  double eval(double x, double y) const;

  /// Canonical fully parenthesised form; parse(to_string()) reproduces the tree.
  std::string to_string() const;

  bool is_constant() const;

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const detail::ExprNode> root_;
};

}  // namespace r13
