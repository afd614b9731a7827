#pragma once

// Coefficient expressions in one real variable x.
//
// Grammar:
//   expr      := term (("+"|"-") term)*
//   term      := factor (("*"|"/") factor)*
//   factor    := "-" factor | base ("^" number)?
//   base      := number | "x" | fn "(" expr ")" | "(" expr ")" | piecewise
//   fn        := "exp"|"log"|"sin"|"cos"|"cosh"|"sech"|"abs"|"sgn"
//   piecewise := "pw" "{" (interval ":" expr ";")+ "}"
//   interval  := "[" bound "," bound ")"
//   bound     := number | "-inf" | "inf"
//
// Numbers are decimal with optional exponent; a bound may carry a leading
// minus sign. Whitespace is insignificant. sgn(0) = +1.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace indefsl {

// Quad precision (GCC libquadmath). Used where a coefficient has to be
// compared against its own limit far out in the tail.
using wide = __float128;

enum class Func { exp, log, sin, cos, cosh, sech, abs, sgn };

struct ExprNode;

/// Immutable expression tree. Copies share structure; evaluation is pure and
/// safe to call from several threads at once.
class Expr {
 public:
  struct Piece;

  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr variable();
  static Expr add(Expr lhs, Expr rhs);
  static Expr sub(Expr lhs, Expr rhs);
  static Expr mul(Expr lhs, Expr rhs);
  static Expr div(Expr lhs, Expr rhs);
  static Expr pow(Expr base, double exponent);
  static Expr neg(Expr arg);
  static Expr call(Func f, Expr arg);
  /// Throws ValidationError if two pieces overlap or a piece is empty.
  static Expr piecewise(std::vector<Piece> pieces);

  /// Throws DomainError instead of ever returning NaN or infinity.
  double operator()(double x) const;

  /// Same tree evaluated in quad precision, with the same domain checks.
  wide eval_wide(wide x) const;

  /// Re-parseable text; parse(to_string()) evaluates identically.
  std::string to_string() const;

  /// True if every piecewise node covers [lo, hi) without holes.
  bool pieces_cover(double lo, double hi) const;

  bool is_constant() const;

 private:
  explicit Expr(std::shared_ptr<ExprNode const> node) : node_(std::move(node)) {}
  ExprNode const& node() const;  // the shared zero node when empty
  std::shared_ptr<ExprNode const> node_;
  friend struct ExprNode;
};

struct Expr::Piece {
  double lo;  // inclusive
  double hi;  // exclusive
  Expr body;
};

/// Parses `src` according to the grammar above. Throws ParseError (with the
/// 1-based position of the offending character) on syntax errors and unknown
/// identifiers, and ValidationError on overlapping piecewise intervals.
Expr parse_expression(std::string_view src);

}  // namespace indefsl
