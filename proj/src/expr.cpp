#include "indefsl/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <utility>

#include <quadmath.h>

#include "indefsl/error.hpp"

namespace indefsl {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, call, piecewise };

struct ExprNode {
  Op op = Op::constant;
  double value = 0.0;  // constant value or power exponent
  Func func = Func::exp;
  Expr lhs;
  Expr rhs;
  std::vector<Expr::Piece> pieces;

  static Expr make(ExprNode node) {
    return Expr(std::make_shared<ExprNode const>(std::move(node)));
  }
};

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 8> kFunctions{{
    {"exp", Func::exp},
    {"log", Func::log},
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"cosh", Func::cosh},
    {"sech", Func::sech},
    {"abs", Func::abs},
    {"sgn", Func::sgn},
}};

std::string_view func_name(Func f) {
  for (auto const& [name, fn] : kFunctions)
    if (fn == f) return name;
  return "?";
}

double checked(double v, char const* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

double apply(Func f, double a) {
  switch (f) {
    case Func::exp:
      return checked(std::exp(a), "exp");
    case Func::log:
      if (!(a > 0.0)) throw DomainError("log of nonpositive argument");
      return std::log(a);
    case Func::sin:
      return std::sin(a);
    case Func::cos:
      return std::cos(a);
    case Func::cosh:
      return checked(std::cosh(a), "cosh");
    case Func::sech: {
      double const e = std::exp(-std::abs(a));
      return 2.0 * e / (1.0 + e * e);
    }
    case Func::abs:
      return std::abs(a);
    case Func::sgn:
      return a < 0.0 ? -1.0 : 1.0;
  }
  return 0.0;
}

wide checked_wide(wide v, char const* what) {
  if (isinfq(v) || isnanq(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

wide apply_wide(Func f, wide a) {
  switch (f) {
    case Func::exp:
      return checked_wide(expq(a), "exp");
    case Func::log:
      if (!(a > 0)) throw DomainError("log of nonpositive argument");
      return logq(a);
    case Func::sin:
      return sinq(a);
    case Func::cos:
      return cosq(a);
    case Func::cosh:
      return checked_wide(coshq(a), "cosh");
    case Func::sech: {
      wide const e = expq(-fabsq(a));
      return 2 * e / (1 + e * e);
    }
    case Func::abs:
      return fabsq(a);
    case Func::sgn:
      return a < 0 ? -1 : 1;
  }
  return 0;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), std::abs(v));
  std::string digits(buf.data(), ptr);
  return v < 0 || std::signbit(v) ? "(-" + digits + ")" : digits;
}

std::string format_bound(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= src_.size()) fail("empty expression");
    Expr e = expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::string const& what) const { throw ParseError(what, pos_ + 1); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  bool at_digit() const {
    return pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.');
  }

  double number() {
    skip_ws();
    std::size_t const start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && src_[start] == '.')) {
      pos_ = start;
      fail("expected a number");
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;  // lone 'e' is not part of the number
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return v;
  }

  std::string_view identifier() {
    std::size_t const start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return src_.substr(start, pos_ - start);
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = Expr::add(lhs, term());
      else if (accept('-'))
        lhs = Expr::sub(lhs, term());
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = Expr::mul(lhs, factor());
      else if (accept('/'))
        lhs = Expr::div(lhs, factor());
      else
        return lhs;
    }
  }

  Expr factor() {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '-') {
      ++pos_;
      return Expr::neg(factor());
    }
    Expr b = base();
    if (accept('^')) {
      skip_ws();
      if (!at_digit()) fail("exponent must be a number");
      b = Expr::pow(b, number());
    }
    return b;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char const c = src_[pos_];
    if (at_digit()) return Expr::constant(number());
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t const start = pos_;
      std::string_view id = identifier();
      if (id == "x") return Expr::variable();
      if (id == "pw") return piecewise(start);
      for (auto const& [name, fn] : kFunctions) {
        if (id == name) {
          expect('(');
          Expr arg = expr();
          expect(')');
          return Expr::call(fn, arg);
        }
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  double bound() {
    skip_ws();
    bool negative = false;
    if (pos_ < src_.size() && src_[pos_] == '-') {
      negative = true;
      ++pos_;
      skip_ws();
    }
    if (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) {
      std::size_t const start = pos_;
      if (identifier() != "inf") {
        pos_ = start;
        fail("expected a bound");
      }
      return negative ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
    }
    double const v = number();
    return negative ? -v : v;
  }

  Expr piecewise(std::size_t start) {
    expect('{');
    std::vector<Expr::Piece> pieces;
    do {
      expect('[');
      double lo = bound();
      expect(',');
      double hi = bound();
      expect(')');
      expect(':');
      Expr body = expr();
      expect(';');
      pieces.push_back({lo, hi, body});
      skip_ws();
    } while (pos_ < src_.size() && src_[pos_] == '[');
    expect('}');
    try {
      return Expr::piecewise(std::move(pieces));
    } catch (ValidationError const& e) {
      throw ParseError(e.what(), start + 1);
    }
  }
};

}  // namespace

Expr::Expr() = default;

ExprNode const& Expr::node() const {
  static ExprNode const zero{};
  return node_ ? *node_ : zero;
}

Expr Expr::constant(double value) {
  ExprNode n;
  n.op = Op::constant;
  n.value = value;
  return ExprNode::make(std::move(n));
}

Expr Expr::variable() {
  ExprNode n;
  n.op = Op::variable;
  return ExprNode::make(std::move(n));
}

namespace {
Expr binary(Op op, Expr lhs, Expr rhs) {
  ExprNode n;
  n.op = op;
  n.lhs = std::move(lhs);
  n.rhs = std::move(rhs);
  return ExprNode::make(std::move(n));
}
}  // namespace

Expr Expr::add(Expr lhs, Expr rhs) { return binary(Op::add, std::move(lhs), std::move(rhs)); }
Expr Expr::sub(Expr lhs, Expr rhs) { return binary(Op::sub, std::move(lhs), std::move(rhs)); }
Expr Expr::mul(Expr lhs, Expr rhs) { return binary(Op::mul, std::move(lhs), std::move(rhs)); }
Expr Expr::div(Expr lhs, Expr rhs) { return binary(Op::div, std::move(lhs), std::move(rhs)); }

Expr Expr::pow(Expr base, double exponent) {
  ExprNode n;
  n.op = Op::pow;
  n.value = exponent;
  n.lhs = std::move(base);
  return ExprNode::make(std::move(n));
}

Expr Expr::neg(Expr arg) {
  ExprNode n;
  n.op = Op::neg;
  n.lhs = std::move(arg);
  return ExprNode::make(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
  ExprNode n;
  n.op = Op::call;
  n.func = f;
  n.lhs = std::move(arg);
  return ExprNode::make(std::move(n));
}

Expr Expr::piecewise(std::vector<Piece> pieces) {
  if (pieces.empty()) throw ValidationError("piecewise expression without pieces");
  for (auto const& p : pieces)
    if (!(p.lo < p.hi)) throw ValidationError("empty piecewise interval");
  std::vector<Piece> sorted = pieces;
  std::sort(sorted.begin(), sorted.end(), [](Piece const& a, Piece const& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].lo < sorted[i - 1].hi) throw ValidationError("piecewise overlap");
  ExprNode n;
  n.op = Op::piecewise;
  n.pieces = std::move(pieces);
  return ExprNode::make(std::move(n));
}

double Expr::operator()(double x) const {
  ExprNode const& n = node();
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::variable:
      return x;
    case Op::add:
      return checked(n.lhs(x) + n.rhs(x), "+");
    case Op::sub:
      return checked(n.lhs(x) - n.rhs(x), "-");
    case Op::mul:
      return checked(n.lhs(x) * n.rhs(x), "*");
    case Op::div: {
      double const num = n.lhs(x);
      double const den = n.rhs(x);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(num / den, "/");
    }
    case Op::pow: {
      double const b = n.lhs(x);
      if (b < 0.0 && n.value != std::floor(n.value))
        throw DomainError("non-integer power of a negative base");
      if (b == 0.0 && n.value < 0.0) throw DomainError("negative power of zero");
      return checked(std::pow(b, n.value), "^");
    }
    case Op::neg:
      return -n.lhs(x);
    case Op::call:
      return apply(n.func, n.lhs(x));
    case Op::piecewise:
      for (auto const& p : n.pieces)
        if (p.lo <= x && x < p.hi) return p.body(x);
      throw DomainError("x outside every piecewise interval");
  }
  return 0.0;
}

wide Expr::eval_wide(wide x) const {
  ExprNode const& n = node();
  switch (n.op) {
    case Op::constant:
      return n.value;
    case Op::variable:
      return x;
    case Op::add:
      return checked_wide(n.lhs.eval_wide(x) + n.rhs.eval_wide(x), "+");
    case Op::sub:
      return checked_wide(n.lhs.eval_wide(x) - n.rhs.eval_wide(x), "-");
    case Op::mul:
      return checked_wide(n.lhs.eval_wide(x) * n.rhs.eval_wide(x), "*");
    case Op::div: {
      wide const num = n.lhs.eval_wide(x);
      wide const den = n.rhs.eval_wide(x);
      if (den == 0) throw DomainError("division by zero");
      return checked_wide(num / den, "/");
    }
    case Op::pow: {
      wide const b = n.lhs.eval_wide(x);
      if (b < 0 && n.value != std::floor(n.value)) throw DomainError("non-integer power of a negative base");
      if (b == 0 && n.value < 0.0) throw DomainError("negative power of zero");
      // integer exponents by repeated squaring keep negative bases exact
      if (n.value == std::floor(n.value) && std::abs(n.value) <= 64) {
        auto k = static_cast<long>(std::abs(n.value));
        wide acc = 1, base = b;
        for (; k > 0; k >>= 1, base *= base)
          if (k & 1) acc *= base;
        return checked_wide(n.value < 0 ? 1 / acc : acc, "^");
      }
      return checked_wide(powq(b, n.value), "^");
    }
    case Op::neg:
      return -n.lhs.eval_wide(x);
    case Op::call:
      return apply_wide(n.func, n.lhs.eval_wide(x));
    case Op::piecewise: {
      double const xd = static_cast<double>(x);
      for (auto const& p : n.pieces)
        if (p.lo <= xd && xd < p.hi) return p.body.eval_wide(x);
      throw DomainError("x outside every piecewise interval");
    }
  }
  return 0;
}

std::string Expr::to_string() const {
  ExprNode const& n = node();
  auto wrap = [](std::string s) { return "(" + s + ")"; };
  switch (n.op) {
    case Op::constant:
      return format_number(n.value);
    case Op::variable:
      return "x";
    case Op::add:
      return wrap(n.lhs.to_string() + "+" + n.rhs.to_string());
    case Op::sub:
      return wrap(n.lhs.to_string() + "-" + n.rhs.to_string());
    case Op::mul:
      return wrap(n.lhs.to_string() + "*" + n.rhs.to_string());
    case Op::div:
      return wrap(n.lhs.to_string() + "/" + n.rhs.to_string());
    case Op::pow:
      // grammar exponents are unsigned numbers
      if (n.value < 0.0)
        return wrap("1/" + wrap(n.lhs.to_string()) + "^" + format_bound(-n.value));
      return wrap(n.lhs.to_string() + "^" + format_bound(n.value));
    case Op::neg:
      return wrap("-" + n.lhs.to_string());
    case Op::call:
      return std::string(func_name(n.func)) + "(" + n.lhs.to_string() + ")";
    case Op::piecewise: {
      std::string s = "pw{";
      for (auto const& p : n.pieces)
        s += "[" + format_bound(p.lo) + "," + format_bound(p.hi) + "):" + p.body.to_string() + ";";
      return s + "}";
    }
  }
  return {};
}

bool Expr::pieces_cover(double lo, double hi) const {
  ExprNode const& n = node();
  switch (n.op) {
    case Op::constant:
    case Op::variable:
      return true;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      return n.lhs.pieces_cover(lo, hi) && n.rhs.pieces_cover(lo, hi);
    case Op::pow:
    case Op::neg:
    case Op::call:
      return n.lhs.pieces_cover(lo, hi);
    case Op::piecewise: {
      std::vector<Piece> sorted = n.pieces;
      std::sort(sorted.begin(), sorted.end(), [](Piece const& a, Piece const& b) { return a.lo < b.lo; });
      double reach = lo;
      for (auto const& p : sorted) {
        if (p.hi <= reach) continue;
        if (p.lo > reach) return false;
        reach = p.hi;
        if (!p.body.pieces_cover(std::max(lo, p.lo), std::min(hi, p.hi))) return false;
        if (reach >= hi) break;
      }
      // an infinite upper endpoint is open, so reaching it is enough
      return reach >= hi;
    }
  }
  return false;
}

bool Expr::is_constant() const {
  ExprNode const& n = node();
  switch (n.op) {
    case Op::constant:
      return true;
    case Op::variable:
      return false;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      return n.lhs.is_constant() && n.rhs.is_constant();
    case Op::pow:
    case Op::neg:
    case Op::call:
      return n.lhs.is_constant();
    case Op::piecewise:
      return false;
  }
  return false;
}

Expr parse_expression(std::string_view src) { return Parser(src).parse(); }

}  // namespace indefsl
