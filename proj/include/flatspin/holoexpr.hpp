#pragma once

// Expressions for seed data.
//
// Grammar (ASCII, whitespace ignored between tokens):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary { "^" ["-"] integer } ;
//   primary = number ["i"] | "i" | "pi" | variable
//           | function "(" expr ")" | "(" expr ")" ;
//   number  = digits ["." digits] [("e" | "E") ["+" | "-"] digits] ;
//   function = "exp" | "sin" | "cos" | "sinh" | "cosh" ;
//
// Analytic expressions use the single variable z; real expressions use x and y
// and may not contain imaginary literals. Exponents are integers so every
// expression is single valued.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flatspin/cquat.hpp"
#include "flatspin/error.hpp"

namespace flatspin::expr {

enum class Mode { analytic, real_smooth };

enum class NodeKind { constant, var_z, var_x, var_y, neg, add, sub, mul, div, pow, call };

enum class Func { exp, sin, cos, sinh, cosh };

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::constant;
  Complex value{};  // constant
  int exponent = 0;  // pow
  Func func = Func::exp;  // call
  Ast lhs;  // unary operand, left operand, base or call argument
  Ast rhs;
};

inline const char* func_name(Func f) {
  switch (f) {
    case Func::exp: return "exp";
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::sinh: return "sinh";
    case Func::cosh: return "cosh";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Construction helpers. The make_* variants fold constants and drop neutral
// elements; differentiate() relies on them to keep its output small.

namespace detail {

inline Ast node(NodeKind k, Ast a = nullptr, Ast b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

inline bool is_const(const Ast& a) { return a->kind == NodeKind::constant; }
inline bool is_const(const Ast& a, Complex v) { return is_const(a) && a->value == v; }

}  // namespace detail

inline Ast constant(Complex v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::constant;
  n->value = v;
  return n;
}

inline Ast variable(NodeKind k) { return detail::node(k); }

inline Ast call(Func f, Ast arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::call;
  n->func = f;
  n->lhs = std::move(arg);
  return n;
}

inline Ast power(Ast base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::pow;
  n->exponent = exponent;
  n->lhs = std::move(base);
  return n;
}

inline Ast make_neg(Ast a) {
  using detail::is_const;
  if (is_const(a)) return constant(-a->value);
  if (a->kind == NodeKind::neg) return a->lhs;
  return detail::node(NodeKind::neg, std::move(a));
}

inline Ast make_add(Ast a, Ast b) {
  using detail::is_const;
  if (is_const(a) && is_const(b)) return constant(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return detail::node(NodeKind::add, std::move(a), std::move(b));
}

inline Ast make_sub(Ast a, Ast b) {
  using detail::is_const;
  if (is_const(a) && is_const(b)) return constant(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return make_neg(std::move(b));
  return detail::node(NodeKind::sub, std::move(a), std::move(b));
}

/// Constant factors are moved to the left.
inline Ast make_mul(Ast a, Ast b) {
  using detail::is_const;
  if (is_const(a) && is_const(b)) return constant(a->value * b->value);
  if (is_const(b)) std::swap(a, b);
  if (is_const(a, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(a, -1.0)) return make_neg(std::move(b));
  if (is_const(a) && b->kind == NodeKind::mul && is_const(b->lhs)) {
    return make_mul(constant(a->value * b->lhs->value), b->rhs);
  }
  return detail::node(NodeKind::mul, std::move(a), std::move(b));
}

inline Ast make_div(Ast a, Ast b) {
  using detail::is_const;
  if (is_const(a) && is_const(b) && b->value != 0.0) return constant(a->value / b->value);
  if (is_const(a, 0.0)) return constant(0.0);
  if (is_const(b, 1.0)) return a;
  return detail::node(NodeKind::div, std::move(a), std::move(b));
}

inline Ast make_pow(Ast base, int exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (detail::is_const(base) && exponent > 0) return constant(std::pow(base->value, exponent));
  return power(std::move(base), exponent);
}

// ---------------------------------------------------------------------------

/// Structural equality: same node kinds, operators, constants and exponents.
inline bool structurally_equal(const Ast& a, const Ast& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::constant: return a->value == b->value;
    case NodeKind::var_z:
    case NodeKind::var_x:
    case NodeKind::var_y: return true;
    case NodeKind::pow: return a->exponent == b->exponent && structurally_equal(a->lhs, b->lhs);
    case NodeKind::call: return a->func == b->func && structurally_equal(a->lhs, b->lhs);
    case NodeKind::neg: return structurally_equal(a->lhs, b->lhs);
    default: return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
  }
}

namespace detail {

inline std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline std::string render_constant(Complex v) {
  const double re = v.real();
  const double im = v.imag();
  if (im == 0.0) {
    return re < 0 || std::signbit(re) ? "(-" + format_real(-re) + ")" : format_real(re);
  }
  if (re == 0.0) {
    return im < 0 ? "(-" + format_real(-im) + "i)" : format_real(im) + "i";
  }
  std::string s = "(" + (re < 0 ? "-" + format_real(-re) : format_real(re));
  s += im < 0 ? "-" + format_real(-im) + "i)" : "+" + format_real(im) + "i)";
  return s;
}

}  // namespace detail

/// Canonical text form. Parsed trees render to text that parses back to a
/// structurally equal tree.
inline std::string render(const Ast& e) {
  switch (e->kind) {
    case NodeKind::constant: return detail::render_constant(e->value);
    case NodeKind::var_z: return "z";
    case NodeKind::var_x: return "x";
    case NodeKind::var_y: return "y";
    case NodeKind::neg: return "(-" + render(e->lhs) + ")";
    case NodeKind::add: return "(" + render(e->lhs) + "+" + render(e->rhs) + ")";
    case NodeKind::sub: return "(" + render(e->lhs) + "-" + render(e->rhs) + ")";
    case NodeKind::mul: return "(" + render(e->lhs) + "*" + render(e->rhs) + ")";
    case NodeKind::div: return "(" + render(e->lhs) + "/" + render(e->rhs) + ")";
    case NodeKind::pow: return "(" + render(e->lhs) + "^" + std::to_string(e->exponent) + ")";
    case NodeKind::call: return std::string(func_name(e->func)) + "(" + render(e->lhs) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

inline constexpr int kMaxDepth = 200;

class Parser {
 public:
  Parser(std::string_view src, Mode mode) : src_(src), mode_(mode) {}

  Ast run() {
    for (std::size_t k = 0; k < src_.size(); ++k) {
      const auto c = static_cast<unsigned char>(src_[k]);
      if (c >= 0x80 || (c < 0x20 && !std::isspace(c)) || c == 0x7f) {
        throw SyntaxError(k, "non-printable or non-ASCII byte");
      }
    }
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "empty expression");
    Ast e = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) {
      if (src_[pos_] == ')') throw SyntaxError(pos_, "unbalanced ')'");
      throw SyntaxError(pos_, "unexpected character '" + std::string(1, src_[pos_]) + "'");
    }
    return e;
  }

 private:
  std::string_view src_;
  Mode mode_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) throw SyntaxError(p.pos_, "expression nested too deeply");
    }
    ~DepthGuard() { --p.depth_; }
  };

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

  [[noreturn]] void fail_here(const std::string& what) {
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "unexpected end of input, " + what);
    throw SyntaxError(pos_, what);
  }

  Ast parse_expr() {
    DepthGuard guard(*this);
    Ast lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = node(NodeKind::add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = node(NodeKind::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Ast parse_term() {
    Ast lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = node(NodeKind::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = node(NodeKind::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Ast parse_unary() {
    DepthGuard guard(*this);
    if (accept('-')) return node(NodeKind::neg, parse_unary());
    return parse_power();
  }

  Ast parse_power() {
    Ast base = parse_primary();
    while (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      bool negative = false;
      if (pos_ < src_.size() && src_[pos_] == '-') {
        negative = true;
        ++pos_;
      }
      const std::size_t digits = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (pos_ == digits) {
        pos_ = start;
        fail_here("expected an integer exponent");
      }
      if (pos_ < src_.size() && (src_[pos_] == '.' || std::isalpha(static_cast<unsigned char>(src_[pos_])))) {
        throw SyntaxError(start, "exponent must be an integer");
      }
      const std::string text(src_.substr(digits, pos_ - digits));
      if (text.size() > 6) throw SyntaxError(start, "exponent out of range");
      const int n = std::stoi(text);
      auto p = std::make_shared<Node>();
      p->kind = NodeKind::pow;
      p->exponent = negative ? -n : n;
      p->lhs = base;
      base = p;
    }
    return base;
  }

  Ast parse_number() {
    const std::size_t start = pos_;
    auto digit = [&] { return pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])); };
    while (digit()) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      if (!digit()) throw SyntaxError(pos_, "expected digits after '.'");
      while (digit()) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (digit()) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) throw SyntaxError(start, "number out of range");
    if (pos_ < src_.size() && src_[pos_] == 'i' &&
        !(pos_ + 1 < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])))) {
      if (mode_ == Mode::real_smooth) throw ModeError("imaginary literal in a real expression");
      ++pos_;
      return constant(Complex{0.0, v});
    }
    return constant(v);
  }

  Ast parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail_here("expected an operand");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      if (c == '.') fail_here("expected digits before '.'");
      return parse_number();
    }
    if (c == '(') {
      ++pos_;
      Ast inner = parse_expr();
      if (!accept(')')) fail_here("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = src_.substr(start, pos_ - start);
      return identifier(name, start);
    }
    if (c == ')') fail_here("unbalanced ')'");
    fail_here("unexpected character '" + std::string(1, c) + "'");
  }

  Ast identifier(std::string_view name, std::size_t start) {
    static constexpr std::pair<std::string_view, Func> kFuncs[] = {
        {"exp", Func::exp}, {"sin", Func::sin}, {"cos", Func::cos}, {"sinh", Func::sinh}, {"cosh", Func::cosh}};
    for (const auto& [fname, f] : kFuncs) {
      if (name == fname) {
        if (!accept('(')) fail_here("expected '(' after function name");
        Ast arg = parse_expr();
        if (!accept(')')) fail_here("expected ')'");
        return call(f, arg);
      }
    }
    if (name == "z" || name == "x" || name == "y") {
      const bool analytic_var = name == "z";
      if (analytic_var != (mode_ == Mode::analytic)) {
        throw ModeError("variable '" + std::string(name) + "' is not allowed in " +
                        (mode_ == Mode::analytic ? "an analytic" : "a real") + " expression");
      }
      if (name == "z") return variable(NodeKind::var_z);
      return variable(name == "x" ? NodeKind::var_x : NodeKind::var_y);
    }
    if (name == "i") {
      if (mode_ == Mode::real_smooth) throw ModeError("imaginary unit in a real expression");
      return constant(kI);
    }
    if (name == "pi") return constant(std::numbers::pi);
    throw SyntaxError(start, "unknown identifier '" + std::string(name) + "'");
  }
};

}  // namespace detail

/// Parsed expression with its mode.
struct Expression {
  Ast ast;
  Mode mode = Mode::analytic;
  std::string source;
};

inline Ast parse_ast(std::string_view src, Mode mode) { return detail::Parser(src, mode).run(); }

inline Expression parse(std::string_view src, Mode mode) {
  return {parse_ast(src, mode), mode, std::string(src)};
}

/// True if the tree mentions no variable other than those allowed in `mode`.
inline bool conforms(const Ast& e, Mode mode) {
  switch (e->kind) {
    case NodeKind::constant: return mode == Mode::analytic || e->value.imag() == 0.0;
    case NodeKind::var_z: return mode == Mode::analytic;
    case NodeKind::var_x:
    case NodeKind::var_y: return mode == Mode::real_smooth;
    default: return conforms(e->lhs, mode) && (!e->rhs || conforms(e->rhs, mode));
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

struct Point {
  Complex z;
  double x, y;
};

inline Complex eval_node(const Node& e, const Point& p) {
  switch (e.kind) {
    case NodeKind::constant: return e.value;
    case NodeKind::var_z: return p.z;
    case NodeKind::var_x: return p.x;
    case NodeKind::var_y: return p.y;
    case NodeKind::neg: return -eval_node(*e.lhs, p);
    case NodeKind::add: return eval_node(*e.lhs, p) + eval_node(*e.rhs, p);
    case NodeKind::sub: return eval_node(*e.lhs, p) - eval_node(*e.rhs, p);
    case NodeKind::mul: return eval_node(*e.lhs, p) * eval_node(*e.rhs, p);
    case NodeKind::div: {
      const Complex den = eval_node(*e.rhs, p);
      if (den == 0.0) throw EvalError("division by zero");
      return eval_node(*e.lhs, p) / den;
    }
    case NodeKind::pow: {
      const Complex b = eval_node(*e.lhs, p);
      int n = e.exponent;
      if (n < 0 && b == 0.0) throw EvalError("negative power of zero");
      Complex base = n < 0 ? 1.0 / b : b;
      unsigned m = static_cast<unsigned>(n < 0 ? -n : n);
      Complex r = 1.0;
      while (m) {
        if (m & 1U) r *= base;
        base *= base;
        m >>= 1U;
      }
      return r;
    }
    case NodeKind::call: {
      const Complex a = eval_node(*e.lhs, p);
      switch (e.func) {
        case Func::exp: return std::exp(a);
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::sinh: return std::sinh(a);
        case Func::cosh: return std::cosh(a);
      }
    }
  }
  return {};
}

inline Complex checked(Complex v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw EvalError("non-finite value");
  return v;
}

}  // namespace detail

/// Evaluates an analytic expression at z.
inline Complex eval(const Ast& e, Complex z) {
  return detail::checked(detail::eval_node(*e, {z, z.real(), z.imag()}));
}

/// Evaluates a real expression at (x, y); the imaginary part is exactly zero.
inline double eval(const Ast& e, double x, double y) {
  return detail::checked(detail::eval_node(*e, {Complex{x, y}, x, y})).real();
}

inline Complex eval(const Expression& e, Complex z) {
  if (e.mode != Mode::analytic) throw ModeError("real expression evaluated at a complex point");
  return eval(e.ast, z);
}

inline double eval(const Expression& e, double x, double y) {
  if (e.mode != Mode::real_smooth) throw ModeError("analytic expression evaluated at a real point");
  return eval(e.ast, x, y);
}

// ---------------------------------------------------------------------------
// Symbolic derivative d/dz

namespace detail {

inline Ast derive(const Ast& e) {
  switch (e->kind) {
    case NodeKind::constant: return constant(0.0);
    case NodeKind::var_z: return constant(1.0);
    case NodeKind::var_x:
    case NodeKind::var_y: throw ModeError("d/dz of a real variable");
    case NodeKind::neg: return make_neg(derive(e->lhs));
    case NodeKind::add: return make_add(derive(e->lhs), derive(e->rhs));
    case NodeKind::sub: return make_sub(derive(e->lhs), derive(e->rhs));
    case NodeKind::mul:
      return make_add(make_mul(derive(e->lhs), e->rhs), make_mul(e->lhs, derive(e->rhs)));
    case NodeKind::div:
      return make_div(make_sub(make_mul(derive(e->lhs), e->rhs), make_mul(e->lhs, derive(e->rhs))),
                      make_pow(e->rhs, 2));
    case NodeKind::pow:
      return make_mul(make_mul(constant(static_cast<double>(e->exponent)), make_pow(e->lhs, e->exponent - 1)),
                      derive(e->lhs));
    case NodeKind::call: {
      const Ast inner = derive(e->lhs);
      Ast outer;
      switch (e->func) {
        case Func::exp: outer = e; break;
        case Func::sin: outer = call(Func::cos, e->lhs); break;
        case Func::cos: outer = make_neg(call(Func::sin, e->lhs)); break;
        case Func::sinh: outer = call(Func::cosh, e->lhs); break;
        case Func::cosh: outer = call(Func::sinh, e->lhs); break;
      }
      return make_mul(inner, outer);
    }
  }
  return constant(0.0);
}

}  // namespace detail

inline Ast differentiate(const Ast& e) {
  if (!conforms(e, Mode::analytic)) throw ModeError("differentiate needs an analytic expression");
  return detail::derive(e);
}

inline Expression differentiate(const Expression& e) {
  if (e.mode != Mode::analytic) throw ModeError("differentiate needs an analytic expression");
  Ast d = detail::derive(e.ast);
  return {d, Mode::analytic, render(d)};
}

}  // namespace flatspin::expr
