#pragma once
//
// Scalar expressions over chart coordinates x1..xn: parsing, printing,
// evaluation and exact symbolic differentiation.
//
// Grammar accepted by parse():
//
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := base ("^" integer)? ;
//   base   := number | "pi" | ident | "(" expr ")" | func "(" expr ")" | "-" base ;
//   func   := "sin" | "cos" | "exp" | "sqrt" | "log" ;
//   ident  := "x" digit+ ;
//
// Trees are immutable and share subtrees, so copies are cheap and concurrent
// read-only use is safe. The smart constructors fold constants and drop
// neutral elements; no other simplification is attempted.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "ckforms/error.hpp"

namespace ckforms {

/// Shortest text that reads back to the same double (17 significant digits).
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Expression {
 public:
  enum class Kind { Constant, Pi, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt, Log };

  Expression() : Expression(make(Kind::Constant, 0.0, 0, nullptr, nullptr)) {}
  explicit Expression(double v) : Expression(make(Kind::Constant, v, 0, nullptr, nullptr)) {}

  static Expression constant(double v) { return Expression(make(Kind::Constant, v, 0, nullptr, nullptr)); }
  static Expression pi() { return Expression(make(Kind::Pi, std::numbers::pi, 0, nullptr, nullptr)); }
  /// Coordinate x_i, 1-based as in the text grammar.
  static Expression variable(int i) {
    if (i < 1) throw DimensionError("variable index must be >= 1, got " + std::to_string(i));
    return Expression(make(Kind::Variable, 0.0, i, nullptr, nullptr));
  }

  Kind kind() const noexcept { return node_->kind; }
  /// Literal value for Constant/Pi nodes.
  double value() const noexcept { return node_->value; }
  /// Variable index (1-based) or integer exponent of a Pow node.
  int index() const noexcept { return node_->aux; }
  Expression lhs() const { return Expression(node_->lhs); }
  Expression rhs() const { return Expression(node_->rhs); }

  bool is_constant() const noexcept { return kind() == Kind::Constant || kind() == Kind::Pi; }
  bool is_zero() const noexcept { return kind() == Kind::Constant && value() == 0.0; }
  bool is_one() const noexcept { return kind() == Kind::Constant && value() == 1.0; }

  friend Expression operator+(const Expression& a, const Expression& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() && b.is_constant()) return fold(a.value() + b.value(), Kind::Add, a, b);
    return binary(Kind::Add, a, b);
  }
  friend Expression operator-(const Expression& a, const Expression& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    if (a.is_constant() && b.is_constant()) return fold(a.value() - b.value(), Kind::Sub, a, b);
    return binary(Kind::Sub, a, b);
  }
  friend Expression operator*(const Expression& a, const Expression& b) {
    if (a.is_zero() || b.is_zero()) return constant(0.0);
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (a.is_constant() && b.is_constant()) return fold(a.value() * b.value(), Kind::Mul, a, b);
    return binary(Kind::Mul, a, b);
  }
  friend Expression operator/(const Expression& a, const Expression& b) {
    if (b.is_one()) return a;
    if (a.is_zero() && !b.is_zero()) return constant(0.0);
    if (a.is_constant() && b.is_constant() && b.value() != 0.0)
      return fold(a.value() / b.value(), Kind::Div, a, b);
    return binary(Kind::Div, a, b);
  }
  friend Expression operator-(const Expression& a) {
    if (a.kind() == Kind::Constant) return constant(-a.value());
    if (a.kind() == Kind::Neg) return a.lhs();
    return Expression(make(Kind::Neg, 0.0, 0, a.node_, nullptr));
  }
  Expression& operator+=(const Expression& o) { return *this = *this + o; }
  Expression& operator-=(const Expression& o) { return *this = *this - o; }
  Expression& operator*=(const Expression& o) { return *this = *this * o; }

  friend Expression pow(const Expression& base, int exponent) {
    if (exponent < 0) return constant(1.0) / pow(base, -exponent);
    if (exponent == 0) return constant(1.0);
    if (exponent == 1) return base;
    if (base.is_constant()) {
      const double v = std::pow(base.value(), exponent);
      if (std::isfinite(v)) return constant(v);
    }
    return Expression(make(Kind::Pow, 0.0, exponent, base.node_, nullptr));
  }
  friend Expression sin(const Expression& a) { return unary(Kind::Sin, a); }
  friend Expression cos(const Expression& a) { return unary(Kind::Cos, a); }
  friend Expression exp(const Expression& a) { return unary(Kind::Exp, a); }
  friend Expression sqrt(const Expression& a) { return unary(Kind::Sqrt, a); }
  friend Expression log(const Expression& a) { return unary(Kind::Log, a); }

  /// Structural identity of the two trees (literal values compared bitwise).
  friend bool structurally_equal(const Expression& a, const Expression& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.index() != b.index()) return false;
    if (a.kind() == Kind::Constant && std::memcmp(&a.node_->value, &b.node_->value, sizeof(double)) != 0)
      return false;
    if (static_cast<bool>(a.node_->lhs) != static_cast<bool>(b.node_->lhs)) return false;
    if (static_cast<bool>(a.node_->rhs) != static_cast<bool>(b.node_->rhs)) return false;
    if (a.node_->lhs && !structurally_equal(a.lhs(), b.lhs())) return false;
    if (a.node_->rhs && !structurally_equal(a.rhs(), b.rhs())) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    double value;
    int aux;
    std::shared_ptr<const Node> lhs, rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Expression(NodePtr n) : node_(std::move(n)) {}

  static NodePtr make(Kind k, double v, int aux, NodePtr l, NodePtr r) {
    return std::make_shared<const Node>(Node{k, v, aux, std::move(l), std::move(r)});
  }
  static Expression binary(Kind k, const Expression& a, const Expression& b) {
    return Expression(make(k, 0.0, 0, a.node_, b.node_));
  }
  static Expression fold(double v, Kind k, const Expression& a, const Expression& b) {
    if (std::isfinite(v)) return constant(v);
    return binary(k, a, b);
  }
  static Expression unary(Kind k, const Expression& a) {
    if (a.is_constant()) {
      double v = NAN;
      switch (k) {
        case Kind::Sin: v = std::sin(a.value()); break;
        case Kind::Cos: v = std::cos(a.value()); break;
        case Kind::Exp: v = std::exp(a.value()); break;
        case Kind::Sqrt: v = a.value() >= 0 ? std::sqrt(a.value()) : NAN; break;
        case Kind::Log: v = a.value() > 0 ? std::log(a.value()) : NAN; break;
        default: break;
      }
      if (std::isfinite(v)) return constant(v);
    }
    return Expression(make(k, 0.0, 0, a.node_, nullptr));
  }

  NodePtr node_;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

// Binding strength used to decide where parentheses are needed.
inline int precedence(const Expression& e) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Pow: return 3;
    case K::Constant: return e.value() < 0 || std::signbit(e.value()) ? 4 : 5;
    case K::Neg: return 4;
    default: return 5;
  }
}

inline void print(const Expression& e, std::string& out);

inline void print_wrapped(const Expression& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

inline void print(const Expression& e, std::string& out) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Constant: out += format_double(e.value()); return;
    case K::Pi: out += "pi"; return;
    case K::Variable: out += 'x' + std::to_string(e.index()); return;
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div: {
      const int p = precedence(e);
      // Left-associative parser: the right operand must bind strictly tighter.
      print_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
      out += e.kind() == K::Add ? '+' : e.kind() == K::Sub ? '-' : e.kind() == K::Mul ? '*' : '/';
      print_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
      return;
    }
    case K::Pow:
      print_wrapped(e.lhs(), precedence(e.lhs()) < 4, out);
      out += '^' + std::to_string(e.index());
      return;
    case K::Neg:
      out += '-';
      print_wrapped(e.lhs(), precedence(e.lhs()) < 4, out);
      return;
    case K::Sin: out += "sin("; break;
    case K::Cos: out += "cos("; break;
    case K::Exp: out += "exp("; break;
    case K::Sqrt: out += "sqrt("; break;
    case K::Log: out += "log("; break;
  }
  print(e.lhs(), out);
  out += ')';
}

}  // namespace detail

inline std::string to_string(const Expression& e) {
  std::string out;
  detail::print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  Expression run() {
    Expression e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expression expr() {
    Expression e = term();
    for (;;) {
      if (accept('+')) e = e + term();
      else if (accept('-')) e = e - term();
      else return e;
    }
  }
  Expression term() {
    Expression e = factor();
    for (;;) {
      if (accept('*')) e = e * factor();
      else if (accept('/')) e = e / factor();
      else return e;
    }
  }
  Expression factor() {
    Expression b = base();
    if (accept('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      const long k = std::strtol(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
      if (k > 1000) fail("exponent too large");
      return pow(b, static_cast<int>(k));
    }
    return b;
  }
  Expression base() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return -base();
    }
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }
  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) fail("malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    return Expression::constant(std::strtod(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr));
  }
  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view word = text_.substr(start, pos_ - start);
    if (word == "x") {
      const std::size_t dstart = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (dstart == pos_) {
        pos_ = start;
        fail("unknown identifier 'x'");
      }
      const long i = std::strtol(std::string(text_.substr(dstart, pos_ - dstart)).c_str(), nullptr, 10);
      if (i < 1 || i > n_) {
        pos_ = start;
        fail("variable index out of range: x" + std::to_string(i) + " with n=" + std::to_string(n_));
      }
      return Expression::variable(static_cast<int>(i));
    }
    if (word == "pi") return Expression::pi();
    Expression (*fn)(const Expression&) = nullptr;
    if (word == "sin") fn = [](const Expression& a) { return sin(a); };
    else if (word == "cos") fn = [](const Expression& a) { return cos(a); };
    else if (word == "exp") fn = [](const Expression& a) { return exp(a); };
    else if (word == "sqrt") fn = [](const Expression& a) { return sqrt(a); };
    else if (word == "log") fn = [](const Expression& a) { return log(a); };
    if (fn == nullptr) {
      pos_ = start;
      fail("unknown identifier '" + std::string(word) + "'");
    }
    expect('(');
    Expression arg = expr();
    expect(')');
    return fn(arg);
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parse `text` as an expression in the coordinates x1..xn.
inline Expression parse(std::string_view text, int n) { return detail::Parser(text, n).run(); }

// ---------------------------------------------------------------------------
// Differentiation and evaluation

/// Exact partial derivative with respect to x_i (1-based).
inline Expression differentiate(const Expression& e, int i) {
  using K = Expression::Kind;
  if (i < 1) throw DimensionError("coordinate index must be >= 1");
  switch (e.kind()) {
    case K::Constant:
    case K::Pi: return Expression::constant(0.0);
    case K::Variable: return Expression::constant(e.index() == i ? 1.0 : 0.0);
    case K::Add: return differentiate(e.lhs(), i) + differentiate(e.rhs(), i);
    case K::Sub: return differentiate(e.lhs(), i) - differentiate(e.rhs(), i);
    case K::Mul: {
      const Expression u = e.lhs(), v = e.rhs();
      return differentiate(u, i) * v + u * differentiate(v, i);
    }
    case K::Div: {
      const Expression u = e.lhs(), v = e.rhs();
      const Expression du = differentiate(u, i), dv = differentiate(v, i);
      if (dv.is_zero()) return du / v;
      return (du * v - u * dv) / pow(v, 2);
    }
    case K::Pow: {
      const Expression u = e.lhs();
      const int k = e.index();
      return Expression::constant(k) * pow(u, k - 1) * differentiate(u, i);
    }
    case K::Neg: return -differentiate(e.lhs(), i);
    case K::Sin: return cos(e.lhs()) * differentiate(e.lhs(), i);
    case K::Cos: return -(sin(e.lhs()) * differentiate(e.lhs(), i));
    case K::Exp: return e * differentiate(e.lhs(), i);
    case K::Sqrt: return differentiate(e.lhs(), i) / (Expression::constant(2.0) * e);
    case K::Log: return differentiate(e.lhs(), i) / e.lhs();
  }
  return Expression::constant(0.0);
}

namespace detail {

[[noreturn]] inline void domain_violation(const std::string& what, const Expression& e) {
  throw DomainError(what + " in subterm '" + to_string(e) + "'");
}

inline double checked(double v, const Expression& e) {
  if (!std::isfinite(v)) domain_violation("non-finite value", e);
  return v;
}

}  // namespace detail

/// Evaluate at coordinates `p` (p[0] is x1). Deterministic; throws
/// DomainError naming the offending subterm.
inline double evaluate(const Expression& e, std::span<const double> p) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Constant:
    case K::Pi: return e.value();
    case K::Variable:
      if (static_cast<std::size_t>(e.index()) > p.size())
        throw DimensionError("point has " + std::to_string(p.size()) + " coordinates, expression uses x" +
                             std::to_string(e.index()));
      return p[e.index() - 1];
    case K::Add: return detail::checked(evaluate(e.lhs(), p) + evaluate(e.rhs(), p), e);
    case K::Sub: return detail::checked(evaluate(e.lhs(), p) - evaluate(e.rhs(), p), e);
    case K::Mul: return detail::checked(evaluate(e.lhs(), p) * evaluate(e.rhs(), p), e);
    case K::Div: {
      const double den = evaluate(e.rhs(), p);
      if (den == 0.0) detail::domain_violation("division by zero", e);
      return detail::checked(evaluate(e.lhs(), p) / den, e);
    }
    case K::Pow: return detail::checked(std::pow(evaluate(e.lhs(), p), e.index()), e);
    case K::Neg: return -evaluate(e.lhs(), p);
    case K::Sin: return detail::checked(std::sin(evaluate(e.lhs(), p)), e);
    case K::Cos: return detail::checked(std::cos(evaluate(e.lhs(), p)), e);
    case K::Exp: return detail::checked(std::exp(evaluate(e.lhs(), p)), e);
    case K::Sqrt: {
      const double a = evaluate(e.lhs(), p);
      if (a < 0) detail::domain_violation("sqrt of negative value", e);
      return std::sqrt(a);
    }
    case K::Log: {
      const double a = evaluate(e.lhs(), p);
      if (a <= 0) detail::domain_violation("log of non-positive value", e);
      return std::log(a);
    }
  }
  return 0.0;
}

/// Largest variable index used (0 for constant expressions).
inline int max_variable(const Expression& e) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Constant:
    case K::Pi: return 0;
    case K::Variable: return e.index();
    case K::Add:
    case K::Sub:
    case K::Mul:
    case K::Div: return std::max(max_variable(e.lhs()), max_variable(e.rhs()));
    default: return max_variable(e.lhs());
  }
}

}  // namespace ckforms
