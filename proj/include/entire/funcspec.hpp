#pragma once

// Entire functions of one complex variable: a small expression language with
// parsing, a canonical printer, compiled evaluation and symbolic derivatives.
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number ['i'] | 'i' | 'z' | name '(' expr ')' | '(' expr ')'
//
// Quotients must have a constant non-zero denominator and powers a constant
// non-negative integer exponent, so every accepted expression is entire.

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entire/errors.hpp"

namespace entire {

using cplx = std::complex<double>;

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// A unary entire primitive together with the rule producing its derivative
// (as an expression in the primitive's argument).
struct Primitive {
  std::string_view name;
  cplx (*eval)(cplx);
  NodePtr (*derivative)(const NodePtr& argument);
};

enum class NodeKind { Constant, Variable, Negate, Add, Subtract, Multiply, Divide, Power, Apply };

struct Node {
  NodeKind kind = NodeKind::Constant;
  cplx value{};                         // Constant
  unsigned exponent = 0;                // Power
  const Primitive* primitive = nullptr; // Apply
  NodePtr lhs;                          // operand / left operand
  NodePtr rhs;                          // right operand (Divide: constant denominator)
};

// Builders. Each folds constant operands and applies the neutral-element
// identities, so derivatives come out in a readable form.
namespace expr {

inline bool is_constant(const NodePtr& n) { return n->kind == NodeKind::Constant; }
inline bool is_value(const NodePtr& n, cplx v) { return is_constant(n) && n->value == v; }

inline NodePtr constant(cplx v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = v;
  return n;
}

inline NodePtr variable() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  return n;
}

inline NodePtr binary(NodeKind kind, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

inline cplx ipow(cplx base, unsigned exponent) {
  cplx result{1.0, 0.0};
  while (exponent > 0) {
    if (exponent & 1u) result *= base;
    exponent >>= 1u;
    if (exponent > 0) base *= base;
  }
  return result;
}

inline NodePtr negate(NodePtr a) {
  if (is_constant(a)) return constant(-a->value);
  if (a->kind == NodeKind::Negate) return a->lhs;
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Negate;
  n->lhs = std::move(a);
  return n;
}

inline NodePtr add(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return constant(a->value + b->value);
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  return binary(NodeKind::Add, std::move(a), std::move(b));
}

inline NodePtr subtract(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return constant(a->value - b->value);
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return negate(std::move(b));
  return binary(NodeKind::Subtract, std::move(a), std::move(b));
}

inline NodePtr multiply(NodePtr a, NodePtr b) {
  if (is_constant(a) && is_constant(b)) return constant(a->value * b->value);
  if (is_value(a, 0.0) || is_value(b, 0.0)) return constant(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  if (is_value(a, -1.0)) return negate(std::move(b));
  if (is_value(b, -1.0)) return negate(std::move(a));
  return binary(NodeKind::Multiply, std::move(a), std::move(b));
}

// Caller guarantees `denominator` is a non-zero constant.
inline NodePtr divide(NodePtr numerator, NodePtr denominator) {
  if (is_constant(numerator)) return constant(numerator->value / denominator->value);
  if (is_value(denominator, 1.0)) return numerator;
  return binary(NodeKind::Divide, std::move(numerator), std::move(denominator));
}

inline NodePtr power(NodePtr base, unsigned exponent) {
  if (exponent == 0) return constant(1.0);
  if (exponent == 1) return base;
  if (is_constant(base)) return constant(ipow(base->value, exponent));
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Power;
  n->exponent = exponent;
  n->lhs = std::move(base);
  return n;
}

inline NodePtr apply(const Primitive* p, NodePtr argument) {
  if (is_constant(argument)) return constant(p->eval(argument->value));
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Apply;
  n->primitive = p;
  n->lhs = std::move(argument);
  return n;
}

}  // namespace expr

// Registry of unary primitives known to the parser.
inline std::span<const Primitive> primitives();

inline const Primitive* find_primitive(std::string_view name) {
  for (const auto& p : primitives())
    if (p.name == name) return &p;
  return nullptr;
}

inline std::span<const Primitive> primitives() {
  static const std::array<Primitive, 3> table{{
      {"exp", [](cplx z) { return std::exp(z); },
       [](const NodePtr& a) { return expr::apply(find_primitive("exp"), a); }},
      {"sin", [](cplx z) { return std::sin(z); },
       [](const NodePtr& a) { return expr::apply(find_primitive("cos"), a); }},
      {"cos", [](cplx z) { return std::cos(z); },
       [](const NodePtr& a) { return expr::negate(expr::apply(find_primitive("sin"), a)); }},
  }};
  return table;
}

inline NodePtr differentiate(const NodePtr& n) {
  using namespace expr;
  switch (n->kind) {
    case NodeKind::Constant: return constant(0.0);
    case NodeKind::Variable: return constant(1.0);
    case NodeKind::Negate: return negate(differentiate(n->lhs));
    case NodeKind::Add: return add(differentiate(n->lhs), differentiate(n->rhs));
    case NodeKind::Subtract: return subtract(differentiate(n->lhs), differentiate(n->rhs));
    case NodeKind::Multiply:
      return add(multiply(differentiate(n->lhs), n->rhs), multiply(n->lhs, differentiate(n->rhs)));
    case NodeKind::Divide: return divide(differentiate(n->lhs), n->rhs);
    case NodeKind::Power:
      return multiply(multiply(constant(static_cast<double>(n->exponent)), power(n->lhs, n->exponent - 1)),
                      differentiate(n->lhs));
    case NodeKind::Apply: return multiply(n->primitive->derivative(n->lhs), differentiate(n->lhs));
  }
  return constant(0.0);
}

namespace detail {

inline std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, end);
}

inline void print_node(const NodePtr& n, std::string& out) {
  switch (n->kind) {
    case NodeKind::Constant: {
      const double re = n->value.real(), im = n->value.imag();
      if (im == 0.0 && !std::signbit(im)) {
        out += "(" + format_real(re) + ")";
      } else if (re == 0.0 && !std::signbit(re)) {
        out += "(" + format_real(im) + "i)";
      } else {
        out += "((" + format_real(re) + ")+(" + format_real(im) + "i))";
      }
      return;
    }
    case NodeKind::Variable: out += "z"; return;
    case NodeKind::Negate:
      out += "(-";
      print_node(n->lhs, out);
      out += ")";
      return;
    case NodeKind::Power:
      out += "(";
      print_node(n->lhs, out);
      out += "^" + std::to_string(n->exponent) + ")";
      return;
    case NodeKind::Apply:
      out += std::string(n->primitive->name) + "(";
      print_node(n->lhs, out);
      out += ")";
      return;
    default: break;
  }
  const char op = n->kind == NodeKind::Add        ? '+'
                  : n->kind == NodeKind::Subtract ? '-'
                  : n->kind == NodeKind::Multiply ? '*'
                                                  : '/';
  out += "(";
  print_node(n->lhs, out);
  out += op;
  print_node(n->rhs, out);
  out += ")";
}

// Postfix program for evaluation.
struct Instruction {
  NodeKind op;
  cplx value{};
  unsigned exponent = 0;
  const Primitive* primitive = nullptr;
};

inline std::size_t compile(const NodePtr& n, std::vector<Instruction>& program) {
  std::size_t depth = 1;
  if (n->lhs) depth = std::max(depth, compile(n->lhs, program));
  if (n->rhs) depth = std::max(depth, 1 + compile(n->rhs, program));
  program.push_back({n->kind, n->value, n->exponent, n->primitive});
  return depth;
}

}  // namespace detail

// Result of evaluating an expression. When any intermediate value is not
// finite the value saturates to the largest representable magnitude and
// `overflowed` is set; escape-time callers treat that as escape.
struct Evaluation {
  cplx value;
  bool overflowed = false;
};

class FunctionExpression {
 public:
  explicit FunctionExpression(NodePtr root) : root_(std::move(root)), derivative_(differentiate(root_)) {
    stack_depth_ = detail::compile(root_, program_);
  }

  const NodePtr& root() const noexcept { return root_; }

  Evaluation evaluate(cplx z) const {
    constexpr std::size_t kInline = 32;
    std::array<cplx, kInline> small;
    std::vector<cplx> large;
    cplx* stack = small.data();
    if (stack_depth_ > kInline) {
      large.resize(stack_depth_);
      stack = large.data();
    }
    bool finite = std::isfinite(z.real()) && std::isfinite(z.imag());
    std::size_t top = 0;
    for (const auto& ins : program_) {
      cplx r;
      switch (ins.op) {
        case NodeKind::Constant: r = ins.value; break;
        case NodeKind::Variable: r = z; break;
        case NodeKind::Negate: r = -stack[--top]; break;
        case NodeKind::Add: top -= 2; r = stack[top] + stack[top + 1]; break;
        case NodeKind::Subtract: top -= 2; r = stack[top] - stack[top + 1]; break;
        case NodeKind::Multiply: top -= 2; r = stack[top] * stack[top + 1]; break;
        case NodeKind::Divide: top -= 2; r = stack[top] / stack[top + 1]; break;
        case NodeKind::Power: r = expr::ipow(stack[--top], ins.exponent); break;
        case NodeKind::Apply: r = ins.primitive->eval(stack[--top]); break;
      }
      finite = finite && std::isfinite(r.real()) && std::isfinite(r.imag());
      stack[top++] = r;
    }
    if (!finite) return {cplx(std::numeric_limits<double>::max(), 0.0), true};
    return {stack[0], false};
  }

  // Saturated value (see Evaluation).
  cplx operator()(cplx z) const { return evaluate(z).value; }

  FunctionExpression derivative() const { return FunctionExpression(derivative_); }

  // Canonical, fully parenthesized form; parses back to the same tree.
  std::string print() const {
    std::string out;
    detail::print_node(root_, out);
    return out;
  }

 private:
  NodePtr root_;
  NodePtr derivative_;
  std::vector<detail::Instruction> program_;
  std::size_t stack_depth_ = 1;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ >= src_.size()) fail({"expression"});
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return root;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'" : "end of input";
    throw SyntaxError(pos_, std::move(expected), found);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = expr::add(lhs, parse_term());
      } else if (accept('-')) {
        lhs = expr::subtract(lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = expr::multiply(lhs, parse_unary());
      } else if (accept('/')) {
        const std::size_t at = pos_ - 1;
        NodePtr den = parse_unary();
        if (!expr::is_constant(den)) throw NonEntireError(at, "division by a non-constant expression");
        if (den->value == cplx(0.0, 0.0)) throw NonEntireError(at, "division by zero");
        lhs = expr::divide(lhs, den);
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return expr::negate(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (!accept('^')) return base;
    const std::size_t at = pos_ - 1;
    NodePtr e = parse_unary();
    if (!expr::is_constant(e)) throw NonEntireError(at, "exponent must be a constant");
    const cplx v = e->value;
    if (v.imag() != 0.0 || v.real() < 0.0 || v.real() != std::floor(v.real()) || v.real() > 1e9)
      throw NonEntireError(at, "exponent must be a non-negative integer");
    return expr::power(base, static_cast<unsigned>(v.real()));
  }

  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail({"number", "'z'", "'i'", "function name", "'('"});
    const char c = src_[pos_];
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) fail({"')'"});
      return inner;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (name == "z") return expr::variable();
      if (name == "i") return expr::constant(cplx(0.0, 1.0));
      if (const Primitive* p = find_primitive(name)) {
        if (!accept('(')) fail({"'('"});
        NodePtr arg = parse_expr();
        if (!accept(')')) fail({"')'"});
        return expr::apply(p, arg);
      }
      pos_ = start;
      std::vector<std::string> expected{"'z'", "'i'"};
      for (const auto& p : primitives()) expected.push_back("'" + std::string(p.name) + "'");
      throw SyntaxError(start, std::move(expected), "identifier '" + std::string(name) + "'");
    }
    fail({"number", "'z'", "'i'", "function name", "'('"});
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail({"digit"});
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail({"exponent digits"});
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || !std::isfinite(v)) {
      throw SyntaxError(start, {"finite number"}, "'" + std::string(src_.substr(start, pos_ - start)) + "'");
    }
    if (pos_ < src_.size() && src_[pos_] == 'i' && !(pos_ + 1 < src_.size() && is_ident_char(src_[pos_ + 1]))) {
      ++pos_;
      return expr::constant(cplx(0.0, v));
    }
    return expr::constant(cplx(v, 0.0));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline FunctionExpression parse(std::string_view source) { return FunctionExpression(detail::Parser(source).parse_all()); }

inline Evaluation evaluate(const FunctionExpression& f, cplx z) { return f.evaluate(z); }

inline FunctionExpression derivative(const FunctionExpression& f) { return f.derivative(); }

inline std::string print(const FunctionExpression& f) { return f.print(); }

}  // namespace entire
