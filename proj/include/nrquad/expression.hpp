#pragma once

// Univariate expression trees: parse, print, evaluate, differentiate, simplify.
//
// Grammar (whitespace ignored between tokens):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'x' | name '(' expr ')' | '(' expr ')'
//   name    := sin | cos | tan | exp | ln | sqrt | abs
//
// Numbers are decimal with optional fraction and exponent. Implicit
// multiplication ("2x") is rejected.

#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace nrq {

enum class NodeKind { constant, variable, negate, binary, function };

enum class BinaryOp { add, sub, mul, div, pow };

enum class Function { sin, cos, tan, exp, ln, sqrt, abs };

inline constexpr std::array<std::pair<std::string_view, Function>, 7> function_names{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"exp", Function::exp},
    {"ln", Function::ln},
    {"sqrt", Function::sqrt},
    {"abs", Function::abs},
}};

inline std::string_view to_string(Function fn) {
  for (const auto& [name, f] : function_names)
    if (f == fn) return name;
  return "?";
}

inline char to_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
  }
  return '?';
}

/// Immutable expression tree in the single variable x.
///
/// Copies share structure. Constants are always finite; the constant()
/// factory rejects NaN and infinities.
class Expression {
 public:
  /// The variable x; also the default-constructed value.
  Expression() : node_(variable_node()) {}

  static Expression constant(double value) {
    if (!std::isfinite(value))
      throw std::invalid_argument("expression constants must be finite");
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::constant;
    node->value = value;
    return Expression(std::move(node));
  }

  static Expression variable() { return Expression(); }

  static Expression negate(Expression operand) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::negate;
    node->lhs = std::move(operand.node_);
    return Expression(std::move(node));
  }

  static Expression binary(BinaryOp op, Expression lhs, Expression rhs) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::binary;
    node->op = op;
    node->lhs = std::move(lhs.node_);
    node->rhs = std::move(rhs.node_);
    return Expression(std::move(node));
  }

  static Expression apply(Function fn, Expression arg) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::function;
    node->fn = fn;
    node->lhs = std::move(arg.node_);
    return Expression(std::move(node));
  }

  NodeKind kind() const { return node_->kind; }
  double value() const { return node_->value; }
  BinaryOp op() const { return node_->op; }
  Function function() const { return node_->fn; }

  /// Operand of a negation or function node, left child of a binary node.
  Expression lhs() const { return Expression(node_->lhs); }
  Expression rhs() const { return Expression(node_->rhs); }
  Expression operand() const { return lhs(); }

  bool is_constant() const { return kind() == NodeKind::constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  /// True when the subtree mentions x.
  bool depends_on_x() const {
    switch (kind()) {
      case NodeKind::constant: return false;
      case NodeKind::variable: return true;
      case NodeKind::binary: return lhs().depends_on_x() || rhs().depends_on_x();
      default: return operand().depends_on_x();
    }
  }

  std::size_t size() const {
    switch (kind()) {
      case NodeKind::constant:
      case NodeKind::variable: return 1;
      case NodeKind::binary: return 1 + lhs().size() + rhs().size();
      default: return 1 + operand().size();
    }
  }

 private:
  struct Node {
    NodeKind kind = NodeKind::variable;
    double value = 0.0;
    BinaryOp op = BinaryOp::add;
    Function fn = Function::sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::shared_ptr<const Node> variable_node() {
    static const auto node = std::make_shared<const Node>();
    return node;
  }

  std::shared_ptr<const Node> node_;
};

inline Expression operator+(Expression l, Expression r) { return Expression::binary(BinaryOp::add, std::move(l), std::move(r)); }
inline Expression operator-(Expression l, Expression r) { return Expression::binary(BinaryOp::sub, std::move(l), std::move(r)); }
inline Expression operator*(Expression l, Expression r) { return Expression::binary(BinaryOp::mul, std::move(l), std::move(r)); }
inline Expression operator/(Expression l, Expression r) { return Expression::binary(BinaryOp::div, std::move(l), std::move(r)); }
inline Expression operator-(Expression e) { return Expression::negate(std::move(e)); }
inline Expression pow(Expression base, Expression exponent) {
  return Expression::binary(BinaryOp::pow, std::move(base), std::move(exponent));
}

// ---------------------------------------------------------------------------
// Evaluation

inline double apply_function(Function fn, double v) {
  switch (fn) {
    case Function::sin: return std::sin(v);
    case Function::cos: return std::cos(v);
    case Function::tan: return std::tan(v);
    case Function::exp: return std::exp(v);
    case Function::ln: return std::log(v);
    case Function::sqrt: return std::sqrt(v);
    case Function::abs: return std::fabs(v);
  }
  return std::nan("");
}

inline double apply_binary(BinaryOp op, double l, double r) {
  switch (op) {
    case BinaryOp::add: return l + r;
    case BinaryOp::sub: return l - r;
    case BinaryOp::mul: return l * r;
    case BinaryOp::div: return l / r;
    case BinaryOp::pow: return std::pow(l, r);
  }
  return std::nan("");
}

/// Evaluates e at x. Domain violations come back as NaN or infinity; callers
/// decide whether that is an error.
inline double evaluate(const Expression& e, double x) {
  switch (e.kind()) {
    case NodeKind::constant: return e.value();
    case NodeKind::variable: return x;
    case NodeKind::negate: return -evaluate(e.operand(), x);
    case NodeKind::binary: return apply_binary(e.op(), evaluate(e.lhs(), x), evaluate(e.rhs(), x));
    case NodeKind::function: return apply_function(e.function(), evaluate(e.operand(), x));
  }
  return std::nan("");
}

// ---------------------------------------------------------------------------
// Printing

/// Shortest decimal text that reads back to the same double.
inline std::string format_real(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

/// Fully parenthesized text; parse(to_text(e)) evaluates identically to e.
inline std::string to_text(const Expression& e) {
  switch (e.kind()) {
    case NodeKind::constant: {
      // A leading '-' would re-parse as negation, which evaluates the same.
      std::string s = format_real(e.value());
      return e.value() < 0 || std::signbit(e.value()) ? "(" + s + ")" : s;
    }
    case NodeKind::variable: return "x";
    case NodeKind::negate: return "(-" + to_text(e.operand()) + ")";
    case NodeKind::binary:
      return "(" + to_text(e.lhs()) + to_symbol(e.op()) + to_text(e.rhs()) + ")";
    case NodeKind::function:
      return std::string(to_string(e.function())) + "(" + to_text(e.operand()) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing

class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_identifier, arity };

  ParseError(Kind kind, std::size_t offset, const std::string& message)
      : std::runtime_error(message + " at offset " + std::to_string(offset)),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expression parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    Expression e = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + term();
      else if (accept('-'))
        lhs = lhs - term();
      else
        return lhs;
    }
  }

  Expression term() {
    Expression lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = lhs * unary();
      else if (accept('/'))
        lhs = lhs / unary();
      else
        return lhs;
    }
  }

  Expression unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expression primary() {
    skip_space();
    if (at_end()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      Expression inner = expr();
      expect(')');
      return inner;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (!at_end() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at(start, "malformed number");
    if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (!at_end() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail_at(start, "malformed exponent");
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(v))
      fail_at(start, "number out of range");
    return Expression::constant(v);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return Expression::variable();
    for (const auto& [fname, fn] : function_names) {
      if (name != fname) continue;
      skip_space();
      if (at_end() || src_[pos_] != '(')
        throw ParseError(ParseError::Kind::arity, pos_, "function '" + std::string(name) + "' expects one argument");
      ++pos_;
      skip_space();
      if (!at_end() && src_[pos_] == ')')
        throw ParseError(ParseError::Kind::arity, pos_, "function '" + std::string(name) + "' expects one argument");
      Expression arg = expr();
      skip_space();
      if (!at_end() && src_[pos_] == ',')
        throw ParseError(ParseError::Kind::arity, pos_, "function '" + std::string(name) + "' expects one argument");
      expect(')');
      return Expression::apply(fn, arg);
    }
    throw ParseError(ParseError::Kind::unknown_identifier, start, "unknown identifier '" + std::string(name) + "'");
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool at_end() const { return pos_ >= src_.size(); }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    throw ParseError(ParseError::Kind::syntax, at, msg);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expression parse(std::string_view source) { return detail::Parser(source).parse(); }

// ---------------------------------------------------------------------------
// Simplification

namespace detail {

inline std::optional<Expression> folded(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  return Expression::constant(v);
}

}  // namespace detail

/// Constant folding and neutral-element removal. Never rewrites in a way that
/// changes the domain (no e/e -> 1); folds that would produce NaN or an
/// infinity are left unevaluated.
inline Expression simplify(const Expression& e) {
  switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::variable: return e;

    case NodeKind::negate: {
      Expression a = simplify(e.operand());
      if (a.is_constant()) return Expression::constant(-a.value());
      if (a.kind() == NodeKind::negate) return a.operand();
      return -a;
    }

    case NodeKind::function: {
      Expression a = simplify(e.operand());
      if (a.is_constant())
        if (auto c = detail::folded(apply_function(e.function(), a.value()))) return *c;
      return Expression::apply(e.function(), a);
    }

    case NodeKind::binary: break;
  }

  Expression l = simplify(e.lhs());
  Expression r = simplify(e.rhs());
  if (l.is_constant() && r.is_constant())
    if (auto c = detail::folded(apply_binary(e.op(), l.value(), r.value()))) return *c;

  switch (e.op()) {
    case BinaryOp::add:
      if (l.is_constant(0.0)) return r;
      if (r.is_constant(0.0)) return l;
      break;
    case BinaryOp::sub:
      if (r.is_constant(0.0)) return l;
      if (l.is_constant(0.0)) return simplify(-r);
      break;
    case BinaryOp::mul:
      if (l.is_constant(0.0) || r.is_constant(0.0)) return Expression::constant(0.0);
      if (l.is_constant(1.0)) return r;
      if (r.is_constant(1.0)) return l;
      break;
    case BinaryOp::div:
      if (r.is_constant(1.0)) return l;
      break;
    case BinaryOp::pow:
      if (r.is_constant(1.0)) return l;
      if (r.is_constant(0.0)) return Expression::constant(1.0);  // pow(y, 0) == 1 for every y
      break;
  }
  return Expression::binary(e.op(), l, r);
}

// ---------------------------------------------------------------------------
// Differentiation

/// d e / dx by the sum, product, quotient, power and chain rules. The result
/// is not simplified.
inline Expression differentiate(const Expression& e) {
  using C = Expression;
  switch (e.kind()) {
    case NodeKind::constant: return C::constant(0.0);
    case NodeKind::variable: return C::constant(1.0);
    case NodeKind::negate: return -differentiate(e.operand());

    case NodeKind::function: {
      const Expression u = e.operand();
      const Expression du = differentiate(u);
      switch (e.function()) {
        case Function::sin: return Expression::apply(Function::cos, u) * du;
        case Function::cos: return -(Expression::apply(Function::sin, u) * du);
        case Function::tan: return du / pow(Expression::apply(Function::cos, u), C::constant(2.0));
        case Function::exp: return Expression::apply(Function::exp, u) * du;
        case Function::ln: return du / u;
        case Function::sqrt: return du / (C::constant(2.0) * Expression::apply(Function::sqrt, u));
        case Function::abs: return u / Expression::apply(Function::abs, u) * du;  // undefined at u == 0
      }
      break;
    }

    case NodeKind::binary: {
      const Expression u = e.lhs();
      const Expression v = e.rhs();
      switch (e.op()) {
        case BinaryOp::add: return differentiate(u) + differentiate(v);
        case BinaryOp::sub: return differentiate(u) - differentiate(v);
        case BinaryOp::mul: return differentiate(u) * v + u * differentiate(v);
        case BinaryOp::div:
          return (differentiate(u) * v - u * differentiate(v)) / pow(v, C::constant(2.0));
        case BinaryOp::pow:
          if (!v.depends_on_x()) return v * pow(u, v - C::constant(1.0)) * differentiate(u);
          // u^v = exp(v ln u)
          return e * (differentiate(v) * Expression::apply(Function::ln, u) + v * differentiate(u) / u);
      }
      break;
    }
  }
  return C::constant(0.0);
}

}  // namespace nrq
