#include "mulcalc/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mulcalc/errors.hpp"

namespace mulcalc {

std::string_view op_name(Op op) noexcept {
  switch (op) {
    case Op::Var:
      return "var";
    case Op::Lit:
      return "lit";
    case Op::Param:
      return "param";
    case Op::Add:
      return "+";
    case Op::Sub:
      return "-";
    case Op::Mul:
      return "*";
    case Op::Div:
      return "/";
    case Op::Neg:
      return "neg";
    case Op::Exp:
      return "exp";
    case Op::Log:
      return "Log";
    case Op::Sin:
      return "sin";
    case Op::Cos:
      return "cos";
    case Op::Pow:
      return "^";
    case Op::Conj:
      return "conj";
    case Op::Abs:
      return "abs";
    case Op::Re:
      return "re";
    case Op::Im:
      return "im";
  }
  return "?";
}

namespace {

bool is_function(Op op) {
  switch (op) {
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos:
    case Op::Conj:
    case Op::Abs:
    case Op::Re:
    case Op::Im:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) { return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div; }

constexpr std::array<std::pair<std::string_view, Op>, 8> kFunctions{{
    {"exp", Op::Exp},
    {"Log", Op::Log},
    {"sin", Op::Sin},
    {"cos", Op::Cos},
    {"conj", Op::Conj},
    {"abs", Op::Abs},
    {"re", Op::Re},
    {"im", Op::Im},
}};

const Op* lookup_function(std::string_view name) {
  for (const auto& [n, op] : kFunctions) {
    if (n == name) return &op;
  }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------- nodes

Expr Expr::var() { return Expr(std::make_shared<const Node>(Node{Op::Var, {}, {}, 0, {}})); }

Expr Expr::lit(Complex value) {
  return Expr(std::make_shared<const Node>(Node{Op::Lit, value, {}, 0, {}}));
}

Expr Expr::param(std::string name) {
  return Expr(std::make_shared<const Node>(Node{Op::Param, {}, std::move(name), 0, {}}));
}

Expr Expr::unary(Op op, Expr arg) {
  if (op != Op::Neg && !is_function(op)) {
    throw std::invalid_argument("Expr::unary: not a unary op: " + std::string(op_name(op)));
  }
  return Expr(std::make_shared<const Node>(Node{op, {}, {}, 0, {std::move(arg)}}));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) {
    throw std::invalid_argument("Expr::binary: not a binary op: " + std::string(op_name(op)));
  }
  return Expr(std::make_shared<const Node>(Node{op, {}, {}, 0, {std::move(lhs), std::move(rhs)}}));
}

Expr Expr::pow(Expr base, int exponent) {
  return Expr(std::make_shared<const Node>(Node{Op::Pow, {}, {}, exponent, {std::move(base)}}));
}

Op Expr::op() const noexcept { return node_->op; }
Complex Expr::value() const noexcept { return node_->value; }
const std::string& Expr::name() const noexcept { return node_->name; }
int Expr::exponent() const noexcept { return node_->exponent; }
std::span<const Expr> Expr::children() const noexcept { return node_->kids; }

const Expr& Expr::child(std::size_t i) const {
  if (i >= node_->kids.size()) throw std::out_of_range("Expr::child");
  return node_->kids[i];
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op || x.kids.size() != y.kids.size()) return false;
  switch (x.op) {
    case Op::Lit:
      if (x.value != y.value) return false;
      break;
    case Op::Param:
      if (x.name != y.name) return false;
      break;
    case Op::Pow:
      if (x.exponent != y.exponent) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < x.kids.size(); ++i) {
    if (!(x.kids[i] == y.kids[i])) return false;
  }
  return true;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Op::Add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Op::Sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Op::Mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Op::Div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::unary(Op::Neg, std::move(a)); }
Expr exp(Expr a) { return Expr::unary(Op::Exp, std::move(a)); }
Expr log(Expr a) { return Expr::unary(Op::Log, std::move(a)); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& options)
      : src_(src), variable_(options.variable) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ < src_.size()) {
      throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_,
                       {"operator", "end of input"});
    }
    return e;
  }

 private:
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
      throw ParseError(pos_ < src_.size() ? "unexpected '" + std::string(1, src_[pos_]) + "'"
                                          : "unexpected end of input",
                       pos_, {"'" + std::string(1, c) + "'"});
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  Expr factor() {
    Expr base = unary();
    if (!accept('^')) return base;
    bool negative = accept('-');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("missing exponent", pos_, {"integer"});
    int n = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, n);
    if (ec != std::errc{}) throw ParseError("exponent out of range", start);
    return Expr::pow(base, negative ? -n : n);
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Op::Neg, atom());
    return atom();
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw ParseError("unexpected end of input", pos_, {"number", "identifier", "'('"});
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      Expr inner = expr();
      expect(')');
      return inner;
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_,
                     {"number", "identifier", "'('"});
  }

  Expr number() {
    std::size_t start = pos_;
    auto digit = [&](std::size_t i) {
      return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    };
    while (digit(pos_)) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (digit(pos_)) ++pos_;
    }
    // An exponent only when digits follow; otherwise 'e' is the constant.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (digit(p)) {
        pos_ = p;
        while (digit(pos_)) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{} || ptr != src_.data() + pos_) {
      throw ParseError("malformed number", start, {"number"});
    }
    return Expr::lit(Complex(v, 0.0));
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (call) {
      const Op* fn = lookup_function(name);
      if (fn == nullptr) {
        throw ParseError("unknown function '" + std::string(name) + "'", start,
                         {"exp", "Log", "sin", "cos", "conj", "abs", "re", "im"});
      }
      ++pos_;
      Expr arg = expr();
      expect(')');
      return Expr::unary(*fn, arg);
    }
    if (lookup_function(name) != nullptr) {
      throw ParseError("function '" + std::string(name) + "' needs an argument", pos_, {"'('"});
    }
    if (name == variable_) return Expr::var();
    if (name == "i") return Expr::lit(Complex(0.0, 1.0));
    if (name == "pi") return Expr::lit(Complex(std::numbers::pi, 0.0));
    if (name == "e") return Expr::lit(Complex(std::numbers::e, 0.0));
    return Expr::param(std::string(name));
  }

  std::string_view src_;
  std::string variable_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source, const ParseOptions& options) {
  const std::string& v = options.variable;
  if (v == "i" || v == "e" || v == "pi" || lookup_function(v) != nullptr) {
    throw InputError("reserved name cannot be the variable: " + v);
  }
  return Parser(source, options).run();
}

// ---------------------------------------------------------------- render

namespace {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

// Precedence levels matching the grammar; atoms bind tightest.
constexpr int kSum = 1, kProduct = 2, kPower = 3, kUnary = 4, kAtom = 5;

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return kSum;
    case Op::Mul:
    case Op::Div:
      return kProduct;
    case Op::Pow:
      return kPower;
    case Op::Neg:
      return kUnary;
    default:
      return kAtom;
  }
}

std::string render_literal(Complex v) {
  double re = v.real(), im = v.imag();
  if (im == 0.0 && !std::signbit(re)) return format_double(re);
  if (re == 0.0 && !std::signbit(re) && im == 1.0) return "i";
  if (im == 0.0) return "(" + format_double(re) + ")";
  std::string out = "(" + format_double(re);
  out += std::signbit(im) ? " - " : " + ";
  out += format_double(std::abs(im)) + "*i)";
  return out;
}

void render_into(const Expr& e, std::string_view var, std::string& out);

void render_at(const Expr& e, std::string_view var, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    render_into(e, var, out);
    out += ')';
  } else {
    render_into(e, var, out);
  }
}

void render_into(const Expr& e, std::string_view var, std::string& out) {
  switch (e.op()) {
    case Op::Var:
      out += var;
      return;
    case Op::Param:
      out += e.name();
      return;
    case Op::Lit:
      out += render_literal(e.value());
      return;
    case Op::Add:
    case Op::Sub:
      render_at(e.child(0), var, kSum, out);
      out += e.op() == Op::Add ? " + " : " - ";
      render_at(e.child(1), var, kProduct, out);
      return;
    case Op::Mul:
    case Op::Div:
      render_at(e.child(0), var, kProduct, out);
      out += e.op() == Op::Mul ? "*" : "/";
      render_at(e.child(1), var, kPower, out);
      return;
    case Op::Pow:
      render_at(e.child(0), var, kUnary, out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    case Op::Neg:
      out += '-';
      render_at(e.child(0), var, kAtom, out);
      return;
    default:
      out += op_name(e.op());
      out += '(';
      render_into(e.child(0), var, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string render(const Expr& expr, std::string_view variable) {
  std::string out;
  render_into(expr, variable, out);
  return out;
}

// ---------------------------------------------------------------- evaluate

Complex principal_log(Complex w) {
  double arg = std::atan2(w.imag(), w.real());
  if (arg == -std::numbers::pi) arg = std::numbers::pi;
  return {std::log(std::abs(w)), arg};
}

namespace {

Complex int_pow(Complex base, int n) {
  if (n < 0) {
    if (base == Complex(0.0, 0.0)) throw DomainError("division by zero in negative power");
    return 1.0 / int_pow(base, -n);
  }
  Complex result(1.0, 0.0);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex eval(const Expr& e, Complex var, const Params& params) {
  Complex r;
  switch (e.op()) {
    case Op::Var:
      return var;
    case Op::Lit:
      return e.value();
    case Op::Param: {
      auto it = params.find(e.name());
      if (it == params.end()) throw InputError("unbound parameter '" + e.name() + "'");
      return it->second;
    }
    case Op::Add:
      r = eval(e.child(0), var, params) + eval(e.child(1), var, params);
      break;
    case Op::Sub:
      r = eval(e.child(0), var, params) - eval(e.child(1), var, params);
      break;
    case Op::Mul:
      r = eval(e.child(0), var, params) * eval(e.child(1), var, params);
      break;
    case Op::Div: {
      Complex num = eval(e.child(0), var, params);
      Complex den = eval(e.child(1), var, params);
      if (den == Complex(0.0, 0.0)) throw DomainError("division by zero");
      r = num / den;
      break;
    }
    case Op::Neg:
      r = -eval(e.child(0), var, params);
      break;
    case Op::Exp:
      r = std::exp(eval(e.child(0), var, params));
      break;
    case Op::Log: {
      Complex w = eval(e.child(0), var, params);
      if (w == Complex(0.0, 0.0)) throw DomainError("Log of zero");
      r = principal_log(w);
      break;
    }
    case Op::Sin:
      r = std::sin(eval(e.child(0), var, params));
      break;
    case Op::Cos:
      r = std::cos(eval(e.child(0), var, params));
      break;
    case Op::Pow:
      r = int_pow(eval(e.child(0), var, params), e.exponent());
      break;
    case Op::Conj:
      r = std::conj(eval(e.child(0), var, params));
      break;
    case Op::Abs:
      r = std::abs(eval(e.child(0), var, params));
      break;
    case Op::Re:
      r = eval(e.child(0), var, params).real();
      break;
    case Op::Im:
      r = eval(e.child(0), var, params).imag();
      break;
  }
  if (std::isnan(r.real()) || std::isnan(r.imag())) {
    throw DomainError("evaluation of '" + std::string(op_name(e.op())) + "' produced NaN");
  }
  return r;
}

}  // namespace

Complex evaluate(const Expr& expr, const Binding& at) { return eval(expr, at.variable, at.params); }

Complex evaluate(const Expr& expr, Complex variable, const Params& params) {
  return eval(expr, variable, params);
}

// ---------------------------------------------------------------- calculus

bool is_holomorphic_tree(const Expr& expr) {
  switch (expr.op()) {
    case Op::Conj:
    case Op::Abs:
    case Op::Re:
    case Op::Im:
      return false;
    default:
      break;
  }
  for (const Expr& k : expr.children()) {
    if (!is_holomorphic_tree(k)) return false;
  }
  return true;
}

namespace {

void reject_non_holomorphic(const Expr& e) {
  switch (e.op()) {
    case Op::Conj:
    case Op::Abs:
    case Op::Re:
    case Op::Im:
      throw NotHolomorphicError(std::string(op_name(e.op())));
    default:
      break;
  }
  for (const Expr& k : e.children()) reject_non_holomorphic(k);
}

const Expr& zero() {
  static const Expr z = Expr::lit(0.0);
  return z;
}

const Expr& one() {
  static const Expr o = Expr::lit(1.0);
  return o;
}

Expr derive(const Expr& e) {
  switch (e.op()) {
    case Op::Var:
      return one();
    case Op::Lit:
    case Op::Param:
      return zero();
    case Op::Add:
      return derive(e.child(0)) + derive(e.child(1));
    case Op::Sub:
      return derive(e.child(0)) - derive(e.child(1));
    case Op::Neg:
      return -derive(e.child(0));
    case Op::Mul: {
      const Expr& u = e.child(0);
      const Expr& v = e.child(1);
      return derive(u) * v + u * derive(v);
    }
    case Op::Div: {
      const Expr& u = e.child(0);
      const Expr& v = e.child(1);
      return (derive(u) * v - u * derive(v)) / Expr::pow(v, 2);
    }
    case Op::Exp:
      return derive(e.child(0)) * e;
    // Valid for any branch of log: d/dz log u = u'/u.
    case Op::Log:
      return derive(e.child(0)) / e.child(0);
    case Op::Sin:
      return derive(e.child(0)) * Expr::unary(Op::Cos, e.child(0));
    case Op::Cos:
      return -(derive(e.child(0)) * Expr::unary(Op::Sin, e.child(0)));
    case Op::Pow: {
      int n = e.exponent();
      if (n == 0) return zero();
      const Expr& u = e.child(0);
      return Expr::lit(static_cast<double>(n)) * Expr::pow(u, n - 1) * derive(u);
    }
    default:
      throw NotHolomorphicError(std::string(op_name(e.op())));
  }
}

bool is_lit(const Expr& e, Complex v) { return e.op() == Op::Lit && e.value() == v; }

Expr fold_or(const Expr& e, Complex (*fn)(Complex)) {
  Complex v = fn(e.child(0).value());
  if (std::isnan(v.real()) || std::isnan(v.imag())) return e;
  return Expr::lit(v);
}

Expr simplify_once(const Expr& e) {
  if (e.children().empty()) return e;

  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const Expr& k : e.children()) kids.push_back(simplify_once(k));

  switch (e.op()) {
    case Op::Add: {
      const Expr& a = kids[0];
      const Expr& b = kids[1];
      if (a.op() == Op::Lit && b.op() == Op::Lit) return Expr::lit(a.value() + b.value());
      if (is_lit(a, 0.0)) return b;
      if (is_lit(b, 0.0)) return a;
      if (a == b) return Expr::lit(2.0) * a;
      return a + b;
    }
    case Op::Sub: {
      const Expr& a = kids[0];
      const Expr& b = kids[1];
      if (a.op() == Op::Lit && b.op() == Op::Lit) return Expr::lit(a.value() - b.value());
      if (is_lit(b, 0.0)) return a;
      if (is_lit(a, 0.0)) return -b;
      return a - b;
    }
    case Op::Mul: {
      const Expr& a = kids[0];
      const Expr& b = kids[1];
      if (a.op() == Op::Lit && b.op() == Op::Lit) return Expr::lit(a.value() * b.value());
      if (is_lit(a, 0.0) || is_lit(b, 0.0)) return zero();
      if (is_lit(a, 1.0)) return b;
      if (is_lit(b, 1.0)) return a;
      return a * b;
    }
    case Op::Div: {
      const Expr& a = kids[0];
      const Expr& b = kids[1];
      if (a.op() == Op::Lit && b.op() == Op::Lit && b.value() != Complex(0.0, 0.0)) {
        return Expr::lit(a.value() / b.value());
      }
      if (is_lit(b, 1.0)) return a;
      return a / b;
    }
    case Op::Neg: {
      const Expr& a = kids[0];
      if (a.op() == Op::Lit) return Expr::lit(-a.value());
      if (a.op() == Op::Neg) return a.child(0);
      return -a;
    }
    case Op::Pow: {
      const Expr& a = kids[0];
      int n = e.exponent();
      if (n == 0) return one();
      if (n == 1) return a;
      if (a.op() == Op::Lit && (n > 0 || a.value() != Complex(0.0, 0.0))) {
        return Expr::lit(int_pow(a.value(), n));
      }
      return Expr::pow(a, n);
    }
    default: {
      Expr rebuilt = Expr::unary(e.op(), kids[0]);
      if (kids[0].op() != Op::Lit) return rebuilt;
      switch (e.op()) {
        case Op::Exp:
          return fold_or(rebuilt, [](Complex v) { return std::exp(v); });
        case Op::Sin:
          return fold_or(rebuilt, [](Complex v) { return std::sin(v); });
        case Op::Cos:
          return fold_or(rebuilt, [](Complex v) { return std::cos(v); });
        case Op::Log:
          if (kids[0].value() == Complex(0.0, 0.0)) return rebuilt;
          return fold_or(rebuilt, [](Complex v) { return principal_log(v); });
        default:
          return rebuilt;
      }
    }
  }
}

}  // namespace

Expr differentiate(const Expr& expr) {
  reject_non_holomorphic(expr);
  return simplify(derive(expr));
}

Expr simplify(const Expr& expr) {
  Expr current = expr;
  for (int pass = 0; pass < 32; ++pass) {
    Expr next = simplify_once(current);
    if (next == current) return next;
    current = std::move(next);
  }
  return current;
}

Expr substitute(const Expr& expr, const Expr& replacement) {
  switch (expr.op()) {
    case Op::Var:
      return replacement;
    case Op::Lit:
    case Op::Param:
      return expr;
    case Op::Pow:
      return Expr::pow(substitute(expr.child(0), replacement), expr.exponent());
    default:
      break;
  }
  if (expr.children().size() == 2) {
    return Expr::binary(expr.op(), substitute(expr.child(0), replacement),
                        substitute(expr.child(1), replacement));
  }
  return Expr::unary(expr.op(), substitute(expr.child(0), replacement));
}

namespace {

void collect_params(const Expr& e, std::set<std::string>& out) {
  if (e.op() == Op::Param) out.insert(e.name());
  for (const Expr& k : e.children()) collect_params(k, out);
}

}  // namespace

std::set<std::string> free_parameters(const Expr& expr) {
  std::set<std::string> out;
  collect_params(expr, out);
  return out;
}

}  // namespace mulcalc
