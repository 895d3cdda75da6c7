#pragma once

// Expression trees for complex functions of one complex variable.
//
// Trees are immutable and shared: copying an Expr copies a pointer. The
// variable node carries no name; the name is chosen when parsing or
// rendering ("z" by default, "t" for curve parametrizations).

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mulcalc {

using Complex = std::complex<double>;
using Params = std::map<std::string, Complex, std::less<>>;

enum class Op {
  Var,
  Lit,
  Param,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Exp,
  Log,  // principal branch, Arg in (-pi, pi]
  Sin,
  Cos,
  Pow,  // integer exponent
  Conj,
  Abs,
  Re,
  Im,
};

std::string_view op_name(Op op) noexcept;

class Expr {
 public:
  static Expr var();
  static Expr lit(Complex value);
  static Expr param(std::string name);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr pow(Expr base, int exponent);

  Op op() const noexcept;
  Complex value() const noexcept;
  const std::string& name() const noexcept;
  int exponent() const noexcept;
  std::span<const Expr> children() const noexcept;
  const Expr& child(std::size_t i) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr exp(Expr a);
Expr log(Expr a);

struct Binding {
  Complex variable{};
  Params params;
};

struct ParseOptions {
  std::string variable = "z";
};

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' '-'? INT)?
//   unary  := '-'? atom
//   atom   := NUMBER | 'i' | 'pi' | 'e' | IDENT | IDENT '(' expr ')' | '(' expr ')'
Expr parse(std::string_view source, const ParseOptions& options = {});

// Text that parses back to a structurally equal tree, provided every literal
// is one the parser can produce (nonnegative reals and i).
std::string render(const Expr& expr, std::string_view variable = "z");

Complex evaluate(const Expr& expr, const Binding& at);
Complex evaluate(const Expr& expr, Complex variable, const Params& params = {});

// Complex derivative with respect to the variable. Throws NotHolomorphicError
// if conj/abs/re/im appears anywhere in the tree.
Expr differentiate(const Expr& expr);

Expr simplify(const Expr& expr);

// Replaces every variable node with `replacement`.
Expr substitute(const Expr& expr, const Expr& replacement);

std::set<std::string> free_parameters(const Expr& expr);
bool is_holomorphic_tree(const Expr& expr);

// Log with Arg in (-pi, pi]; treats -0.0 imaginary parts as +0.
Complex principal_log(Complex w);

// ------------------------------------------------------------------------

struct Expr::Node {
  Op op;
  Complex value;
  std::string name;
  int exponent = 0;
  std::vector<Expr> kids;
};

}  // namespace mulcalc
