#pragma once

// Complex multiplicative integrals along curves:
//   int_C f(z)^{dz} = exp( int_a^b log f(z(t)) z'(t) dt )
// with log f continued along the curve. Changing the starting branch by 2 pi i n
// multiplies the result by W^n, W = exp(2 pi i (z(b) - z(a))).

#include <optional>
#include <string>
#include <vector>

#include "mulcalc/curves.hpp"
#include "mulcalc/expr.hpp"
#include "mulcalc/quadrature.hpp"

namespace mulcalc {

// Values of a continuous branch of log f(z(t)) at the partition nodes.
struct BranchPath {
  std::vector<double> times;
  std::vector<Complex> logf;
  std::vector<Complex> values;  // f(z(t_k))
  Complex anchor;

  std::size_t piece_of(double t) const;
  // Continues the branch from the node starting t's piece.
  Complex log_at(double t, Complex f_at_t) const;
};

struct BranchOptions {
  std::optional<Complex> anchor;  // overrides principal Log f(z(a)) + 2 pi i offset
  int anchor_offset = 0;
  int extra_splits = 0;  // bisect every piece this many extra times
  int max_depth = 40;
};

BranchPath track_log(const Expr& f, const Curve& curve, const Params& params = {},
                     const BranchOptions& options = {});

struct MultiValueIntegral {
  Complex base;     // value for the chosen anchor (n = 0)
  Complex winding;  // W; exactly 1 when single-valued
  Complex delta_z;  // z(b) - z(a), 0 for closed curves
  bool single_valued = false;
  std::optional<int> distinct_count;  // empty: infinitely many values
  Complex log_base;
  std::size_t pieces = 0;
  int max_rounds = 0;
  BranchPath path;

  Complex value(int n) const;
};

MultiValueIntegral complex_star_integral(const Expr& f, const Curve& curve,
                                         const Params& params = {},
                                         const QuadratureConfig& cfg = {},
                                         const BranchOptions& options = {});

// Number of distinct values exp(2 pi i n dz), n in Z: q when dz is within 1e-9
// of a rational p/q with q <= 64, otherwise empty.
std::optional<int> distinct_value_count(Complex delta_z);

struct VerificationReport {
  std::string name;
  Complex lhs;
  Complex rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  std::optional<int> matched_branch;
  bool passed = false;
  double tolerance = 0.0;
};

struct VerifyConfig {
  QuadratureConfig quad;
  std::optional<double> tolerance;  // each check has its own default
  int branch_range = 5;
};

// int_C (f*)^{dz} = f(b)/f(a) for some branch n in [-range, range].
VerificationReport verify_ftc_complex(const Expr& f, const Curve& curve, const Params& params = {},
                                      const VerifyConfig& cfg = {});
// On a closed curve int_C (f*)^{dz} = 1.
VerificationReport verify_closed(const Expr& f, const Curve& curve, const Params& params = {},
                                 const VerifyConfig& cfg = {});
// Splitting the curve at split_t; the second half starts on the first half's
// terminal branch. Checked for n in -2..2.
VerificationReport verify_concat(const Expr& f, const Curve& curve, double split_t,
                                 const Params& params = {}, const VerifyConfig& cfg = {});
// I(fg) = W^k I(f) I(g) for some |k| <= range.
VerificationReport verify_product(const Expr& f, const Expr& g, const Curve& curve,
                                  const Params& params = {}, const VerifyConfig& cfg = {});
VerificationReport verify_division(const Expr& f, const Expr& g, const Curve& curve,
                                   const Params& params = {}, const VerifyConfig& cfg = {});
// Forward times reverse (continued from the forward terminal branch) is 1,
// default tolerance 1e-9.
VerificationReport verify_reverse(const Expr& f, const Curve& curve, const Params& params = {},
                                  const VerifyConfig& cfg = {});
// Every member of I(f)^n lies in the family of I(f^n), n in {0, 1, 2, 3}.
VerificationReport verify_power(const Expr& f, const Curve& curve, int n, const Params& params = {},
                                const VerifyConfig& cfg = {});

struct BranchSample {
  double t;
  Complex z;
  Complex logf;
};

// Branch values along the curve, for inspection.
std::vector<BranchSample> sample_branch(const Expr& f, const Curve& curve, const BranchPath& path,
                                        int count, const Params& params = {});

}  // namespace mulcalc
