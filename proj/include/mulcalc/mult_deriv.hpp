#pragma once

#include <span>
#include <vector>

#include "mulcalc/expr.hpp"

namespace mulcalc {

// |f| at or below this counts as a zero of f.
inline constexpr double kZeroEps = 1e-12;

struct StarDerivativeResult {
  Complex value;  // exp(logderiv)
  Complex f_value;
  Complex logderiv;  // f'(z) / f(z)
};

// f'/f, simplified.
Expr log_derivative(const Expr& f);

// exp(f'/f) as an expression.
Expr star_derivative_expr(const Expr& f);

StarDerivativeResult star_derivative(const Expr& f, Complex z, const Params& params = {});

// exp of the (n-1)-th derivative of f'/f.
Complex star_derivative_n(const Expr& f, Complex z, int n, const Params& params = {});

struct LimitOracleResult {
  std::vector<Complex> approximations;  // one per step, principal value
  Complex extrapolated;                 // polynomial extrapolation to step 0
};

// (f(t+h)/f(t))^(1/h) read as exp(Log(f(t+h)/f(t)) / h) for each step h.
LimitOracleResult star_limit_oracle(const Expr& f, double t, std::span<const double> steps,
                                    const Params& params = {});

struct CRReport {
  Complex point;
  double step = 0.0;
  double residual_modulus = 0.0;   // |[ln R]_x - Theta_y|
  double residual_argument = 0.0;  // |[ln R]_y + Theta_x|
  double residual_classic = 0.0;   // max(|u_x - v_y|, |u_y + v_x|)
  double tolerance = 0.0;
  bool passes = false;
};

struct PolarCRReport {
  double radius = 0.0;
  double angle = 0.0;
  double step = 0.0;
  double residual_1 = 0.0;  // |Theta_theta - r [ln R]_r|
  double residual_2 = 0.0;  // |[ln R]_theta + r Theta_r|
  double tolerance = 0.0;
  bool passes = false;
};

inline constexpr double kDefaultCRTolerance = 1e-6;

// 1e-5 * max(1, |z|)
double default_cr_step(Complex z);

CRReport check_cr(const Expr& f, Complex z, double h, double tol = kDefaultCRTolerance,
                  const Params& params = {});

PolarCRReport check_cr_polar(const Expr& f, double r, double theta, double h,
                             double tol = kDefaultCRTolerance, const Params& params = {});

}  // namespace mulcalc
