#include "mulcalc/mult_deriv.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mulcalc/errors.hpp"

namespace mulcalc {

namespace {

Complex checked_value(const Expr& f, Complex z, const Params& params, const char* what) {
  Complex v = evaluate(f, z, params);
  if (std::abs(v) <= kZeroEps) throw DomainError(what);
  return v;
}

// Principal argument of a/b; the ratio keeps the stencil on one local branch.
double arg_ratio(Complex a, Complex b) { return principal_log(a / b).imag(); }

}  // namespace

Expr log_derivative(const Expr& f) { return simplify(differentiate(f) / f); }

Expr star_derivative_expr(const Expr& f) { return exp(log_derivative(f)); }

StarDerivativeResult star_derivative(const Expr& f, Complex z, const Params& params) {
  Expr df = differentiate(f);
  Complex fz = checked_value(f, z, params, "*derivative undefined at zero of f");
  Complex ld = evaluate(df, z, params) / fz;
  return {std::exp(ld), fz, ld};
}

Complex star_derivative_n(const Expr& f, Complex z, int n, const Params& params) {
  if (n < 1) throw InputError("*derivative order must be at least 1");
  Expr g = log_derivative(f);
  checked_value(f, z, params, "*derivative undefined at zero of f");
  for (int k = 1; k < n; ++k) g = differentiate(g);
  return std::exp(evaluate(g, z, params));
}

LimitOracleResult star_limit_oracle(const Expr& f, double t, std::span<const double> steps,
                                    const Params& params) {
  if (steps.empty()) throw InputError("limit oracle needs at least one step");
  Complex ft = checked_value(f, Complex(t, 0.0), params, "*derivative undefined at zero of f");

  LimitOracleResult out;
  out.approximations.reserve(steps.size());
  for (double h : steps) {
    if (h == 0.0 || !std::isfinite(h)) throw InputError("limit oracle steps must be nonzero");
    Complex ratio = evaluate(f, Complex(t + h, 0.0), params) / ft;
    if (std::abs(ratio) <= kZeroEps) throw DomainError("f vanishes at t + h");
    Complex lg = principal_log(ratio);
    if (std::abs(lg.imag()) >= std::numbers::pi / 2) {
      throw DomainError("f(t+h)/f(t) leaves the right half plane at h = " + std::to_string(h) +
                        "; use a smaller step");
    }
    out.approximations.push_back(std::exp(lg / h));
  }

  // Neville's scheme evaluated at h = 0.
  std::vector<Complex> p = out.approximations;
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      double hi = steps[i], hj = steps[i + level];
      if (hi == hj) throw InputError("limit oracle steps must be distinct");
      p[i] = (hi * p[i + 1] - hj * p[i]) / (hi - hj);
    }
  }
  out.extrapolated = p[0];
  return out;
}

double default_cr_step(Complex z) { return 1e-5 * std::max(1.0, std::abs(z)); }

CRReport check_cr(const Expr& f, Complex z, double h, double tol, const Params& params) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const char* msg = "f vanishes on the finite-difference stencil";
  const Complex ih(0.0, h);
  Complex f0 = checked_value(f, z, params, msg);
  Complex fxp = checked_value(f, z + h, params, msg);
  Complex fxm = checked_value(f, z - h, params, msg);
  Complex fyp = checked_value(f, z + ih, params, msg);
  Complex fym = checked_value(f, z - ih, params, msg);

  const double inv = 1.0 / (2.0 * h);
  double lnr_x = (std::log(std::abs(fxp)) - std::log(std::abs(fxm))) * inv;
  double lnr_y = (std::log(std::abs(fyp)) - std::log(std::abs(fym))) * inv;
  double th_x = (arg_ratio(fxp, f0) - arg_ratio(fxm, f0)) * inv;
  double th_y = (arg_ratio(fyp, f0) - arg_ratio(fym, f0)) * inv;

  Complex dx = (fxp - fxm) * inv;  // u_x + i v_x
  Complex dy = (fyp - fym) * inv;  // u_y + i v_y

  CRReport r;
  r.point = z;
  r.step = h;
  r.residual_modulus = std::abs(lnr_x - th_y);
  r.residual_argument = std::abs(lnr_y + th_x);
  r.residual_classic = std::max(std::abs(dx.real() - dy.imag()), std::abs(dy.real() + dx.imag()));
  r.tolerance = tol;
  r.passes = std::max(r.residual_modulus, r.residual_argument) <= tol;
  return r;
}

PolarCRReport check_cr_polar(const Expr& f, double r, double theta, double h, double tol,
                             const Params& params) {
  if (!(h > 0.0) || !(r > h)) throw InputError("polar check needs r > h > 0");
  const char* msg = "f vanishes on the finite-difference stencil";
  auto at = [&](double rr, double tt) { return checked_value(f, std::polar(rr, tt), params, msg); };
  Complex f0 = at(r, theta);
  Complex frp = at(r + h, theta), frm = at(r - h, theta);
  Complex ftp = at(r, theta + h), ftm = at(r, theta - h);

  const double inv = 1.0 / (2.0 * h);
  double lnr_r = (std::log(std::abs(frp)) - std::log(std::abs(frm))) * inv;
  double lnr_t = (std::log(std::abs(ftp)) - std::log(std::abs(ftm))) * inv;
  double th_r = (arg_ratio(frp, f0) - arg_ratio(frm, f0)) * inv;
  double th_t = (arg_ratio(ftp, f0) - arg_ratio(ftm, f0)) * inv;

  PolarCRReport rep;
  rep.radius = r;
  rep.angle = theta;
  rep.step = h;
  rep.residual_1 = std::abs(th_t - r * lnr_r);
  rep.residual_2 = std::abs(lnr_t + r * th_r);
  rep.tolerance = tol;
  rep.passes = std::max(rep.residual_1, rep.residual_2) <= tol;
  return rep;
}

}  // namespace mulcalc
