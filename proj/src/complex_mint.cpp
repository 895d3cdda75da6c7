#include "mulcalc/complex_mint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mulcalc/errors.hpp"
#include "mulcalc/mult_deriv.hpp"

namespace mulcalc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kTwoPiI(0.0, kTwoPi);

Complex f_on_curve(const Expr& f, Complex z, const Params& params) {
  Complex v = evaluate(f, z, params);
  if (std::abs(v) <= kZeroEps) throw DomainError("zero on curve");
  return v;
}

std::size_t segment_of(const Curve& curve, double t) {
  const auto& bp = curve.breakpoints();
  auto it = std::upper_bound(bp.begin(), bp.end(), t);
  std::size_t k = it == bp.begin() ? 0 : static_cast<std::size_t>(it - bp.begin()) - 1;
  return std::min(k, curve.segments().size() - 1);
}

std::vector<double> branch_nodes(const HalfPlanePartition& part, const Curve& curve,
                                 int extra_splits) {
  std::vector<double> nodes = part.cuts;
  nodes.insert(nodes.end(), curve.breakpoints().begin(), curve.breakpoints().end());
  std::sort(nodes.begin(), nodes.end());
  const double eps = 1e-14 * std::max(1.0, curve.t_end() - curve.t_begin());
  std::vector<double> merged;
  for (double t : nodes)
    if (merged.empty() || t - merged.back() > eps) merged.push_back(t);
  merged.back() = curve.t_end();

  for (int s = 0; s < extra_splits; ++s) {
    std::vector<double> finer;
    for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
      finer.push_back(merged[k]);
      finer.push_back(0.5 * (merged[k] + merged[k + 1]));
    }
    finer.push_back(merged.back());
    merged = std::move(finer);
  }
  return merged;
}

double rel_error(Complex lhs, Complex rhs) {
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

Complex ipow(Complex w, int n) {
  Complex r = 1.0;
  for (int k = 0; k < n; ++k) r *= w;
  return r;
}

VerificationReport finish(std::string name, Complex lhs, Complex rhs, double tol,
                          std::optional<int> branch) {
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = rel_error(lhs, rhs);
  r.tolerance = tol;
  r.passed = r.rel_err <= tol;
  if (r.passed) r.matched_branch = branch;
  return r;
}

// 0, 1, -1, 2, -2, ... so ties go to the smallest |n|.
std::vector<int> search_order(int range) {
  std::vector<int> out{0};
  for (int n = 1; n <= range; ++n) {
    out.push_back(n);
    out.push_back(-n);
  }
  return out;
}

// Best k in [-range, range] for  target = W^k * product.
std::pair<int, double> best_winding(Complex target, Complex product, Complex delta_z, int range) {
  int best = 0;
  double err = INFINITY;
  for (int k : search_order(range)) {
    double e = rel_error(product * std::exp(kTwoPiI * static_cast<double>(k) * delta_z), target);
    if (e < err) {
      err = e;
      best = k;
    }
  }
  return {best, err};
}

VerificationReport product_like(const char* name, const Expr& f, const Expr& g, bool divide,
                                const Curve& curve, const Params& params, const VerifyConfig& cfg) {
  const double tol = cfg.tolerance.value_or(1e-8);
  Expr fg = divide ? f / g : f * g;
  auto Ifg = complex_star_integral(fg, curve, params, cfg.quad);
  auto If = complex_star_integral(f, curve, params, cfg.quad);
  auto Ig = complex_star_integral(g, curve, params, cfg.quad);
  Complex rhs0 = divide ? If.base / Ig.base : If.base * Ig.base;
  auto [k, err] = best_winding(Ifg.base, rhs0, Ifg.delta_z, cfg.branch_range);
  Complex rhs = rhs0 * std::exp(kTwoPiI * static_cast<double>(k) * Ifg.delta_z);
  (void)err;
  return finish(name, Ifg.base, rhs, tol, k);
}

}  // namespace

std::size_t BranchPath::piece_of(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  return std::min(k, times.size() - 2);
}

Complex BranchPath::log_at(double t, Complex f_at_t) const {
  std::size_t k = piece_of(t);
  return logf[k] + principal_log(f_at_t / values[k]);
}

BranchPath track_log(const Expr& f, const Curve& curve, const Params& params,
                     const BranchOptions& options) {
  if (options.extra_splits < 0 || options.extra_splits > 16)
    throw InputError("extra_splits must be in [0, 16]");
  HalfPlanePartition part = half_plane_partition(f, curve, params, options.max_depth);

  BranchPath path;
  path.times = branch_nodes(part, curve, options.extra_splits);
  path.values.reserve(path.times.size());
  for (double t : path.times) path.values.push_back(f_on_curve(f, curve.at(t).z, params));

  path.anchor = options.anchor.value_or(principal_log(path.values.front()) +
                                        kTwoPiI * static_cast<double>(options.anchor_offset));
  path.logf.push_back(path.anchor);
  for (std::size_t k = 0; k + 1 < path.values.size(); ++k)
    path.logf.push_back(path.logf[k] + principal_log(path.values[k + 1] / path.values[k]));
  return path;
}

Complex MultiValueIntegral::value(int n) const {
  Complex v = base;
  for (int k = 0; k < n; ++k) v *= winding;
  for (int k = 0; k > n; --k) v /= winding;
  return v;
}

MultiValueIntegral complex_star_integral(const Expr& f, const Curve& curve, const Params& params,
                                         const QuadratureConfig& cfg,
                                         const BranchOptions& options) {
  cfg.validate();
  MultiValueIntegral out;
  out.path = track_log(f, curve, params, options);
  const BranchPath& path = out.path;

  Complex total = 0.0;
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    const double lo = path.times[k], hi = path.times[k + 1];
    const std::size_t seg = segment_of(curve, 0.5 * (lo + hi));
    auto integrand = [&](double t) {
      CurvePoint p = curve.at(t, seg);
      Complex step = principal_log(f_on_curve(f, p.z, params) / path.values[k]);
      if (std::abs(step.imag()) > 0.9 * std::numbers::pi)
        throw ConvergenceError("branch continuation lost track between partition nodes");
      return (path.logf[k] + step) * p.dz;
    };
    auto piece = integrate(integrand, lo, hi, cfg);
    total += piece.value;
    out.max_rounds = std::max(out.max_rounds, piece.rounds);
  }

  out.log_base = total;
  out.base = std::exp(total);
  out.pieces = path.times.size() - 1;
  out.delta_z = curve.closed() ? Complex(0.0) : curve.end() - curve.start();
  const double nearest = std::round(out.delta_z.real());
  out.single_valued = std::abs(out.delta_z - Complex(nearest, 0.0)) <= 1e-9;
  out.winding = out.single_valued ? Complex(1.0) : std::exp(kTwoPiI * out.delta_z);
  out.distinct_count = distinct_value_count(out.delta_z);
  return out;
}

std::optional<int> distinct_value_count(Complex delta_z) {
  if (std::abs(delta_z.imag()) > 1e-9) return std::nullopt;
  const double x = delta_z.real();
  // The smallest matching denominator is the reduced one.
  for (int q = 1; q <= 64; ++q) {
    const double p = std::round(x * q);
    if (std::abs(x - p / q) <= 1e-9) return q;
  }
  return std::nullopt;
}

VerificationReport verify_ftc_complex(const Expr& f, const Curve& curve, const Params& params,
                                      const VerifyConfig& cfg) {
  const double tol = cfg.tolerance.value_or(1e-8);
  auto I = complex_star_integral(star_derivative_expr(f), curve, params, cfg.quad);
  Complex target = f_on_curve(f, curve.end(), params) / f_on_curve(f, curve.start(), params);
  int best = 0;
  double err = INFINITY;
  for (int n : search_order(cfg.branch_range)) {
    double e = rel_error(I.value(n), target);
    if (e < err) {
      err = e;
      best = n;
    }
  }
  return finish("ftc", I.value(best), target, tol, best);
}

VerificationReport verify_closed(const Expr& f, const Curve& curve, const Params& params,
                                 const VerifyConfig& cfg) {
  if (!curve.closed()) throw InputError("closed-curve check needs a closed curve");
  const double tol = cfg.tolerance.value_or(1e-8);
  auto I = complex_star_integral(star_derivative_expr(f), curve, params, cfg.quad);
  auto r = finish("closed", I.base, 1.0, tol, 0);
  if (I.winding != Complex(1.0)) {
    r.passed = false;
    r.matched_branch.reset();
  }
  return r;
}

VerificationReport verify_concat(const Expr& f, const Curve& curve, double split_t,
                                 const Params& params, const VerifyConfig& cfg) {
  const double tol = cfg.tolerance.value_or(1e-8);
  auto [c1, c2] = curve.split(split_t);
  auto whole = complex_star_integral(f, curve, params, cfg.quad);
  auto I1 = complex_star_integral(f, c1, params, cfg.quad);
  BranchOptions cont;
  cont.anchor = I1.path.logf.back();
  auto I2 = complex_star_integral(f, c2, params, cfg.quad, cont);

  VerificationReport worst;
  for (int n = -2; n <= 2; ++n) {
    auto r = finish("concat", whole.value(n), I1.value(n) * I2.value(n), tol, n);
    if (n == -2 || r.rel_err > worst.rel_err) worst = r;
  }
  if (worst.passed) worst.matched_branch = 0;
  return worst;
}

VerificationReport verify_product(const Expr& f, const Expr& g, const Curve& curve,
                                  const Params& params, const VerifyConfig& cfg) {
  return product_like("product", f, g, false, curve, params, cfg);
}

VerificationReport verify_division(const Expr& f, const Expr& g, const Curve& curve,
                                   const Params& params, const VerifyConfig& cfg) {
  return product_like("division", f, g, true, curve, params, cfg);
}

VerificationReport verify_reverse(const Expr& f, const Curve& curve, const Params& params,
                                  const VerifyConfig& cfg) {
  const double tol = cfg.tolerance.value_or(1e-9);
  auto I = complex_star_integral(f, curve, params, cfg.quad);
  BranchOptions cont;
  cont.anchor = I.path.logf.back();
  auto R = complex_star_integral(f, reverse(curve), params, cfg.quad, cont);

  VerificationReport worst;
  for (int n = -2; n <= 2; ++n) {
    auto r = finish("reverse", I.value(n) * R.value(n), 1.0, tol, n);
    if (n == -2 || r.rel_err > worst.rel_err) worst = r;
  }
  if (worst.passed) worst.matched_branch = 0;
  return worst;
}

VerificationReport verify_power(const Expr& f, const Curve& curve, int n, const Params& params,
                                const VerifyConfig& cfg) {
  if (n < 0 || n > 3) throw InputError("power check supports n in {0, 1, 2, 3}");
  const double tol = cfg.tolerance.value_or(1e-8);
  auto I = complex_star_integral(f, curve, params, cfg.quad);
  auto In = complex_star_integral(Expr::pow(f, n), curve, params, cfg.quad);
  const int range = 5 * n + 5;

  VerificationReport worst;
  for (int m = -2; m <= 2; ++m) {
    Complex lhs = ipow(I.value(m), n);
    auto [k, err] = best_winding(lhs, In.base, In.delta_z, range);
    (void)err;
    auto r = finish("power", lhs, In.value(k), tol, k);
    if (m == -2 || r.rel_err > worst.rel_err) worst = r;
  }
  return worst;
}

std::vector<BranchSample> sample_branch(const Expr& f, const Curve& curve, const BranchPath& path,
                                        int count, const Params& params) {
  if (count < 2) throw InputError("need at least two samples");
  std::vector<BranchSample> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j) {
    const double t = curve.t_begin() + (curve.t_end() - curve.t_begin()) * j / (count - 1);
    Complex z = curve.at(t).z;
    out.push_back({t, z, path.log_at(t, f_on_curve(f, z, params))});
  }
  return out;
}

}  // namespace mulcalc
