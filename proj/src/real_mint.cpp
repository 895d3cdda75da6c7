#include "mulcalc/real_mint.hpp"

#include <cmath>
#include <string>

#include "mulcalc/errors.hpp"

namespace mulcalc {

PositiveField::PositiveField(Expr expr, Params params)
    : expr_(std::move(expr)), params_(std::move(params)) {
  params_.try_emplace("x", 0.0);
  params_.try_emplace("y", 0.0);
}

PositiveField PositiveField::parse(std::string_view source, Params params) {
  return PositiveField(mulcalc::parse(source), std::move(params));
}

double PositiveField::operator()(double x, double y) const {
  // Each call works on its own copy of the bindings so fields stay shareable
  // across threads.
  thread_local Params scratch;
  scratch = params_;
  scratch["x"] = x;
  scratch["y"] = y;
  Complex v = evaluate(expr_, Complex(x, y), scratch);
  if (std::abs(v.imag()) > 1e-12) {
    throw DomainError("field is not real at (" + std::to_string(x) + ", " + std::to_string(y) +
                      ")");
  }
  if (!(v.real() > 0.0)) {
    throw DomainError("field is not positive at (" + std::to_string(x) + ", " + std::to_string(y) +
                      ")");
  }
  return v.real();
}

void Rect::validate() const {
  if (!(x0 < x1) || !(y0 < y1)) throw InputError("rectangle needs x0 < x1 and y0 < y1");
}

Curve rect_boundary(const Rect& r) {
  r.validate();
  const Complex a(r.x0, r.y0), b(r.x1, r.y0), c(r.x1, r.y1), d(r.x0, r.y1);
  return Curve({LineSegment{a, b}, LineSegment{b, c}, LineSegment{c, d}, LineSegment{d, a}});
}

double line_integral(const RealField& h, const Curve& curve, Measure measure,
                     const QuadratureConfig& cfg) {
  cfg.validate();
  const auto& bp = curve.breakpoints();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    auto integrand = [&](double t) {
      CurvePoint p = curve.at(t, k);
      double w = 0.0;
      switch (measure) {
        case Measure::ds:
          w = std::abs(p.dz);
          break;
        case Measure::dx:
          w = p.dz.real();
          break;
        case Measure::dy:
          w = p.dz.imag();
          break;
      }
      return h(p.z.real(), p.z.imag()) * w;
    };
    total += integrate(integrand, bp[k], bp[k + 1], cfg).value;
  }
  return total;
}

double line_star(const PositiveField& g, const Curve& curve, Measure measure,
                 const QuadratureConfig& cfg) {
  return std::exp(
      line_integral([&](double x, double y) { return g.log(x, y); }, curve, measure, cfg));
}

double line_star_ds(const PositiveField& g, const Curve& curve, const QuadratureConfig& cfg) {
  return line_star(g, curve, Measure::ds, cfg);
}

double line_star_dx(const PositiveField& g, const Curve& curve, const QuadratureConfig& cfg) {
  return line_star(g, curve, Measure::dx, cfg);
}

double line_star_dy(const PositiveField& g, const Curve& curve, const QuadratureConfig& cfg) {
  return line_star(g, curve, Measure::dy, cfg);
}

namespace {

double tensor_rule(const RealField& h, const Rect& r, int panels, const GaussRule& rule) {
  const double wx = (r.x1 - r.x0) / panels, wy = (r.y1 - r.y0) / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double cx = r.x0 + (i + 0.5) * wx;
    for (int j = 0; j < panels; ++j) {
      const double cy = r.y0 + (j + 0.5) * wy;
      double cell = 0.0;
      for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
        const double x = cx + 0.5 * wx * rule.nodes[a];
        double column = 0.0;
        for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
          column += rule.weights[b] * h(x, cy + 0.5 * wy * rule.nodes[b]);
        }
        cell += rule.weights[a] * column;
      }
      total += 0.25 * wx * wy * cell;
    }
  }
  return total;
}

double partial(const RealField& lnf, double x, double y, bool along_x) {
  const double h = 1e-6 * std::max(1.0, std::abs(along_x ? x : y));
  if (along_x) return (lnf(x + h, y) - lnf(x - h, y)) / (2.0 * h);
  return (lnf(x, y + h) - lnf(x, y - h)) / (2.0 * h);
}

double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

double double_integral(const RealField& h, const Rect& region, const QuadratureConfig& cfg) {
  cfg.validate();
  region.validate();
  const GaussRule& rule = gauss_legendre(cfg.order);
  int panels = std::max(1, cfg.panels / 16);
  double previous = tensor_rule(h, region, panels, rule);
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    panels *= 2;
    double current = tensor_rule(h, region, panels, rule);
    if (std::abs(current - previous) <= cfg.tolerance * std::max(1.0, std::abs(current))) {
      return current;
    }
    previous = current;
  }
  throw ConvergenceError("double integral did not reach tolerance");
}

double double_star(const PositiveField& g, const Rect& region, const QuadratureConfig& cfg) {
  return std::exp(double_integral([&](double x, double y) { return g.log(x, y); }, region, cfg));
}

FtcLineReport verify_ftc_line(const PositiveField& F, const Curve& curve,
                              const QuadratureConfig& cfg) {
  RealField lnF = [&](double x, double y) { return F.log(x, y); };
  double log_lhs = line_integral([&](double x, double y) { return partial(lnF, x, y, true); },
                                 curve, Measure::dx, cfg) +
                   line_integral([&](double x, double y) { return partial(lnF, x, y, false); },
                                 curve, Measure::dy, cfg);
  const Complex a = curve.start(), b = curve.end();
  FtcLineReport r;
  r.lhs = std::exp(log_lhs);
  r.rhs = F(b.real(), b.imag()) / F(a.real(), a.imag());
  r.rel_err = relative(r.lhs, r.rhs);
  return r;
}

GreenReport verify_green(const PositiveField& f, const PositiveField& g, const Rect& region,
                         const QuadratureConfig& cfg) {
  Curve boundary = rect_boundary(region);
  RealField lnf = [&](double x, double y) { return f.log(x, y); };
  RealField lng = [&](double x, double y) { return g.log(x, y); };
  double log_boundary = line_integral(lnf, boundary, Measure::dx, cfg) +
                        line_integral(lng, boundary, Measure::dy, cfg);
  double log_area = double_integral(
      [&](double x, double y) { return partial(lng, x, y, true) - partial(lnf, x, y, false); },
      region, cfg);
  GreenReport r;
  r.boundary = std::exp(log_boundary);
  r.area = std::exp(log_area);
  r.rel_err = relative(r.boundary, r.area);
  return r;
}

}  // namespace mulcalc
