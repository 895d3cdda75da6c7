#include "mulcalc/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "mulcalc/errors.hpp"
#include "mulcalc/mult_deriv.hpp"
#include "mulcalc/quadrature.hpp"

namespace mulcalc {

namespace {

const Complex kI(0.0, 1.0);

double real_value(const Expr& e, double t, const Params& params) {
  Complex v = evaluate(e, Complex(t, 0.0), params);
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real()))) {
    throw InputError("curve coordinate is not real at t = " + std::to_string(t));
  }
  return v.real();
}

// Maps the local parameter of an expr segment to its own t.
double expr_t(const ExprSegment& seg, double s) { return seg.t_from < seg.t_to ? s : -s; }

CurvePoint expr_point(const ExprSegment& seg, const std::vector<Expr>& derivs, double s) {
  const double t = expr_t(seg, s);
  const double sign = seg.t_from < seg.t_to ? 1.0 : -1.0;
  Complex z(real_value(seg.x, t, seg.params), real_value(seg.y, t, seg.params));
  Complex dz;
  if (!derivs.empty()) {
    dz = Complex(real_value(derivs[0], t, seg.params), real_value(derivs[1], t, seg.params));
  } else {
    const double h = std::abs(seg.t_to - seg.t_from) * 1e-7;
    Complex zp(real_value(seg.x, t + h, seg.params), real_value(seg.y, t + h, seg.params));
    Complex zm(real_value(seg.x, t - h, seg.params), real_value(seg.y, t - h, seg.params));
    dz = (zp - zm) / (2.0 * h);
  }
  return {s, z, sign * dz};
}

CurvePoint point_on(const Segment& seg, const std::vector<Expr>& derivs, double s) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    return {s, line->from + s * (line->to - line->from), line->to - line->from};
  }
  if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
    const bool positive = arc->theta_from < arc->theta_to;
    const double theta = positive ? s : -s;
    Complex e = std::polar(arc->radius, theta);
    return {s, arc->center + e, (positive ? kI : -kI) * e};
  }
  return expr_point(std::get<ExprSegment>(seg), derivs, s);
}

std::vector<Expr> expr_derivatives(const ExprSegment& seg) {
  if (!is_holomorphic_tree(seg.x) || !is_holomorphic_tree(seg.y)) return {};
  return {differentiate(seg.x), differentiate(seg.y)};
}

double join_scale(Complex z) { return kJoinTolerance * std::max(1.0, std::abs(z)); }

Segment reversed(const Segment& seg) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) return LineSegment{line->to, line->from};
  if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
    return ArcSegment{arc->center, arc->radius, arc->theta_to, arc->theta_from};
  }
  ExprSegment e = std::get<ExprSegment>(seg);
  std::swap(e.t_from, e.t_to);
  return e;
}

// Two segments covering [s0, s] and [s, s1] of the local domain.
std::pair<Segment, Segment> split_segment(const Segment& seg, double s, Complex at) {
  if (const auto* line = std::get_if<LineSegment>(&seg)) {
    return {LineSegment{line->from, at}, LineSegment{at, line->to}};
  }
  if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
    const double theta = arc->theta_from < arc->theta_to ? s : -s;
    return {ArcSegment{arc->center, arc->radius, arc->theta_from, theta},
            ArcSegment{arc->center, arc->radius, theta, arc->theta_to}};
  }
  const auto& e = std::get<ExprSegment>(seg);
  const double t = expr_t(e, s);
  ExprSegment a = e, b = e;
  a.t_to = t;
  b.t_from = t;
  return {a, b};
}

}  // namespace

std::pair<double, double> segment_domain(const Segment& seg) {
  if (std::holds_alternative<LineSegment>(seg)) return {0.0, 1.0};
  if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
    if (arc->theta_from < arc->theta_to) return {arc->theta_from, arc->theta_to};
    return {-arc->theta_from, -arc->theta_to};
  }
  const auto& e = std::get<ExprSegment>(seg);
  if (e.t_from < e.t_to) return {e.t_from, e.t_to};
  return {-e.t_from, -e.t_to};
}

// ---------------------------------------------------------------- Curve

Curve::Curve(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw InputError("curve has no segments");

  derivs_.resize(segments_.size());
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const Segment& seg = segments_[k];
    if (const auto* line = std::get_if<LineSegment>(&seg)) {
      if (line->from == line->to) throw InputError("zero-length line segment");
    } else if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
      if (!(arc->radius > 0.0) || !std::isfinite(arc->radius)) {
        throw InputError("arc radius must be positive");
      }
      if (!std::isfinite(arc->theta_from) || !std::isfinite(arc->theta_to) ||
          arc->theta_from == arc->theta_to) {
        throw InputError("arc needs two distinct finite angles");
      }
    } else {
      const auto& e = std::get<ExprSegment>(seg);
      if (!std::isfinite(e.t_from) || !std::isfinite(e.t_to) || e.t_from == e.t_to) {
        throw InputError("expr segment needs two distinct finite t bounds");
      }
      derivs_[k] = expr_derivatives(e);
    }
  }

  offsets_.reserve(segments_.size() + 1);
  local0_.reserve(segments_.size());
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    auto [s0, s1] = segment_domain(segments_[k]);
    local0_.push_back(s0);
    if (k == 0) offsets_.push_back(s0);
    offsets_.push_back(offsets_.back() + (s1 - s0));
  }

  for (std::size_t k = 0; k < segments_.size(); ++k) {
    auto [s0, s1] = segment_domain(segments_[k]);
    // C^1 consistency for expr segments: one-sided difference quotients must
    // agree with each other and with the symbolic derivative when present.
    if (std::holds_alternative<ExprSegment>(segments_[k])) {
      const double span = s1 - s0;
      const double h = span * 1e-6;
      auto z_at = [&](double s) { return point_on(segments_[k], derivs_[k], s).z; };
      for (int j = 1; j < 8; ++j) {
        const double s = s0 + span * j / 8.0;
        const Complex z0 = z_at(s);
        const Complex left = (z0 - z_at(s - h)) / h;
        const Complex right = (z_at(s + h) - z0) / h;
        const double scale = 1e-4 * std::max({1.0, std::abs(left), std::abs(right)});
        bool ok = std::isfinite(std::abs(left)) && std::isfinite(std::abs(right)) &&
                  std::abs(left - right) <= scale;
        if (ok && !derivs_[k].empty()) {
          const Complex dz = point_on(segments_[k], derivs_[k], s).dz;
          ok = std::isfinite(std::abs(dz)) && std::abs(0.5 * (left + right) - dz) <= scale;
        }
        if (!ok) throw InputError("expr segment is not continuously differentiable");
      }
    }
    if (k + 1 < segments_.size()) {
      Complex end = point_on(segments_[k], derivs_[k], s1).z;
      Complex next = point_on(segments_[k + 1], derivs_[k + 1], local0_[k + 1]).z;
      if (std::abs(end - next) > join_scale(end)) {
        throw InputError("discontinuous junction after segment " + std::to_string(k));
      }
    }
  }
  closed_ = std::abs(end() - start()) <= join_scale(start());
}

Complex Curve::start() const {
  return point_on(segments_.front(), derivs_.front(), local0_.front()).z;
}

Complex Curve::end() const {
  return point_on(segments_.back(), derivs_.back(), segment_domain(segments_.back()).second).z;
}

std::size_t Curve::segment_index(double t) const {
  auto it = std::upper_bound(offsets_.begin() + 1, offsets_.end() - 1, t);
  return static_cast<std::size_t>(it - (offsets_.begin() + 1));
}

CurvePoint Curve::at(double t) const { return at(t, segment_index(t)); }

CurvePoint Curve::at(double t, std::size_t k) const {
  if (k >= segments_.size()) throw std::out_of_range("Curve::at: segment index");
  CurvePoint p = point_on(segments_[k], derivs_[k], local0_[k] + (t - offsets_[k]));
  p.t = t;
  return p;
}

std::pair<Curve, Curve> Curve::split(double t) const {
  if (!(t > t_begin() && t < t_end())) throw InputError("split point must be interior");
  std::vector<Segment> first, second;
  std::size_t k = segment_index(t);
  const double span = offsets_[k + 1] - offsets_[k];
  const double local = t - offsets_[k];
  for (std::size_t j = 0; j < k; ++j) first.push_back(segments_[j]);
  if (local <= 1e-14 * span) {
    second.push_back(segments_[k]);
  } else {
    auto [a, b] = split_segment(segments_[k], local0_[k] + local, at(t).z);
    first.push_back(a);
    second.push_back(b);
  }
  for (std::size_t j = k + 1; j < segments_.size(); ++j) second.push_back(segments_[j]);
  return {Curve(std::move(first)), Curve(std::move(second))};
}

// ---------------------------------------------------------------- JSON

namespace {

Complex json_complex(const nlohmann::json& v, const char* field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InputError(std::string("malformed curve spec: '") + field + "' must be [re, im]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::pair<double, double> json_range(const nlohmann::json& v, const char* field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw InputError(std::string("malformed curve spec: '") + field + "' must be [from, to]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

const nlohmann::json& require(const nlohmann::json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw InputError(std::string("malformed curve spec: missing '") + field + "'");
  return *it;
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace

Curve curve_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw InputError("malformed curve spec: expected an object");
  const auto& segs = require(spec, "segments");
  if (!segs.is_array()) throw InputError("malformed curve spec: 'segments' must be an array");
  if (segs.empty()) throw InputError("curve has no segments");

  std::vector<Segment> out;
  for (const auto& s : segs) {
    if (!s.is_object()) throw InputError("malformed curve spec: segment must be an object");
    const auto& kind = require(s, "kind");
    if (!kind.is_string()) throw InputError("malformed curve spec: 'kind' must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "line") {
      out.push_back(LineSegment{json_complex(require(s, "from"), "from"),
                                json_complex(require(s, "to"), "to")});
    } else if (k == "arc") {
      const auto& r = require(s, "radius");
      if (!r.is_number()) throw InputError("malformed curve spec: 'radius' must be a number");
      auto [t0, t1] = json_range(require(s, "theta"), "theta");
      out.push_back(
          ArcSegment{json_complex(require(s, "center"), "center"), r.get<double>(), t0, t1});
    } else if (k == "expr") {
      const auto& x = require(s, "x");
      const auto& y = require(s, "y");
      if (!x.is_string() || !y.is_string()) {
        throw InputError("malformed curve spec: 'x' and 'y' must be expression strings");
      }
      auto [t0, t1] = json_range(require(s, "t"), "t");
      ExprSegment e{
          parse(x.get<std::string>(), {"t"}), parse(y.get<std::string>(), {"t"}), t0, t1, {}};
      if (auto p = s.find("params"); p != s.end()) {
        if (!p->is_object()) throw InputError("malformed curve spec: 'params' must be an object");
        for (const auto& [name, value] : p->items()) e.params[name] = json_complex(value, "params");
      }
      out.push_back(std::move(e));
    } else {
      throw InputError("malformed curve spec: unknown segment kind '" + k + "'");
    }
  }
  return Curve(std::move(out));
}

Curve parse_curve(std::string_view text) {
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed curve spec: ") + e.what());
  }
  return curve_from_json(spec);
}

nlohmann::json curve_to_json(const Curve& curve) {
  nlohmann::json segs = nlohmann::json::array();
  for (const Segment& seg : curve.segments()) {
    if (const auto* line = std::get_if<LineSegment>(&seg)) {
      segs.push_back(
          {{"kind", "line"}, {"from", complex_json(line->from)}, {"to", complex_json(line->to)}});
    } else if (const auto* arc = std::get_if<ArcSegment>(&seg)) {
      segs.push_back({{"kind", "arc"},
                      {"center", complex_json(arc->center)},
                      {"radius", arc->radius},
                      {"theta", {arc->theta_from, arc->theta_to}}});
    } else {
      const auto& e = std::get<ExprSegment>(seg);
      nlohmann::json j = {{"kind", "expr"},
                          {"x", render(e.x, "t")},
                          {"y", render(e.y, "t")},
                          {"t", {e.t_from, e.t_to}}};
      if (!e.params.empty()) {
        nlohmann::json p = nlohmann::json::object();
        for (const auto& [name, v] : e.params) p[name] = complex_json(v);
        j["params"] = p;
      }
      segs.push_back(std::move(j));
    }
  }
  return {{"segments", segs}};
}

// ---------------------------------------------------------------- operations

std::vector<CurvePoint> sample(const Curve& curve, int points_per_segment) {
  if (points_per_segment < 2) throw InputError("sample needs at least 2 points per segment");
  const auto& bp = curve.breakpoints();
  std::vector<CurvePoint> out;
  out.reserve(curve.segments().size() * points_per_segment);
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    for (int j = 0; j < points_per_segment; ++j) {
      const double t = bp[k] + (bp[k + 1] - bp[k]) * j / (points_per_segment - 1);
      out.push_back(curve.at(t, k));
    }
  }
  return out;
}

Curve reverse(const Curve& curve) {
  std::vector<Segment> out;
  out.reserve(curve.segments().size());
  for (auto it = curve.segments().rbegin(); it != curve.segments().rend(); ++it) {
    out.push_back(reversed(*it));
  }
  return Curve(std::move(out));
}

Curve concat(const Curve& first, const Curve& second) {
  if (std::abs(first.end() - second.start()) > join_scale(first.end())) {
    throw InputError("concat: end of first curve does not meet start of second");
  }
  std::vector<Segment> out = first.segments();
  out.insert(out.end(), second.segments().begin(), second.segments().end());
  return Curve(std::move(out));
}

double curve_length(const Curve& curve) {
  const auto& bp = curve.breakpoints();
  QuadratureConfig cfg;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    total +=
        integrate([&](double t) { return std::abs(curve.at(t).dz); }, bp[k], bp[k + 1], cfg).value;
  }
  return total;
}

// ---------------------------------------------------------------- partition

double arg_variation(const Expr& f, const Curve& curve, const Params& params, double lo, double hi,
                     int samples) {
  double total = 0.0;
  Complex prev;
  for (int j = 0; j <= samples; ++j) {
    const double t = lo + (hi - lo) * j / samples;
    Complex v = evaluate(f, curve.at(t).z, params);
    if (std::abs(v) <= kZeroEps) {
      throw DomainError("zero on curve at t = " + std::to_string(t));
    }
    if (j > 0) total += std::abs(principal_log(v / prev).imag());
    prev = v;
  }
  return total;
}

namespace {

constexpr int kProbeSamples = 32;

// Largest |d/dt arg f(z(t))| over the probes, when f has a symbolic derivative.
double max_phase_rate(const std::optional<Expr>& log_deriv, const Curve& curve,
                      const Params& params, double lo, double hi, int samples) {
  if (!log_deriv) return 0.0;
  double rate = 0.0;
  for (int j = 0; j <= samples; ++j) {
    CurvePoint p = curve.at(lo + (hi - lo) * j / samples);
    rate = std::max(rate, std::abs((evaluate(*log_deriv, p.z, params) * p.dz).imag()));
  }
  return rate;
}

void bisect(const Expr& f, const std::optional<Expr>& log_deriv, const Curve& curve,
            const Params& params, double lo, double hi, int depth, int max_depth,
            HalfPlanePartition& out) {
  constexpr double kLimit = std::numbers::pi / 2;
  const int dense = 2 * kProbeSamples;
  // Accept only when a twice-denser probe agrees and the probe spacing
  // resolves the local rotation rate, which guards against aliasing.
  if (arg_variation(f, curve, params, lo, hi, kProbeSamples) < kLimit &&
      arg_variation(f, curve, params, lo, hi, dense) < kLimit &&
      max_phase_rate(log_deriv, curve, params, lo, hi, dense) * (hi - lo) / dense < kLimit / 2) {
    Complex w = evaluate(f, curve.at(0.5 * (lo + hi)).z, params);
    out.cuts.push_back(hi);
    out.witnesses.push_back(w / std::abs(w));
    return;
  }
  if (depth >= max_depth) {
    throw ConvergenceError(
        "cannot certify half-plane pieces (f oscillates too fast or nearly "
        "vanishes near t = " +
        std::to_string(lo) + ")");
  }
  const double mid = 0.5 * (lo + hi);
  bisect(f, log_deriv, curve, params, lo, mid, depth + 1, max_depth, out);
  bisect(f, log_deriv, curve, params, mid, hi, depth + 1, max_depth, out);
}

}  // namespace

HalfPlanePartition half_plane_partition(const Expr& f, const Curve& curve, const Params& params,
                                        int max_depth) {
  if (max_depth < 0) throw InputError("max_depth must be nonnegative");
  HalfPlanePartition out;
  std::optional<Expr> log_deriv;
  try {
    log_deriv = simplify(differentiate(f) / f);
  } catch (const NotHolomorphicError&) {
  }
  out.cuts.push_back(curve.t_begin());
  bisect(f, log_deriv, curve, params, curve.t_begin(), curve.t_end(), 0, max_depth, out);
  return out;
}

}  // namespace mulcalc
