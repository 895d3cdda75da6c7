#pragma once

// Piecewise-smooth parametric curves.
//
// Every segment has a local parameter running over an increasing interval:
//   line  : s in [0, 1],             z = from + s (to - from)
//   arc   : theta_from < theta_to -> s = theta
//           theta_from > theta_to -> s = -theta (negative orientation)
//   expr  : t_from < t_to -> s = t; t_from > t_to -> s = -t (reversed)
// The curve parameter concatenates the local intervals, starting at the
// first segment's local start. For a single segment the two coincide.

#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mulcalc/expr.hpp"

namespace mulcalc {

struct LineSegment {
  Complex from;
  Complex to;
  friend bool operator==(const LineSegment&, const LineSegment&) = default;
};

struct ArcSegment {
  Complex center;
  double radius = 1.0;
  double theta_from = 0.0;
  double theta_to = 0.0;
  friend bool operator==(const ArcSegment&, const ArcSegment&) = default;
};

// x(t), y(t) are real-valued expressions in the variable `t`.
struct ExprSegment {
  Expr x;
  Expr y;
  double t_from = 0.0;
  double t_to = 1.0;
  Params params;
  friend bool operator==(const ExprSegment&, const ExprSegment&) = default;
};

using Segment = std::variant<LineSegment, ArcSegment, ExprSegment>;

struct CurvePoint {
  double t;
  Complex z;
  Complex dz;  // derivative with respect to the curve parameter
};

// Junction and closure tolerance, scaled by max(1, |z|).
inline constexpr double kJoinTolerance = 1e-12;

class Curve {
 public:
  explicit Curve(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double t_begin() const noexcept { return offsets_.front(); }
  double t_end() const noexcept { return offsets_.back(); }
  Complex start() const;
  Complex end() const;
  bool closed() const noexcept { return closed_; }

  CurvePoint at(double t) const;
  // Evaluates with segment k's formula; t may be either end of that segment.
  CurvePoint at(double t, std::size_t k) const;
  // Segment junctions in curve parameter, including both ends.
  const std::vector<double>& breakpoints() const noexcept { return offsets_; }

  std::pair<Curve, Curve> split(double t) const;

  friend bool operator==(const Curve& a, const Curve& b) { return a.segments_ == b.segments_; }

 private:
  std::size_t segment_index(double t) const;

  std::vector<Segment> segments_;
  std::vector<double> offsets_;  // size segments + 1
  std::vector<double> local0_;   // local start of each segment
  // x'(t), y'(t) per segment; empty for line/arc or when x, y are not
  // differentiable symbolically (central differences are used instead).
  std::vector<std::vector<Expr>> derivs_;
  bool closed_ = false;
};

// Local parameter interval [s0, s1] of a segment.
std::pair<double, double> segment_domain(const Segment& seg);

Curve curve_from_json(const nlohmann::json& spec);
Curve parse_curve(std::string_view text);
nlohmann::json curve_to_json(const Curve& curve);

std::vector<CurvePoint> sample(const Curve& curve, int points_per_segment);
Curve reverse(const Curve& curve);
Curve concat(const Curve& first, const Curve& second);

// Arc length by composite Gauss-Legendre on each segment.
double curve_length(const Curve& curve);

struct HalfPlanePartition {
  std::vector<double> cuts;        // t_0 = a < t_1 < ... < t_m = b
  std::vector<Complex> witnesses;  // unit directions, one per piece
  std::size_t pieces() const noexcept { return witnesses.size(); }
};

// Bisects the parameter interval until the unwrapped argument of f along each
// piece has total variation below pi/2 (probed on a dense sample).
HalfPlanePartition half_plane_partition(const Expr& f, const Curve& curve,
                                        const Params& params = {}, int max_depth = 40);

// Total variation of the unwrapped argument of f(z(t)) over `samples` evenly
// spaced probes of [lo, hi]. Throws DomainError on a zero of f.
double arg_variation(const Expr& f, const Curve& curve, const Params& params, double lo, double hi,
                     int samples);

}  // namespace mulcalc
