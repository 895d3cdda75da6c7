#pragma once

// Fixed-seed generators and independent oracles shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mulcalc/curves.hpp"
#include "mulcalc/expr.hpp"
#include "mulcalc/real_mint.hpp"

namespace testing_support {

using mulcalc::Complex;
using mulcalc::Expr;
using mulcalc::Op;
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Complex uniform_disk(Rng& rng, double radius) {
  double r = radius * std::sqrt(uniform(rng, 0.0, 1.0));
  return std::polar(r, uniform(rng, -kPi, kPi));
}

inline double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Random trees whose literals are nonnegative reals or i, so that rendering
// and parsing must reproduce them exactly.
inline Expr random_expr(Rng& rng, int depth, bool holomorphic) {
  if (depth == 0 || uniform_int(rng, 0, 3) == 0) {
    switch (uniform_int(rng, 0, 4)) {
      case 0:
      case 1:
        return Expr::var();
      case 2:
        return Expr::lit(static_cast<double>(uniform_int(rng, 0, 9)) / 4.0);
      case 3:
        return Expr::lit(Complex(0.0, 1.0));
      default:
        return Expr::param(uniform_int(rng, 0, 1) ? "a" : "b");
    }
  }
  const int pick = uniform_int(rng, 0, holomorphic ? 9 : 13);
  auto sub = [&] { return random_expr(rng, depth - 1, holomorphic); };
  switch (pick) {
    case 0:
      return sub() + sub();
    case 1:
      return sub() - sub();
    case 2:
      return sub() * sub();
    case 3:
      return sub() / sub();
    case 4:
      return -sub();
    case 5:
      return mulcalc::exp(sub());
    case 6:
      return mulcalc::log(sub());
    case 7:
      return Expr::unary(Op::Sin, sub());
    case 8:
      return Expr::unary(Op::Cos, sub());
    case 9:
      return Expr::pow(sub(), uniform_int(rng, -3, 4));
    case 10:
      return Expr::unary(Op::Conj, sub());
    case 11:
      return Expr::unary(Op::Abs, sub());
    case 12:
      return Expr::unary(Op::Re, sub());
    default:
      return Expr::unary(Op::Im, sub());
  }
}

// Entire functions with moderate growth on |z| <= 2: sums/products of
// exp, sin, cos, polynomials.
inline Expr random_entire(Rng& rng, int depth) {
  if (depth == 0 || uniform_int(rng, 0, 3) == 0) {
    if (uniform_int(rng, 0, 2) == 0)
      return Expr::lit(Complex(uniform(rng, 0.5, 2.0), uniform(rng, -1.0, 1.0)));
    return Expr::var();
  }
  auto sub = [&] { return random_entire(rng, depth - 1); };
  switch (uniform_int(rng, 0, 5)) {
    case 0:
      return sub() + sub();
    case 1:
      return sub() * sub();
    case 2:
      return mulcalc::exp(Expr::lit(uniform(rng, 0.2, 0.6)) * sub());
    case 3:
      return Expr::unary(Op::Sin, sub());
    case 4:
      return Expr::unary(Op::Cos, sub());
    default:
      return Expr::pow(sub(), uniform_int(rng, 2, 3));
  }
}

// Central difference of f along direction d with step h.
inline Complex central_difference(const Expr& f, Complex z, Complex d, double h,
                                  const mulcalc::Params& p = {}) {
  return (mulcalc::evaluate(f, z + h * d, p) - mulcalc::evaluate(f, z - h * d, p)) / (2.0 * h * d);
}

inline double distance_to_segment(Complex p, Complex a, Complex b) {
  Complex ab = b - a;
  double s = std::clamp(std::real((p - a) * std::conj(ab)) / std::norm(ab), 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

// Polyline through `vertices`; when closed the last vertex joins the first.
inline mulcalc::Curve polyline(const std::vector<Complex>& v, bool closed) {
  std::vector<mulcalc::Segment> segs;
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    segs.push_back(mulcalc::LineSegment{v[k], v[k + 1]});
  if (closed) segs.push_back(mulcalc::LineSegment{v.back(), v.front()});
  return mulcalc::Curve(std::move(segs));
}

// Vertices of a polyline whose segments all keep distance >= clearance from 0.
inline std::vector<Complex> random_vertices(Rng& rng, int segments, bool closed, double radius,
                                            double clearance) {
  for (;;) {
    std::vector<Complex> v;
    for (int k = 0; k < segments + (closed ? 0 : 1); ++k) v.push_back(uniform_disk(rng, radius));
    bool ok = true;
    const std::size_t edges = closed ? v.size() : v.size() - 1;
    for (std::size_t k = 0; k < edges && ok; ++k) {
      Complex a = v[k], b = v[(k + 1) % v.size()];
      ok = std::abs(b - a) > 0.05 && distance_to_segment(0.0, a, b) >= clearance;
    }
    if (ok) return v;
  }
}

// exp( sum L(f(zeta_k)) (z_{k+1} - z_k) ) over N uniform steps of a polyline,
// zeta_k the step midpoints and L continued by cumulative unwrapping from
// the principal Log f(z(a)).
inline Complex integral_product(const Expr& f, const std::vector<Complex>& v, int steps_per_edge,
                                const mulcalc::Params& p = {}) {
  Complex f_prev = mulcalc::evaluate(f, v.front(), p);
  Complex L = std::log(f_prev);
  Complex sum = 0.0;
  for (std::size_t e = 0; e + 1 < v.size(); ++e) {
    const Complex a = v[e], b = v[e + 1], dz = (b - a) / static_cast<double>(steps_per_edge);
    for (int k = 0; k < steps_per_edge; ++k) {
      const Complex zeta = a + (k + 0.5) * dz;
      Complex fz = mulcalc::evaluate(f, zeta, p);
      L += std::log(fz / f_prev);
      f_prev = fz;
      sum += L * dz;
    }
  }
  return std::exp(sum);
}

// Random nonvanishing holomorphic f on |z| <= 1.5: exp(entire) or products of
// shifted linear factors with roots outside the disk.
inline Expr random_nonvanishing(Rng& rng) {
  if (uniform_int(rng, 0, 1) == 0) return mulcalc::exp(Expr::lit(0.5) * random_entire(rng, 2));
  Expr f = Expr::lit(Complex(uniform(rng, 0.5, 2.0), uniform(rng, -1.0, 1.0)));
  const int factors = uniform_int(rng, 1, 3);
  for (int k = 0; k < factors; ++k) {
    Complex root = std::polar(uniform(rng, 2.0, 3.0), uniform(rng, -kPi, kPi));
    f = f * (Expr::var() - Expr::lit(root));
  }
  return f;
}

// Random curve of 2 segments (line or arc) inside |z| <= 2.
inline mulcalc::Curve random_curve(Rng& rng) {
  std::vector<mulcalc::Segment> segs;
  Complex at = uniform_disk(rng, 1.0);
  for (int k = 0; k < 2; ++k) {
    if (uniform_int(rng, 0, 1)) {
      Complex next = at + uniform_disk(rng, 0.8);
      segs.push_back(mulcalc::LineSegment{at, next});
      at = next;
    } else {
      const double r = uniform(rng, 0.3, 0.8), th = uniform(rng, -kPi, kPi);
      const double span = uniform(rng, 0.5, 2.5) * (uniform_int(rng, 0, 1) ? 1 : -1);
      Complex center = at - std::polar(r, th);
      segs.push_back(mulcalc::ArcSegment{center, r, th, th + span});
      at = center + std::polar(r, th + span);
    }
  }
  return mulcalc::Curve(std::move(segs));
}

// Parameters are suffixed so two fields can share one binding map.
inline mulcalc::PositiveField random_field(Rng& rng, const std::string& tag = "") {
  const std::string a = "a" + tag, b = "b" + tag, c = "c" + tag;
  mulcalc::Params p{
      {a, uniform(rng, -1.0, 1.0)}, {b, uniform(rng, -1.0, 1.0)}, {c, uniform(rng, -1.0, 1.0)}};
  std::string text;
  switch (uniform_int(rng, 0, 3)) {
    case 0:
      text = "exp(" + a + "*x+" + b + "*y+" + c + "*x*y)";
      break;
    case 1:
      text = "2+" + a + "*sin(x)+" + b + "*cos(y)";
      break;
    case 2:
      text = "1+x^2+(" + b + "*y)^2+" + c + "^2";
      break;
    default:
      text = "abs(exp(z*(" + a + "+" + b + "*i)))*(3+" + c + "*sin(x*y))/(1+y^2)";
      break;
  }
  return mulcalc::PositiveField(mulcalc::parse(text), p);
}

inline mulcalc::Params merged(const mulcalc::PositiveField& f, const mulcalc::PositiveField& g) {
  mulcalc::Params p = f.params();
  p.insert(g.params().begin(), g.params().end());
  return p;
}

}  // namespace testing_support
