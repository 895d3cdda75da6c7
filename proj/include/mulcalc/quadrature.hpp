#pragma once

#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

#include "mulcalc/errors.hpp"

namespace mulcalc {

struct QuadratureConfig {
  int panels = 64;           // initial panels per integration interval
  int order = 16;            // Gauss-Legendre points per panel
  double tolerance = 1e-10;  // on the (log-)integral, relative with a floor of 1
  int max_rounds = 12;       // panel doublings before giving up

  void validate() const;
};

struct GaussRule {
  std::vector<double> nodes;  // on [-1, 1], ascending
  std::vector<double> weights;
};

// Rules are generated once per order and cached for the process lifetime.
const GaussRule& gauss_legendre(int order);

template <class T>
struct Integral {
  T value{};
  int rounds = 0;  // doublings performed
  int panels = 0;  // panels in the accepted estimate
};

template <class F>
auto integrate_fixed(F&& fn, double a, double b, int panels, const GaussRule& rule) {
  using T = std::decay_t<decltype(fn(a))>;
  T total{};
  const double width = (b - a) / panels;
  const double half = 0.5 * width;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    T panel{};
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * fn(mid + half * rule.nodes[k]);
    }
    total += half * panel;
  }
  return total;
}

// Composite Gauss-Legendre with panel doubling. Converged when successive
// estimates differ by at most tolerance * max(1, |estimate|).
template <class F>
auto integrate(F&& fn, double a, double b, const QuadratureConfig& cfg) {
  using T = std::decay_t<decltype(fn(a))>;
  const GaussRule& rule = gauss_legendre(cfg.order);
  int panels = cfg.panels;
  T previous = integrate_fixed(fn, a, b, panels, rule);
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    panels *= 2;
    T current = integrate_fixed(fn, a, b, panels, rule);
    const double scale = std::max(1.0, static_cast<double>(std::abs(current)));
    if (std::abs(current - previous) <= cfg.tolerance * scale) {
      return Integral<T>{current, round, panels};
    }
    previous = current;
  }
  throw ConvergenceError("quadrature did not reach tolerance within " +
                         std::to_string(cfg.max_rounds) + " refinement rounds");
}

}  // namespace mulcalc
