#include "mulcalc/reference_suite.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "mulcalc/complex_mint.hpp"
#include "mulcalc/curves.hpp"
#include "mulcalc/errors.hpp"
#include "mulcalc/mult_deriv.hpp"
#include "mulcalc/real_mint.hpp"

namespace mulcalc {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SuiteCase measured(double err, double tol) { return {{}, err <= tol, err, tol, {}}; }

SuiteCase from_report(const VerificationReport& r) {
  SuiteCase c{{}, r.passed, r.rel_err, r.tolerance, {}};
  if (r.matched_branch) c.detail = "branch " + std::to_string(*r.matched_branch);
  return c;
}

Curve line(Complex a, Complex b) { return Curve({LineSegment{a, b}}); }
Curve arc(double radius, double from, double to) {
  return Curve({ArcSegment{0.0, radius, from, to}});
}
Curve unit_circle() { return arc(1.0, -kPi, kPi); }

SuiteCase star_derivative_case(const char* f, Complex z,
                               const std::function<Complex(Complex)>& expected, Params p = {}) {
  Complex got = star_derivative(parse(f), z, p).value;
  return measured(rel(got, expected(z)), 1e-12);
}

using CaseFn = std::function<SuiteCase(const QuadratureConfig&)>;

struct NamedCase {
  std::string name;
  CaseFn run;
};

std::vector<NamedCase> corpus() {
  std::vector<NamedCase> cases;
  const Params c_param{{"c", Complex(2.0, -1.0)}};
  const Complex c = c_param.at("c");

  cases.push_back({"star derivative of a constant", [](const QuadratureConfig&) {
                     return star_derivative_case("2+3*i", {0.7, -0.2},
                                                 [](Complex) { return Complex(1.0); });
                   }});
  cases.push_back({"star derivative of exp(c z)", [=](const QuadratureConfig&) {
                     return star_derivative_case(
                         "exp(c*z)", {0.4, 1.1}, [=](Complex) { return std::exp(c); }, c_param);
                   }});
  cases.push_back({"star derivative of exp(c exp(z)) is itself", [=](const QuadratureConfig&) {
                     return star_derivative_case(
                         "exp(c*exp(z))", {0.3, 0.2},
                         [=](Complex z) { return std::exp(c * std::exp(z)); }, c_param);
                   }});
  cases.push_back({"star derivative of z", [](const QuadratureConfig&) {
                     return star_derivative_case("z", {2.0, 0.0},
                                                 [](Complex z) { return std::exp(1.0 / z); });
                   }});
  cases.push_back({"star derivative of 1/z", [](const QuadratureConfig&) {
                     return star_derivative_case("1/z", {-0.5, 1.5},
                                                 [](Complex z) { return std::exp(-1.0 / z); });
                   }});
  cases.push_back({"star derivative of Log z", [](const QuadratureConfig&) {
                     return star_derivative_case("Log(z)", {2.0, 1.0}, [](Complex z) {
                       return std::exp(1.0 / (z * std::log(z)));
                     });
                   }});
  cases.push_back({"star derivative of exp(z Log z)", [](const QuadratureConfig&) {
                     return star_derivative_case("exp(z*Log(z))", {1.5, 0.5},
                                                 [](Complex z) { return std::numbers::e * z; });
                   }});

  cases.push_back({"difference quotient limit of t^2+1 at 1", [](const QuadratureConfig&) {
                     Expr f = parse("t^2+1", {"t"});
                     std::array<double, 6> steps{0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
                     auto r = star_limit_oracle(f, 1.0, steps);
                     return measured(rel(r.extrapolated, std::numbers::e), 1e-6);
                   }});

  cases.push_back(
      {"cauchy-riemann star conditions, holomorphic input", [](const QuadratureConfig&) {
         Expr f = parse("exp(z)*z^2+1");
         auto a = check_cr(f, {0.3, 0.4}, default_cr_step({0.3, 0.4}));
         auto b = check_cr_polar(f, 1.2, 0.7, 1e-5, 1e-6);
         SuiteCase out = measured(
             std::max({a.residual_modulus, a.residual_argument, b.residual_1, b.residual_2}), 1e-6);
         out.passed = a.passes && b.passes;
         return out;
       }});
  cases.push_back({"cauchy-riemann star conditions reject conj", [](const QuadratureConfig&) {
                     auto r = check_cr(parse("conj(z)"), {0.5, 0.5}, 1e-5);
                     SuiteCase out{{},
                                   !r.passes && r.residual_classic >= 1.9,
                                   r.residual_classic,
                                   1.9,
                                   "classic residual must reach the tolerance"};
                     return out;
                   }});

  cases.push_back({"constant dx integral equals c^(x(b)-x(a))", [](const QuadratureConfig& q) {
                     PositiveField two = PositiveField::parse("2");
                     double v = line_star_dx(two, line(0.0, Complex(3.0, 1.0)), q);
                     return measured(rel(v, 8.0), 1e-12);
                   }});
  cases.push_back({"line fundamental theorem for exp(xy)", [](const QuadratureConfig& q) {
                     auto r = verify_ftc_line(PositiveField::parse("exp(x*y)"),
                                              line(0.0, Complex(1.0, 1.0)), q);
                     return measured(r.rel_err, 1e-8);
                   }});
  cases.push_back({"green form on the unit square", [](const QuadratureConfig& q) {
                     auto r = verify_green(PositiveField::parse("1"),
                                           PositiveField::parse("exp(x)"), Rect{}, q);
                     return measured(r.rel_err, 1e-6);
                   }});

  cases.push_back({"constant integral over a unit step", [](const QuadratureConfig& q) {
                     auto I = complex_star_integral(parse("exp(1)"), line(0.0, 1.0), {}, q);
                     SuiteCase out = measured(rel(I.base, std::numbers::e), 1e-10);
                     out.passed = out.passed && I.single_valued;
                     return out;
                   }});
  cases.push_back(
      {"constant integral over a half step has two values", [](const QuadratureConfig& q) {
         auto I = complex_star_integral(parse("exp(1)"), line(0.0, 0.5), {}, q);
         const double half = std::exp(0.5);
         double err = std::max(rel(I.value(0), half), rel(I.value(1), -half));
         SuiteCase out = measured(err, 1e-9);
         out.passed = out.passed && I.distinct_count == 2;
         return out;
       }});
  cases.push_back({"gompertz integral matches exp(c(e^b - e^a))", [](const QuadratureConfig& q) {
                     VerifyConfig v{q, {}, 5};
                     auto r = verify_ftc_complex(parse("exp(c*exp(z))"), line(0.0, 1.0),
                                                 {{"c", 0.5}}, v);
                     return from_report(r);
                   }});
  cases.push_back({"exp(1/z) around the unit circle is 1", [](const QuadratureConfig& q) {
                     auto I = complex_star_integral(parse("exp(1/z)"), unit_circle(), {}, q);
                     double err = 0.0;
                     for (int n = -5; n <= 5; ++n) err = std::max(err, std::abs(I.value(n) - 1.0));
                     return measured(err, 1e-8);
                   }});

  cases.push_back({"concatenation of unit semicircles", [](const QuadratureConfig& q) {
                     return from_report(
                         verify_concat(parse("exp(1/z)"), unit_circle(), 0.0, {}, {q, {}, 5}));
                   }});
  cases.push_back({"concatenation on a segment", [](const QuadratureConfig& q) {
                     return from_report(
                         verify_concat(parse("z"), line(1.0, 3.0), 0.5, {}, {q, {}, 5}));
                   }});
  cases.push_back({"product of z and z on a quarter arc", [](const QuadratureConfig& q) {
                     return from_report(verify_product(parse("z"), parse("z"),
                                                       arc(1.0, 0.0, kPi / 2), {}, {q, {}, 5}));
                   }});
  cases.push_back({"product of exp(z) and exp(-z)", [](const QuadratureConfig& q) {
                     return from_report(verify_product(parse("exp(z)"), parse("exp(-z)"),
                                                       line(Complex(0.2, 0.1), Complex(1.3, 0.9)),
                                                       {}, {q, {}, 5}));
                   }});
  cases.push_back({"division of exp(z) by z", [](const QuadratureConfig& q) {
                     return from_report(verify_division(parse("exp(z)"), parse("z"),
                                                        line(1.0, Complex(2.0, 1.0)), {},
                                                        {q, {}, 5}));
                   }});
  cases.push_back({"reversal on the upper semicircle", [](const QuadratureConfig& q) {
                     return from_report(
                         verify_reverse(parse("exp(1/z)"), arc(1.0, 0.0, kPi), {}, {q, {}, 5}));
                   }});
  cases.push_back({"reversal on a segment", [](const QuadratureConfig& q) {
                     return from_report(verify_reverse(parse("z"), line(1.0, 2.0), {}, {q, {}, 5}));
                   }});
  for (int n = 0; n <= 3; ++n) {
    cases.push_back(
        {"power " + std::to_string(n) + " of z on a quarter arc", [n](const QuadratureConfig& q) {
           return from_report(verify_power(parse("z"), arc(1.0, 0.0, kPi / 2), n, {}, {q, {}, 5}));
         }});
  }
  cases.push_back({"fundamental theorem for exp(c z) from 1 to i", [=](const QuadratureConfig& q) {
                     return from_report(
                         verify_ftc_complex(parse("exp(c*z)"), line(1.0, kI), c_param, {q, {}, 5}));
                   }});
  cases.push_back({"fundamental theorem for a constant", [](const QuadratureConfig& q) {
                     return from_report(verify_ftc_complex(
                         parse("3-i"), line(0.0, Complex(0.5, 0.25)), {}, {q, {}, 5}));
                   }});
  cases.push_back({"closed curve: z on the unit circle", [](const QuadratureConfig& q) {
                     return from_report(verify_closed(parse("z"), unit_circle(), {}, {q, {}, 5}));
                   }});
  cases.push_back({"closed curve: 1/z on the circle of radius 2", [](const QuadratureConfig& q) {
                     return from_report(
                         verify_closed(parse("1/z"), arc(2.0, -kPi, kPi), {}, {q, {}, 5}));
                   }});
  cases.push_back(
      {"closed curve: exp(c z) on a rectangle", [=](const QuadratureConfig& q) {
         const Complex a(0.5, -1.0), b(2.0, -1.0), cc(2.0, 1.5), d(0.5, 1.5);
         Curve rect({LineSegment{a, b}, LineSegment{b, cc}, LineSegment{cc, d}, LineSegment{d, a}});
         return from_report(verify_closed(parse("exp(c*z)"), rect, c_param, {q, {}, 5}));
       }});

  cases.push_back({"finer partitions give the same integral", [](const QuadratureConfig& q) {
                     BranchOptions fine;
                     fine.extra_splits = 3;
                     Expr f = parse("exp(1/z)*(z+3)");
                     Curve C = arc(1.5, -2.0, 2.5);
                     auto coarse = complex_star_integral(f, C, {}, q);
                     auto split = complex_star_integral(f, C, {}, q, fine);
                     return measured(rel(split.base, coarse.base), 1e-10);
                   }});
  return cases;
}

}  // namespace

std::vector<SuiteCase> run_reference_suite(const QuadratureConfig& cfg) {
  std::vector<SuiteCase> out;
  for (const auto& c : corpus()) {
    SuiteCase r;
    try {
      r = c.run(cfg);
    } catch (const Error& e) {
      r = {{}, false, INFINITY, 0.0, e.what()};
    }
    r.name = c.name;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mulcalc
