// One PASS/FAIL line per acceptance criterion. Runs from tests/data so the
// curve files resolve by relative path.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mulcalc/cli.hpp"
#include "mulcalc/complex_mint.hpp"
#include "mulcalc/errors.hpp"
#include "mulcalc/mult_deriv.hpp"
#include "mulcalc/real_mint.hpp"
#include "support.hpp"

using namespace mulcalc;
using namespace testing_support;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Curve line(Complex a, Complex b) { return Curve({LineSegment{a, b}}); }
Curve arc(double r, double from, double to) { return Curve({ArcSegment{0.0, r, from, to}}); }

Outcome unit_circle_integral() {
  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  int code = cli::run({"complex-int", "--f", "exp(1/z)", "--curve", "unit_circle.json",
                       "--branches", "5", "--format", "json"},
                      out, err);
  const double elapsed = seconds_since(t0);
  if (code != 0) return {false, "exit " + std::to_string(code) + ": " + err.str()};
  auto rec = nlohmann::json::parse(out.str());
  double worst = 0.0;
  int count = 0;
  for (const auto& b : rec["results"]["branches"]) {
    Complex v(b["value"]["re"].get<double>(), b["value"]["im"].get<double>());
    worst = std::max(worst, std::abs(v - 1.0));
    ++count;
  }
  return {count == 11 && worst <= 1e-8 && elapsed < 1.0,
          "max |I*[n] - 1| = " + fmt("%.2e", worst) + " over " + std::to_string(count) +
              " branches, " + fmt("%.3f", elapsed) + " s"};
}

Outcome constant_family() {
  auto I = complex_star_integral(parse("exp(c)"), line(0.0, 1.0), {{"c", 1.0}});
  auto H = complex_star_integral(parse("exp(c)"), line(0.0, 0.5), {{"c", 1.0}});
  const double e0 = rel(I.base, std::numbers::e);
  const double h0 = rel(H.value(0), std::exp(0.5)), h1 = rel(H.value(1), -std::exp(0.5));
  const bool ok = e0 <= 1e-10 && I.single_valued && H.distinct_count == 2 && h0 <= 1e-9 &&
                  h1 <= 1e-9 && std::abs(H.winding + 1.0) <= 1e-12;
  return {ok, "rel(I0, e) = " + fmt("%.1e", e0) + ", half step values rel " +
                  fmt("%.1e", std::max(h0, h1))};
}

Outcome ftc_membership() {
  Rng rng(1001);
  int passed = 0;
  double worst = 0.0;
  for (int k = 0; k < 25; ++k) {
    Params p{{"c", Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0))}};
    const char* f = k % 3 == 0 ? "exp(c*z)" : k % 3 == 1 ? "exp(c*exp(z))" : "z";
    Curve C = polyline(random_vertices(rng, 3, false, 2.0, 0.2), false);
    auto r = verify_ftc_complex(parse(f), C, p);
    worst = std::max(worst, r.rel_err);
    passed += r.passed && r.matched_branch.has_value();
  }
  return {passed == 25, std::to_string(passed) + "/25 matched, worst rel " + fmt("%.1e", worst)};
}

Outcome closed_curves() {
  Rng rng(1002);
  int passed = 0;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    Params p{{"c", Complex(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0))}};
    const char* f = k % 3 == 0 ? "z" : k % 3 == 1 ? "1/z" : "exp(c*z)";
    Curve C = polyline(random_vertices(rng, uniform_int(rng, 3, 6), true, 2.0, 0.2), true);
    auto r = verify_closed(parse(f), C, p);
    worst = std::max(worst, r.abs_err);
    passed += r.passed;
  }
  return {passed == 10,
          std::to_string(passed) + "/10 closed integrals equal 1, worst " + fmt("%.1e", worst)};
}

Outcome integral_product_oracle() {
  Rng rng(1003);
  const std::array<const char*, 5> fs{"z", "exp(1/z)", "z^2+1", "exp(c*z)", "Log(z)+3"};
  const Params p{{"c", Complex(0.5, 1.5)}};
  int passed = 0;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    Complex a = 1.0 + uniform_disk(rng, 0.3);
    std::vector<Complex> v{a, a + uniform_disk(rng, 0.5)};
    v.push_back(v.back() + uniform_disk(rng, 0.5));
    Expr f = parse(fs[k % fs.size()]);
    auto I = complex_star_integral(f, polyline(v, false), p);
    const double e = rel(I.base, integral_product(f, v, 50000, p));
    worst = std::max(worst, e);
    passed += e <= 1e-6;
  }
  return {passed == 10,
          std::to_string(passed) + "/10 within 1e-6, worst rel " + fmt("%.1e", worst)};
}

Outcome line_ftc() {
  auto r0 = verify_ftc_line(PositiveField::parse("exp(x*y)"), line(0.0, Complex(1.0, 1.0)));
  Rng rng(1004);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k)
    worst = std::max(worst, verify_ftc_line(random_field(rng), random_curve(rng)).rel_err);
  return {r0.rel_err <= 1e-8 && worst <= 1e-6,
          "exp(xy): " + fmt("%.1e", r0.rel_err) + ", random worst " + fmt("%.1e", worst)};
}

Outcome green_form() {
  auto r0 = verify_green(PositiveField::parse("1"), PositiveField::parse("exp(x)"), Rect{});
  Rng rng(1005);
  double worst = r0.rel_err;
  for (int k = 0; k < 5; ++k) {
    Rect r{uniform(rng, -1.0, 0.0), uniform(rng, 0.5, 1.5), uniform(rng, -1.0, 0.0),
           uniform(rng, 0.5, 1.5)};
    worst =
        std::max(worst, verify_green(random_field(rng, "f"), random_field(rng, "g"), r).rel_err);
  }
  return {worst <= 1e-6, "worst rel " + fmt("%.1e", worst)};
}

bool member(Complex lhs, Complex rhs, Complex w) {
  for (int k = -3; k <= 3; ++k)
    if (rel(lhs, rhs * std::exp(Complex(0.0, 2.0 * kPi * k) * w)) <= 1e-8) return true;
  return false;
}

Outcome derivative_algebra() {
  Rng rng(1006);
  auto sd = [](const Expr& f, Complex z) { return star_derivative(f, z).value; };
  double worst = 0.0;
  int members = 0;
  for (int k = 0; k < 50; ++k) {
    Expr f = random_nonvanishing(rng), g = random_nonvanishing(rng);
    Complex c(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
    Complex z = uniform_disk(rng, 1.2);
    worst =
        std::max({worst, rel(sd(Expr::lit(c) * f, z), sd(f, z)),
                  rel(sd(f * g, z), sd(f, z) * sd(g, z)), rel(sd(f / g, z), sd(f, z) / sd(g, z))});
    for (int n = 0; n <= 3; ++n)
      worst = std::max(worst, rel(sd(Expr::pow(f, n), z), std::pow(sd(f, z), n)));

    Complex cc(c.real(), 0.5 * c.imag());
    bool ok_f = member(sd(exp(Expr::lit(cc) * log(f)), z), std::exp(cc * std::log(sd(f, z))), cc);

    // Scaled so exp(g Log f) stays well above the zero threshold.
    const Expr gs = Expr::lit(0.1) * g;
    Complex gz = evaluate(gs, z), dgz = evaluate(differentiate(gs), z), fz = evaluate(f, z);
    Complex lhs = sd(exp(gs * log(f)), z);
    Complex rhs = std::exp(gz * std::log(sd(f, z))) * std::exp(dgz * std::log(fz));
    bool ok_d = false;
    for (int k2 = -3; k2 <= 3 && !ok_d; ++k2)
      ok_d = member(lhs, rhs * std::exp(Complex(0.0, 2.0 * kPi * k2) * dgz), gz);

    Expr h =
        Expr::lit(Complex(0.3, 0.1)) * Expr::pow(Expr::var(), 2) + Expr::lit(Complex(0.2, -0.1));
    Complex hz = evaluate(h, z), dhz = evaluate(differentiate(h), z);
    bool ok_e = member(sd(substitute(f, h), z), std::exp(dhz * std::log(sd(f, hz))), dhz);
    members += ok_d && ok_e && ok_f;
  }
  return {worst <= 1e-9 && members == 50, "(a)(b)(c)(g) worst rel " + fmt("%.1e", worst) +
                                              ", (d)(e)(f) " + std::to_string(members) + "/50"};
}

Outcome cauchy_riemann() {
  Rng rng(1007);
  const std::array<const char*, 6> corpus{"exp(z)",         "z",        "z^2+3",
                                          "exp(c*z)*(z+4)", "cos(z)+2", "1/(z-3)"};
  const Params p{{"c", Complex(0.7, -0.4)}};
  double worst = 0.0;
  bool all = true;
  for (const char* text : corpus) {
    Expr f = parse(text);
    for (int k = 0; k < 100; ++k) {
      Complex z = 1.0 + uniform_disk(rng, 0.5);
      auto a = check_cr(f, z, default_cr_step(z), 1e-6, p);
      const double r = uniform(rng, 0.5, 1.5), th = uniform(rng, -kPi, kPi);
      auto b = check_cr_polar(f, r, th, 1e-5, 1e-6, p);
      worst =
          std::max({worst, a.residual_modulus, a.residual_argument, b.residual_1, b.residual_2});
      all = all && a.passes && b.passes;
    }
  }
  auto bad = check_cr(parse("conj(z)"), Complex(1.0, 1.0), 1e-5);
  const bool conj_ok = !bad.passes && bad.residual_classic >= 1.9;
  return {all && worst <= 1e-6 && conj_ok, "worst residual " + fmt("%.1e", worst) +
                                               ", conj classic residual " +
                                               fmt("%.4f", bad.residual_classic)};
}

Outcome limit_convergence() {
  Expr f = parse("t^2+1", {"t"});
  std::array<double, 6> steps{0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
  auto r = star_limit_oracle(f, 1.0, steps);
  double min_order = INFINITY;
  for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
    const double e1 = std::abs(r.approximations[k] - std::numbers::e);
    const double e2 = std::abs(r.approximations[k + 1] - std::numbers::e);
    min_order = std::min(min_order, std::log2(e1 / e2));
  }
  const double err = std::abs(r.extrapolated - std::numbers::e);
  return {min_order >= 1.0 && err <= 1e-6, "observed order >= " + fmt("%.2f", min_order) +
                                               ", extrapolated error " + fmt("%.1e", err)};
}

Outcome verifiers_and_suite() {
  std::string detail;
  bool ok = true;

  Rng rng(1008);
  const std::array<const char*, 4> fs{"z", "exp(1/z)", "z^3+1/z", "exp(i*z)*(z+3)"};
  double worst_split = 0.0;
  for (int k = 0; k < 8; ++k) {
    Curve C = polyline(random_vertices(rng, 3, k % 2 == 0, 2.0, 0.3), k % 2 == 0);
    Expr f = parse(fs[k % fs.size()]);
    BranchOptions fine;
    fine.extra_splits = 2;
    worst_split = std::max(worst_split, rel(complex_star_integral(f, C, {}, {}, fine).base,
                                            complex_star_integral(f, C).base));
  }
  ok = ok && worst_split <= 1e-10;

  const Curve circle = arc(1.0, -kPi, kPi);
  int verified = 0, total = 0;
  auto tally = [&](const VerificationReport& r) {
    ++total;
    verified += r.passed;
  };
  tally(verify_concat(parse("3"), line(0.0, 1.0), 0.4));
  tally(verify_concat(parse("exp(1/z)"), circle, 0.0));
  tally(verify_concat(parse("z"), line(1.0, 3.0), 0.5));
  tally(verify_reverse(parse("3"), line(0.0, 1.0)));
  tally(verify_reverse(parse("exp(1/z)"), arc(1.0, 0.0, kPi)));
  tally(verify_reverse(parse("z"), line(1.0, 2.0)));
  for (int n = 0; n <= 3; ++n) tally(verify_power(parse("z"), arc(1.0, 0.0, kPi / 2), n));
  ok = ok && verified == total;

  auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"verify", "all", "--suite", "paper"}, out, err);
  const double elapsed = seconds_since(t0);
  ok = ok && code == 0 && elapsed < 30.0;
  return {ok, "partition rel " + fmt("%.1e", worst_split) + ", verifiers " +
                  std::to_string(verified) + "/" + std::to_string(total) + ", suite exit " +
                  std::to_string(code) + " in " + fmt("%.2f", elapsed) + " s"};
}

}  // namespace

int main() {
  const std::array<std::pair<const char*, std::function<Outcome()>>, 11> criteria{{
      {"exp(1/z) on the unit circle is 1 for n in [-5,5], under 1 s", unit_circle_integral},
      {"constant integrand family on unit and half steps", constant_family},
      {"fundamental theorem membership on 25 random curves", ftc_membership},
      {"closed-curve integrals of star derivatives equal 1", closed_curves},
      {"quadrature matches the 1e5-node integral product", integral_product_oracle},
      {"line fundamental theorem", line_ftc},
      {"green form on rectangles", green_form},
      {"star derivative algebra and branch membership", derivative_algebra},
      {"cauchy-riemann star conditions", cauchy_riemann},
      {"difference quotient limit converges", limit_convergence},
      {"partition independence, structural verifiers, reference suite", verifiers_and_suite},
  }};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("raised: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " [" << k + 1 << "] " << criteria[k].first << ": "
              << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
