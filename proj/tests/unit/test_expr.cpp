#include <cmath>

#include "doctest.h"
#include "mulcalc/errors.hpp"
#include "mulcalc/expr.hpp"
#include "support.hpp"

using namespace mulcalc;
using namespace testing_support;

TEST_CASE("parse builds the expected trees") {
  Expr c = Expr::param("c"), z = Expr::var();
  CHECK(parse("exp(c*z)") == exp(c * z));
  CHECK(parse("1/z") == Expr::lit(1.0) / z);
  CHECK(parse("exp(z*Log(z))") == exp(z * log(z)));
  CHECK(parse("-z^2") == Expr::pow(-z, 2));
  CHECK(parse("2*z^-1") == Expr::lit(2.0) * Expr::pow(z, -1));
  CHECK(parse("a-b-c") == (Expr::param("a") - Expr::param("b")) - Expr::param("c"));
  CHECK(parse("1.5e2") == Expr::lit(150.0));
  CHECK(parse("t^2+1", {"t"}) == Expr::pow(Expr::var(), 2) + Expr::lit(1.0));
}

TEST_CASE("constants and parameters") {
  CHECK(parse("pi").op() == Op::Lit);
  CHECK(parse("e").value() == Complex(std::numbers::e));
  CHECK(parse("i").value() == Complex(0.0, 1.0));
  CHECK(parse("rate").op() == Op::Param);
  CHECK(free_parameters(parse("a*z+exp(b)")) == std::set<std::string>{"a", "b"});
}

TEST_CASE("syntax errors carry offset and expected tokens") {
  try {
    parse("1+*z");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(parse("foo(z)"), ParseError);
  CHECK_THROWS_AS(parse("exp z"), ParseError);
  CHECK_THROWS_AS(parse("(z"), ParseError);
  CHECK_THROWS_AS(parse("z^1.5"), ParseError);
  CHECK_THROWS_AS(parse("2z"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("z", {"exp"}), InputError);
}

TEST_CASE("evaluate") {
  CHECK(std::abs(evaluate(parse("exp(1/z)"), 1.0) - std::numbers::e) < 1e-15);
  CHECK(std::abs(evaluate(parse("1/z"), Complex(0.0, 2.0)) - Complex(0.0, -0.5)) < 1e-16);
  CHECK(evaluate(parse("Log(z)"), -1.0) == Complex(0.0, std::numbers::pi));
  CHECK(evaluate(parse("Log(z)"), Complex(-1.0, -0.0)) == Complex(0.0, std::numbers::pi));
  CHECK(evaluate(parse("c*z"), 2.0, {{"c", Complex(0.0, 1.0)}}) == Complex(0.0, 2.0));
  CHECK(evaluate(parse("z^-2"), 2.0) == Complex(0.25, 0.0));
  CHECK(evaluate(parse("abs(z)+re(z)+im(z)"), Complex(3.0, 4.0)) == Complex(12.0, 0.0));
  CHECK(evaluate(parse("conj(z)"), Complex(1.0, 2.0)) == Complex(1.0, -2.0));
}

TEST_CASE("evaluate errors") {
  CHECK_THROWS_AS(evaluate(parse("1/z"), 0.0), DomainError);
  CHECK_THROWS_AS(evaluate(parse("Log(z)"), 0.0), DomainError);
  CHECK_THROWS_AS(evaluate(parse("c*z"), 1.0), InputError);
  CHECK_THROWS_AS(evaluate(parse("z-z"), NAN), DomainError);
}

TEST_CASE("differentiate") {
  const Complex z0(0.3, -0.7);
  CHECK(simplify(differentiate(parse("z*z"))) == parse("2*z"));
  Params p{{"c", Complex(1.0, 2.0)}};
  Complex d = evaluate(differentiate(parse("exp(c*z)")), z0, p);
  CHECK(rel(d, p["c"] * std::exp(p["c"] * z0)) < 1e-15);
  CHECK(rel(evaluate(differentiate(parse("Log(z)")), z0), 1.0 / z0) < 1e-15);
  CHECK(rel(evaluate(differentiate(parse("z^-3")), z0), -3.0 / std::pow(z0, 4)) < 1e-14);
  try {
    differentiate(parse("z+conj(z)"));
    FAIL("expected rejection");
  } catch (const NotHolomorphicError& e) {
    CHECK(e.node() == "conj");
    CHECK(std::string(e.what()).find("not complex-differentiable") != std::string::npos);
  }
  CHECK_THROWS_AS(differentiate(parse("abs(z)")), NotHolomorphicError);
  CHECK_FALSE(is_holomorphic_tree(parse("re(z)")));
  CHECK(is_holomorphic_tree(parse("sin(z)/cos(z)")));
}

TEST_CASE("simplify") {
  CHECK(simplify(parse("0*z + 1*w")) == parse("w"));
  CHECK(simplify(parse("2+3")) == Expr::lit(5.0));
  CHECK(simplify(parse("exp(z)")) == parse("exp(z)"));
  CHECK(simplify(parse("z^1")) == parse("z"));
  CHECK(simplify(parse("-(-z)")) == parse("z"));
}

TEST_CASE("substitute") {
  Expr f = substitute(parse("exp(z)+z"), parse("2*z"));
  CHECK(f == parse("exp(2*z)+2*z"));
}

TEST_CASE("property: render then parse reproduces the tree") {
  Rng rng(20240611);
  for (int k = 0; k < 500; ++k) {
    Expr e = random_expr(rng, 5, false);
    std::string text = render(e);
    INFO(text);
    CHECK(parse(text) == e);
    std::string t_text = render(e, "t");
    CHECK(parse(t_text, {"t"}) == e);
  }
}

TEST_CASE("property: derivative agrees with central differences") {
  // Hand-picked functions with known singular sets, plus random entire ones.
  struct Case {
    const char* text;
    std::vector<Complex> poles;
    bool branch_cut;
  };
  const std::vector<Case> corpus = {
      {"z^3-2*z+1", {}, false},
      {"exp(2*z)*sin(z)", {}, false},
      {"1/z", {0.0}, false},
      {"1/(z-1)+z^-2", {1.0, 0.0}, false},
      {"cos(z)/(z^2+1)", {Complex(0, 1), Complex(0, -1)}, false},
      {"Log(z)", {0.0}, true},
      {"exp(z*Log(z))", {0.0}, true},
      {"sin(exp(z))-z^4", {}, false},
      {"(z+i)^-1*exp(-z)", {Complex(0, -1)}, false},
  };
  Rng rng(7);
  const double h = 1e-6;
  auto check = [&](const Expr& f, const Case* c) {
    Expr df = differentiate(f);
    int tested = 0;
    while (tested < 100) {
      Complex z = uniform_disk(rng, 2.0);
      bool ok = true;
      if (c) {
        for (Complex p : c->poles) ok = ok && std::abs(z - p) >= 0.1;
        if (c->branch_cut) ok = ok && !(z.real() < 0.0 && std::abs(z.imag()) < 0.1);
      }
      if (!ok) continue;
      Complex fd =
          0.5 * (central_difference(f, z, 1.0, h) + central_difference(f, z, Complex(0, 1), h));
      Complex exact = evaluate(df, z);
      INFO(render(f), " at ", z.real(), "+", z.imag(), "i");
      CHECK(std::abs(exact - fd) <= 1e-5 * (1.0 + std::abs(fd)));
      ++tested;
    }
  };
  for (const auto& c : corpus) check(parse(c.text), &c);
  for (int k = 0; k < 20; ++k) check(random_entire(rng, 3), nullptr);
}

TEST_CASE("property: simplify preserves values") {
  Rng rng(99);
  Params p{{"a", Complex(0.7, -0.2)}, {"b", Complex(-1.1, 0.4)}};
  int compared = 0;
  for (int k = 0; k < 400; ++k) {
    Expr e = random_expr(rng, 4, false);
    Expr s = simplify(e);
    for (int j = 0; j < 5; ++j) {
      Complex z = uniform_disk(rng, 2.0);
      Complex v;
      try {
        v = evaluate(e, z, p);
      } catch (const DomainError&) {
        continue;
      }
      if (!std::isfinite(std::abs(v)) || std::abs(v) > 1e12) continue;
      Complex w = evaluate(s, z, p);
      INFO(render(e), " -> ", render(s));
      CHECK(std::abs(v - w) <= 1e-12 * (1.0 + std::abs(v)));
      ++compared;
    }
  }
  CHECK(compared > 1000);
}
