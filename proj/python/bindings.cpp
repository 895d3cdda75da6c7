#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <optional>
#include <sstream>

#include "mulcalc/cli.hpp"
#include "mulcalc/complex_mint.hpp"
#include "mulcalc/curves.hpp"
#include "mulcalc/errors.hpp"
#include "mulcalc/expr.hpp"
#include "mulcalc/mult_deriv.hpp"
#include "mulcalc/real_mint.hpp"
#include "mulcalc/reference_suite.hpp"

namespace py = pybind11;
using namespace mulcalc;

namespace {

QuadratureConfig quad(int panels, int order, double tolerance) {
  QuadratureConfig cfg;
  cfg.panels = panels;
  cfg.order = order;
  cfg.tolerance = tolerance;
  cfg.validate();
  return cfg;
}

Measure measure_from(const std::string& name) {
  if (name == "ds") return Measure::ds;
  if (name == "dx") return Measure::dx;
  if (name == "dy") return Measure::dy;
  throw InputError("measure must be ds, dx or dy");
}

VerifyConfig verify_config(std::optional<double> tol) {
  VerifyConfig v;
  v.tolerance = tol;
  return v;
}

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["abs_err"] = r.abs_err;
  d["rel_err"] = r.rel_err;
  d["matched_branch"] = r.matched_branch;
  d["passed"] = r.passed;
  d["tolerance"] = r.tolerance;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multiplicative calculus on complex functions";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto input = py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<NotHolomorphicError>(m, "NotHolomorphicError", input.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());

  py::class_<Expr>(m, "Expr")
      .def(py::init([](const std::string& text, const std::string& variable) {
             return parse(text, {variable});
           }),
           py::arg("text"), py::arg("variable") = "z")
      .def(
          "__call__",
          [](const Expr& e, Complex z, const Params& params) { return evaluate(e, z, params); },
          py::arg("z"), py::arg("params") = Params{})
      .def("derivative", [](const Expr& e) { return simplify(differentiate(e)); })
      .def("star_derivative", [](const Expr& e) { return simplify(star_derivative_expr(e)); })
      .def(
          "render", [](const Expr& e, const std::string& v) { return render(e, v); },
          py::arg("variable") = "z")
      .def("__str__", [](const Expr& e) { return render(e); })
      .def("__repr__", [](const Expr& e) { return "Expr('" + render(e) + "')"; })
      .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; });
  py::implicitly_convertible<py::str, Expr>();

  m.def(
      "star_derivative",
      [](const Expr& f, Complex z, const Params& params) {
        return star_derivative(f, z, params).value;
      },
      py::arg("f"), py::arg("z"), py::arg("params") = Params{});
  m.def("star_derivative_n", &star_derivative_n, py::arg("f"), py::arg("z"), py::arg("n"),
        py::arg("params") = Params{});
  m.def(
      "star_limit_oracle",
      [](const Expr& f, double t, const std::vector<double>& steps, const Params& params) {
        return star_limit_oracle(f, t, steps, params).extrapolated;
      },
      py::arg("f"), py::arg("t"), py::arg("steps"), py::arg("params") = Params{});
  m.def(
      "check_cr",
      [](const Expr& f, Complex z, std::optional<double> h, double tol, const Params& params) {
        CRReport r = check_cr(f, z, h.value_or(default_cr_step(z)), tol, params);
        py::dict d;
        d["residual_modulus"] = r.residual_modulus;
        d["residual_argument"] = r.residual_argument;
        d["residual_classic"] = r.residual_classic;
        d["step"] = r.step;
        d["passes"] = r.passes;
        return d;
      },
      py::arg("f"), py::arg("z"), py::arg("h") = py::none(), py::arg("tol") = kDefaultCRTolerance,
      py::arg("params") = Params{});

  py::class_<Curve>(m, "Curve")
      .def(py::init([](const std::string& json_text) { return parse_curve(json_text); }),
           py::arg("json_text"))
      .def_property_readonly("closed", &Curve::closed)
      .def_property_readonly("start", &Curve::start)
      .def_property_readonly("end", &Curve::end)
      .def_property_readonly("t_begin", &Curve::t_begin)
      .def_property_readonly("t_end", &Curve::t_end)
      .def("at", [](const Curve& c, double t) { return c.at(t).z; })
      .def("to_json", [](const Curve& c) { return curve_to_json(c).dump(); })
      .def("reversed", [](const Curve& c) { return reverse(c); })
      .def("length", [](const Curve& c) { return curve_length(c); });
  py::implicitly_convertible<py::str, Curve>();

  py::class_<MultiValueIntegral>(m, "MultiValueIntegral")
      .def_readonly("base", &MultiValueIntegral::base)
      .def_readonly("winding", &MultiValueIntegral::winding)
      .def_readonly("delta_z", &MultiValueIntegral::delta_z)
      .def_readonly("single_valued", &MultiValueIntegral::single_valued)
      .def_readonly("distinct_count", &MultiValueIntegral::distinct_count)
      .def_readonly("pieces", &MultiValueIntegral::pieces)
      .def("value", &MultiValueIntegral::value, py::arg("n") = 0);

  m.def(
      "complex_star_integral",
      [](const Expr& f, const Curve& curve, const Params& params, int anchor_offset,
         int extra_splits, int panels, int order, double tolerance) {
        BranchOptions opts;
        opts.anchor_offset = anchor_offset;
        opts.extra_splits = extra_splits;
        return complex_star_integral(f, curve, params, quad(panels, order, tolerance), opts);
      },
      py::arg("f"), py::arg("curve"), py::arg("params") = Params{}, py::arg("anchor_offset") = 0,
      py::arg("extra_splits") = 0, py::arg("panels") = 64, py::arg("order") = 16,
      py::arg("tolerance") = 1e-10);

  m.def(
      "line_star",
      [](const Expr& g, const Curve& curve, const std::string& measure, const Params& params) {
        return line_star(PositiveField(g, params), curve, measure_from(measure));
      },
      py::arg("g"), py::arg("curve"), py::arg("measure") = "ds", py::arg("params") = Params{});
  m.def(
      "double_star",
      [](const Expr& g, std::array<double, 4> rect, const Params& params) {
        return double_star(PositiveField(g, params), Rect{rect[0], rect[1], rect[2], rect[3]});
      },
      py::arg("g"), py::arg("rect") = std::array<double, 4>{0.0, 1.0, 0.0, 1.0},
      py::arg("params") = Params{});

  m.def(
      "verify_ftc",
      [](const Expr& f, const Curve& c, const Params& p, std::optional<double> tol) {
        return report_dict(verify_ftc_complex(f, c, p, verify_config(tol)));
      },
      py::arg("f"), py::arg("curve"), py::arg("params") = Params{}, py::arg("tol") = py::none());
  m.def(
      "verify_closed",
      [](const Expr& f, const Curve& c, const Params& p, std::optional<double> tol) {
        return report_dict(verify_closed(f, c, p, verify_config(tol)));
      },
      py::arg("f"), py::arg("curve"), py::arg("params") = Params{}, py::arg("tol") = py::none());
  m.def(
      "verify_product",
      [](const Expr& f, const Expr& g, const Curve& c, const Params& p, std::optional<double> tol) {
        return report_dict(verify_product(f, g, c, p, verify_config(tol)));
      },
      py::arg("f"), py::arg("g"), py::arg("curve"), py::arg("params") = Params{},
      py::arg("tol") = py::none());
  m.def(
      "verify_reverse",
      [](const Expr& f, const Curve& c, const Params& p, std::optional<double> tol) {
        return report_dict(verify_reverse(f, c, p, verify_config(tol)));
      },
      py::arg("f"), py::arg("curve"), py::arg("params") = Params{}, py::arg("tol") = py::none());

  m.def("reference_suite", []() {
    py::list out;
    for (const SuiteCase& c : run_reference_suite()) {
      py::dict d;
      d["name"] = c.name;
      d["passed"] = c.passed;
      d["error"] = c.error;
      d["tolerance"] = c.tolerance;
      d["detail"] = c.detail;
      out.append(d);
    }
    return out;
  });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
