#include "mulcalc/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "mulcalc/complex_mint.hpp"
#include "mulcalc/curves.hpp"
#include "mulcalc/errors.hpp"
#include "mulcalc/mult_deriv.hpp"
#include "mulcalc/real_mint.hpp"
#include "mulcalc/reference_suite.hpp"

namespace mulcalc::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct Options {
  std::string command;
  std::string target;
  std::string f, g, curve, z, rect, suite, dump_samples;
  std::string format = "text";
  std::string measure = "ds";
  std::vector<std::string> params;
  int n = 1;
  int anchor_offset = 0;
  std::optional<int> branches, panels, order;
  std::optional<double> tol, split, r, theta, h;
};

ojson complex_json(Complex v) { return ojson{{"re", v.real()}, {"im", v.imag()}}; }

bool is_complex_json(const ojson& v) {
  return v.is_object() && v.size() == 2 && v.contains("re") && v.contains("im");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string format_complex(Complex v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.15g%+.15gi", v.real(), v.imag());
  return buf;
}

std::string scalar_text(const ojson& v) {
  if (is_complex_json(v)) return format_complex({v["re"].get<double>(), v["im"].get<double>()});
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "none";
  return v.dump();
}

void render_text(const std::string& key, const ojson& v, std::ostream& os) {
  if (key == "branches" && v.is_array()) {
    for (const auto& b : v)
      os << "I*[" << b["n"].get<int>() << "]: " << scalar_text(b["value"]) << '\n';
    return;
  }
  if (key == "cases" && v.is_array()) {
    for (const auto& c : v) {
      os << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>()
         << " (error " << scalar_text(c["error"]) << ", tolerance " << scalar_text(c["tolerance"])
         << ")";
      if (!c["detail"].get<std::string>().empty())
        os << " [" << c["detail"].get<std::string>() << "]";
      os << '\n';
    }
    return;
  }
  if (v.is_object() && !is_complex_json(v)) {
    for (const auto& [k, item] : v.items()) render_text(k, item, os);
    return;
  }
  if (v.is_array()) {
    os << key << ":";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : " ") << scalar_text(v[i]);
    os << '\n';
    return;
  }
  os << key << ": " << scalar_text(v) << '\n';
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Params parse_params(const std::vector<std::string>& items) {
  static const std::regex name_re("[A-Za-z_][A-Za-z0-9_]*");
  Params out;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw InputError("--param expects NAME=COMPLEX, got '" + item + "'");
    std::string name = item.substr(0, eq);
    if (!std::regex_match(name, name_re)) throw InputError("invalid parameter name '" + name + "'");
    out[name] = parse_complex(item.substr(eq + 1));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rect parse_rect(const std::string& text) {
  if (text.empty()) return Rect{};
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Complex c = parse_complex(item);
    if (c.imag() != 0.0) throw InputError("--rect entries must be real");
    v.push_back(c.real());
  }
  if (v.size() != 4) throw InputError("--rect expects x0,x1,y0,y1");
  Rect r{v[0], v[1], v[2], v[3]};
  r.validate();
  return r;
}

class Runner {
 public:
  Runner(const Options& o, const std::vector<std::string>& args) : o_(o) {
    record_["format_version"] = 1;
    record_["command"] = ojson{{"name", o.command}, {"args", args}};
    std::string joined;
    for (const auto& a : args) joined += a + '\0';
    digest_ = fnv1a(joined);
    record_["inputs_digest"] = "";
    record_["results"] = ojson::object();
    record_["diagnostics"] = ojson::object();
  }

  int execute() {
    params_ = parse_params(o_.params);
    int code = dispatch();
    record_["inputs_digest"] = hex64(digest_);
    return code;
  }

  const ojson& record() const { return record_; }

 private:
  ojson& results() { return record_["results"]; }
  ojson& diagnostics() { return record_["diagnostics"]; }

  Expr f() const {
    if (o_.f.empty()) throw InputError("--f is required");
    return parse(o_.f);
  }

  Expr g() const {
    if (o_.g.empty()) throw InputError("--g is required");
    return parse(o_.g);
  }

  Curve curve() {
    if (o_.curve.empty()) throw InputError("--curve is required");
    auto first = o_.curve.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && o_.curve[first] == '{') return parse_curve(o_.curve);
    std::string text = read_file(o_.curve);
    digest_ = fnv1a(text, digest_);
    return parse_curve(text);
  }

  Complex z() const {
    if (o_.z.empty()) throw InputError("--z is required");
    return parse_complex(o_.z);
  }

  QuadratureConfig quad(bool tol_is_quadrature) const {
    QuadratureConfig q;
    if (o_.panels) q.panels = *o_.panels;
    if (o_.order) q.order = *o_.order;
    if (tol_is_quadrature && o_.tol) q.tolerance = *o_.tol;
    q.validate();
    return q;
  }

  VerifyConfig verify_config() const {
    VerifyConfig v;
    v.quad = quad(false);
    v.tolerance = o_.tol;
    if (o_.branches) v.branch_range = *o_.branches;
    if (v.branch_range < 0) throw InputError("--branches must be nonnegative");
    return v;
  }

  int set_passed(bool passed) {
    record_["passed"] = passed;
    return passed ? kOk : kVerifyFailed;
  }

  int dispatch() {
    const std::string& c = o_.command;
    if (c == "star-deriv") return star_deriv();
    if (c == "star-deriv-n") return star_deriv_n();
    if (c == "cr-check") return cr_check();
    if (c == "line-int") return line_int();
    if (c == "double-int") return double_int();
    if (c == "complex-int") return complex_int();
    return verify();
  }

  int star_deriv() {
    auto r = star_derivative(f(), z(), params_);
    results()["value"] = complex_json(r.value);
    results()["f"] = complex_json(r.f_value);
    results()["log_derivative"] = complex_json(r.logderiv);
    return kOk;
  }

  int star_deriv_n() {
    results()["n"] = o_.n;
    results()["value"] = complex_json(star_derivative_n(f(), z(), o_.n, params_));
    return kOk;
  }

  int cr_check() {
    const double tol = o_.tol.value_or(1e-6);
    if (o_.r || o_.theta) {
      if (!o_.r || !o_.theta) throw InputError("polar check needs both --r and --theta");
      const double h = o_.h.value_or(1e-5 * std::max(1.0, *o_.r));
      auto rep = check_cr_polar(f(), *o_.r, *o_.theta, h, tol, params_);
      results()["form"] = "polar";
      results()["radius"] = rep.radius;
      results()["angle"] = rep.angle;
      results()["residual_1"] = rep.residual_1;
      results()["residual_2"] = rep.residual_2;
      results()["tolerance"] = tol;
      diagnostics()["step"] = rep.step;
      return set_passed(rep.passes);
    }
    const Complex at = z();
    auto rep = check_cr(f(), at, o_.h.value_or(default_cr_step(at)), tol, params_);
    results()["form"] = "cartesian";
    results()["point"] = complex_json(rep.point);
    results()["residual_modulus"] = rep.residual_modulus;
    results()["residual_argument"] = rep.residual_argument;
    results()["residual_classic"] = rep.residual_classic;
    results()["tolerance"] = tol;
    diagnostics()["step"] = rep.step;
    return set_passed(rep.passes);
  }

  int line_int() {
    Measure m;
    if (o_.measure == "ds")
      m = Measure::ds;
    else if (o_.measure == "dx")
      m = Measure::dx;
    else if (o_.measure == "dy")
      m = Measure::dy;
    else
      throw InputError("--measure must be ds, dx or dy");
    PositiveField field(f(), params_);
    Curve C = curve();
    results()["measure"] = o_.measure;
    results()["value"] = line_star(field, C, m, quad(true));
    diagnostics()["segments"] = C.segments().size();
    return kOk;
  }

  int double_int() {
    PositiveField field(f(), params_);
    Rect region = parse_rect(o_.rect);
    results()["rect"] = ojson::array({region.x0, region.x1, region.y0, region.y1});
    results()["value"] = double_star(field, region, quad(true));
    return kOk;
  }

  int complex_int() {
    const int k = o_.branches.value_or(2);
    if (k < 0) throw InputError("--branches must be nonnegative");
    Expr fn = f();
    Curve C = curve();
    BranchOptions bo;
    bo.anchor_offset = o_.anchor_offset;
    auto I = complex_star_integral(fn, C, params_, quad(true), bo);

    results()["base"] = complex_json(I.base);
    results()["W"] = complex_json(I.winding);
    results()["delta_z"] = complex_json(I.delta_z);
    results()["single_valued"] = I.single_valued;
    if (I.distinct_count)
      results()["distinct_count"] = *I.distinct_count;
    else
      results()["distinct_count"] = "infinite";
    ojson branches = ojson::array();
    for (int n = -k; n <= k; ++n)
      branches.push_back(ojson{{"n", n}, {"value", complex_json(I.value(n))}});
    results()["branches"] = std::move(branches);

    diagnostics()["pieces"] = I.pieces;
    diagnostics()["max_rounds"] = I.max_rounds;
    diagnostics()["log_base"] = complex_json(I.log_base);
    diagnostics()["anchor"] = complex_json(I.path.anchor);

    if (!o_.dump_samples.empty()) {
      std::ofstream csv(o_.dump_samples);
      if (!csv) throw InputError("cannot write " + o_.dump_samples);
      csv << "t,z_re,z_im,logf_re,logf_im\n";
      char line[256];
      for (const auto& s : sample_branch(fn, C, I.path, 1001, params_)) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.z.real(),
                      s.z.imag(), s.logf.real(), s.logf.imag());
        csv << line;
      }
      diagnostics()["samples_written"] = o_.dump_samples;
    }
    return kOk;
  }

  int report(const VerificationReport& r) {
    results()["check"] = r.name;
    results()["lhs"] = complex_json(r.lhs);
    results()["rhs"] = complex_json(r.rhs);
    results()["abs_err"] = r.abs_err;
    results()["rel_err"] = r.rel_err;
    if (r.matched_branch)
      results()["matched_branch"] = *r.matched_branch;
    else
      results()["matched_branch"] = nullptr;
    results()["tolerance"] = r.tolerance;
    return set_passed(r.passed);
  }

  int real_report(const char* name, double lhs, double rhs, double rel_err, double tol) {
    results()["check"] = name;
    results()["lhs"] = lhs;
    results()["rhs"] = rhs;
    results()["rel_err"] = rel_err;
    results()["tolerance"] = tol;
    return set_passed(rel_err <= tol);
  }

  int verify() {
    const std::string& t = o_.target;
    if (t == "all") return verify_all();
    if (t == "cr") return cr_check();
    if (t == "ftc-line") {
      const double tol = o_.tol.value_or(1e-8);
      auto r = verify_ftc_line(PositiveField(f(), params_), curve(), quad(false));
      return real_report("ftc-line", r.lhs, r.rhs, r.rel_err, tol);
    }
    if (t == "green") {
      const double tol = o_.tol.value_or(1e-6);
      auto r = verify_green(PositiveField(f(), params_), PositiveField(g(), params_),
                            parse_rect(o_.rect), quad(false));
      return real_report("green", r.boundary, r.area, r.rel_err, tol);
    }

    VerifyConfig cfg = verify_config();
    if (t == "ftc") return report(verify_ftc_complex(f(), curve(), params_, cfg));
    if (t == "closed") return report(verify_closed(f(), curve(), params_, cfg));
    if (t == "reverse") return report(verify_reverse(f(), curve(), params_, cfg));
    if (t == "product") return report(verify_product(f(), g(), curve(), params_, cfg));
    if (t == "division") return report(verify_division(f(), g(), curve(), params_, cfg));
    if (t == "power") return report(verify_power(f(), curve(), o_.n, params_, cfg));
    if (t == "concat") {
      Curve C = curve();
      const double split = o_.split.value_or(0.5 * (C.t_begin() + C.t_end()));
      return report(verify_concat(f(), C, split, params_, cfg));
    }
    throw InputError("unknown verify target '" + t + "'");
  }

  int verify_all() {
    if (o_.suite != "paper") throw InputError("verify all needs --suite paper");
    ojson cases = ojson::array();
    bool all = true;
    for (const auto& c : run_reference_suite(quad(false))) {
      all = all && c.passed;
      cases.push_back(ojson{{"name", c.name},
                            {"passed", c.passed},
                            {"error", c.error},
                            {"tolerance", c.tolerance},
                            {"detail", c.detail}});
    }
    diagnostics()["case_count"] = cases.size();
    results()["cases"] = std::move(cases);
    return set_passed(all);
  }

  const Options& o_;
  Params params_;
  std::uint64_t digest_ = 0;
  ojson record_;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--f", o.f, "Function expression in z");
  sub->add_option("--param", o.params, "Parameter binding NAME=COMPLEX (repeatable)");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--tol", o.tol, "Check tolerance (quadrature tolerance for integrals)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--panels", o.panels, "Initial quadrature panels")->check(CLI::PositiveNumber);
  sub->add_option("--order", o.order, "Gauss-Legendre order")->check(CLI::PositiveNumber);
}

void add_curve(CLI::App* sub, Options& o) {
  sub->add_option("--curve", o.curve, "Curve JSON, inline or a file path");
}

void add_point(CLI::App* sub, Options& o) { sub->add_option("--z", o.z, "Point a+bi"); }

void add_cr(CLI::App* sub, Options& o) {
  sub->add_option("--r", o.r, "Radius for the polar form");
  sub->add_option("--theta", o.theta, "Angle for the polar form");
  sub->add_option("--step", o.h, "Finite-difference step")->check(CLI::PositiveNumber);
}

}  // namespace

Complex parse_complex(std::string_view text) {
  static const std::string num = R"(((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";
  static const std::regex full("^([+-]?" + num + ")([+-])(" + num + ")?i$");
  static const std::regex real_only("^([+-]?" + num + ")$");
  static const std::regex imag_only("^([+-]?)(" + num + ")?i$");

  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InputError("empty complex number");

  std::smatch m;
  auto coef = [](const std::ssub_match& digits) {
    return digits.matched ? std::stod(digits.str()) : 1.0;
  };
  if (std::regex_match(s, m, full)) {
    const double im = coef(m[4]);
    return {std::stod(m[1].str()), m[3].str() == "-" ? -im : im};
  }
  if (std::regex_match(s, m, real_only)) return {std::stod(m[1].str()), 0.0};
  if (std::regex_match(s, m, imag_only)) {
    const double im = coef(m[2]);
    return {0.0, m[1].str() == "-" ? -im : im};
  }
  Expr e = parse(s);
  if (!free_parameters(e).empty()) throw InputError("'" + s + "' is not a complex constant");
  // The variable must not appear either; evaluating at NaN exposes it.
  try {
    return evaluate(e, Complex(NAN, NAN));
  } catch (const DomainError&) {
    throw InputError("'" + s + "' is not a complex constant");
  }
}

std::string emit_report(const ojson& record, Format format) {
  if (format == Format::json) return record.dump(2) + "\n";
  std::ostringstream os;
  for (const auto& [key, v] : record.items()) {
    if (key == "format_version") continue;
    if (key == "command") {
      os << "command: " << v["name"].get<std::string>() << '\n';
      continue;
    }
    render_text(key, v, os);
  }
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app("Multiplicative calculus for complex functions", "mulcalc");
  app.require_subcommand(1);

  auto* sd = app.add_subcommand("star-deriv", "*derivative exp(f'/f) at a point");
  add_common(sd, o);
  add_point(sd, o);

  auto* sdn = app.add_subcommand("star-deriv-n", "n-th *derivative at a point");
  add_common(sdn, o);
  add_point(sdn, o);
  sdn->add_option("--n", o.n, "Order")->check(CLI::PositiveNumber);

  auto* cr = app.add_subcommand("cr-check", "Cauchy-Riemann *conditions by finite differences");
  add_common(cr, o);
  add_point(cr, o);
  add_cr(cr, o);

  auto* li = app.add_subcommand("line-int", "Line *integral of a positive field");
  add_common(li, o);
  add_curve(li, o);
  li->add_option("--measure", o.measure, "ds, dx or dy")->check(CLI::IsMember({"ds", "dx", "dy"}));

  auto* di = app.add_subcommand("double-int", "Double *integral over a rectangle");
  add_common(di, o);
  di->add_option("--rect", o.rect, "x0,x1,y0,y1 (default 0,1,0,1)");

  auto* ci = app.add_subcommand("complex-int", "Multi-valued complex *integral along a curve");
  add_common(ci, o);
  add_curve(ci, o);
  ci->add_option("--branches", o.branches, "Show branches -k..k (default 2)");
  ci->add_option("--anchor-offset", o.anchor_offset, "Start on Log f(z(a)) + 2 pi i k");
  ci->add_option("--dump-samples", o.dump_samples, "Write (t, z, log f) samples as CSV");

  auto* vf = app.add_subcommand("verify", "Check an identity numerically");
  vf->add_option("target", o.target, "Identity to check")
      ->required()
      ->check(CLI::IsMember({"ftc", "closed", "concat", "product", "division", "reverse", "power",
                             "ftc-line", "green", "cr", "all"}));
  add_common(vf, o);
  add_curve(vf, o);
  add_point(vf, o);
  add_cr(vf, o);
  vf->add_option("--g", o.g, "Second function");
  vf->add_option("--n", o.n, "Power for the power check")->check(CLI::NonNegativeNumber);
  vf->add_option("--branches", o.branches, "Branch search range (default 5)");
  vf->add_option("--split", o.split, "Split parameter for the concatenation check");
  vf->add_option("--rect", o.rect, "x0,x1,y0,y1 for the Green check");
  vf->add_option("--suite", o.suite, "Corpus for 'verify all'")->check(CLI::IsMember({"paper"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  for (auto* sub : app.get_subcommands()) o.command = sub->get_name();

  try {
    Runner runner(o, args);
    int code = runner.execute();
    out << emit_report(runner.record(), o.format == "json" ? Format::json : Format::text);
    return code;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace mulcalc::cli
