#pragma once

// Multiplicative line and double integrals of positive real fields:
//   int_C g^{dmu} = exp( int_C ln g dmu ),   mu in {s, x, y}
//   iint_D g^{dA} = exp( iint_D ln g dA )

#include <functional>
#include <string_view>

#include "mulcalc/curves.hpp"
#include "mulcalc/expr.hpp"
#include "mulcalc/quadrature.hpp"

namespace mulcalc {

// A positive field g(x, y). The expression sees x and y as parameters and
// the variable bound to x + iy, so "exp(x*y)" and "abs(exp(z))" both work.
// Every evaluation must be real (imaginary dust up to 1e-12 is dropped) and
// strictly positive.
class PositiveField {
 public:
  explicit PositiveField(Expr expr, Params params = {});
  static PositiveField parse(std::string_view source, Params params = {});

  const Expr& expr() const noexcept { return expr_; }
  const Params& params() const noexcept { return params_; }

  double operator()(double x, double y) const;
  double log(double x, double y) const { return std::log((*this)(x, y)); }

 private:
  Expr expr_;
  Params params_;
};

enum class Measure { ds, dx, dy };

using RealField = std::function<double(double x, double y)>;

// int_C h dmu for an arbitrary real integrand.
double line_integral(const RealField& h, const Curve& curve, Measure measure,
                     const QuadratureConfig& cfg = {});

double line_star(const PositiveField& g, const Curve& curve, Measure measure,
                 const QuadratureConfig& cfg = {});
double line_star_ds(const PositiveField& g, const Curve& curve, const QuadratureConfig& cfg = {});
double line_star_dx(const PositiveField& g, const Curve& curve, const QuadratureConfig& cfg = {});
double line_star_dy(const PositiveField& g, const Curve& curve, const QuadratureConfig& cfg = {});

struct Rect {
  double x0 = 0.0, x1 = 1.0;
  double y0 = 0.0, y1 = 1.0;
  void validate() const;
};

// Positively oriented boundary, starting at (x0, y0).
Curve rect_boundary(const Rect& region);

// iint_D h dA by tensor Gauss-Legendre. Starts at max(1, panels / 16) panels
// per axis and doubles.
double double_integral(const RealField& h, const Rect& region, const QuadratureConfig& cfg = {});

double double_star(const PositiveField& g, const Rect& region, const QuadratureConfig& cfg = {});

struct FtcLineReport {
  double lhs = 0.0;  // int_C (F*_x)^{dx} (F*_y)^{dy}
  double rhs = 0.0;  // F(end) / F(start)
  double rel_err = 0.0;
};

struct GreenReport {
  double boundary = 0.0;  // oint_C f^{dx} g^{dy}
  double area = 0.0;      // iint_D (g*_x / f*_y)^{dA}
  double rel_err = 0.0;
};

// Partial *derivatives are taken by central differences with step 1e-6
// (scaled by max(1, |coordinate|)).
FtcLineReport verify_ftc_line(const PositiveField& F, const Curve& curve,
                              const QuadratureConfig& cfg = {});

GreenReport verify_green(const PositiveField& f, const PositiveField& g, const Rect& region,
                         const QuadratureConfig& cfg = {});

}  // namespace mulcalc
