#pragma once

// Built-in corpus of worked identities: closed-form *derivatives, the
// constant and Gompertz *integrals, the unit-circle integral of exp(1/z),
// and every structural verifier on a small known-good input.

#include <string>
#include <vector>

#include "mulcalc/quadrature.hpp"

namespace mulcalc {

struct SuiteCase {
  std::string name;
  bool passed = false;
  double error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

std::vector<SuiteCase> run_reference_suite(const QuadratureConfig& cfg = {});

}  // namespace mulcalc
