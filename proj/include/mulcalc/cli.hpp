#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mulcalc/expr.hpp"

namespace mulcalc::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsageError = 2,
  kNumericalError = 3,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a+bi", "a", "bi", "-i", ...; anything else is read as a constant expression.
Complex parse_complex(std::string_view text);

enum class Format { text, json };

// Renders a report object. Complex values are {"re", "im"} objects; a
// "branches" array of {"n", "value"} becomes one "I*[n]: ..." line per entry.
std::string emit_report(const nlohmann::ordered_json& record, Format format);

}  // namespace mulcalc::cli
