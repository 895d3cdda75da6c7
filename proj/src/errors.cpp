#include "mulcalc/errors.hpp"

#include <utility>

namespace mulcalc {

namespace {

std::string describe(const std::string& message, std::size_t offset,
                     const std::vector<std::string>& expected) {
  std::string out = message + " at offset " + std::to_string(offset);
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset,
                       std::vector<std::string> expected)
    : Error(describe(message, offset, expected)), offset_(offset), expected_(std::move(expected)) {}

NotHolomorphicError::NotHolomorphicError(const std::string& node)
    : InputError("not complex-differentiable: '" + node + "' node is not holomorphic"),
      node_(node) {}

}  // namespace mulcalc
