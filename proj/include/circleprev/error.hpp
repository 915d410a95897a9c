#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circleprev {

enum class Errc {
  kOrderOutOfRange,
  kRegularityMismatch,
  kInvalidLifting,
  kInvalidArgument,
  kDegenerateComposition,
  kIdentityHasAllFixedPoints,
  kNotADiffeo,
  kNotADiffeoPath,
  kSigmaZero,
  kWindowOutsideDomain,
  kZeroLambdaDerivative,
  kLengthMismatch,
  kSchema,
};

std::string_view errc_name(Errc code);

// Every failure raised by the library carries one of the codes above; the CLI
// maps them onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace circleprev
