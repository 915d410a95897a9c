#include "circleprev/error.hpp"

namespace circleprev {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kOrderOutOfRange: return "OrderOutOfRange";
    case Errc::kRegularityMismatch: return "RegularityMismatch";
    case Errc::kInvalidLifting: return "InvalidLifting";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kDegenerateComposition: return "DegenerateComposition";
    case Errc::kIdentityHasAllFixedPoints: return "IdentityHasAllFixedPoints";
    case Errc::kNotADiffeo: return "NotADiffeo";
    case Errc::kNotADiffeoPath: return "NotADiffeoPath";
    case Errc::kSigmaZero: return "SigmaZero";
    case Errc::kWindowOutsideDomain: return "WindowOutsideDomain";
    case Errc::kZeroLambdaDerivative: return "ZeroLambdaDerivative";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kSchema: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace circleprev
