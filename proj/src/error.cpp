#include "ggse/error.hpp"

namespace ggse {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::IsolatedNode: return "IsolatedNode";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonBinarySelection: return "NonBinarySelection";
    case Errc::EmptyFocus: return "EmptyFocus";
    case Errc::InvalidSchedule: return "InvalidSchedule";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::TooManyClusters: return "TooManyClusters";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::Parse: return "Parse";
    case Errc::Io: return "Io";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotPSD: return "NotPSD";
    case Errc::SpectralRadiusExceeded: return "SpectralRadiusExceeded";
    case Errc::EigenvalueOutOfRange: return "EigenvalueOutOfRange";
    case Errc::DegenerateTarget: return "DegenerateTarget";
    case Errc::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

bool is_numerical(Errc code) noexcept {
  switch (code) {
    case Errc::NotSymmetric:
    case Errc::NotPSD:
    case Errc::SpectralRadiusExceeded:
    case Errc::EigenvalueOutOfRange:
    case Errc::DegenerateTarget:
    case Errc::NoConvergence:
      return true;
    default:
      return false;
  }
}

}  // namespace ggse
