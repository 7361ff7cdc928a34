#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ggse {

enum class Errc {
  // input / validation
  UnknownNode,
  NegativeWeight,
  SelfLoop,
  IsolatedNode,
  DimensionMismatch,
  NonBinarySelection,
  EmptyFocus,
  InvalidSchedule,
  IndexOutOfRange,
  TooManyClusters,
  InvalidArgument,
  EmptyGraph,
  Parse,
  Io,
  // numerical
  NotSymmetric,
  NotPSD,
  SpectralRadiusExceeded,
  EigenvalueOutOfRange,
  DegenerateTarget,
  NoConvergence,
};

std::string_view errc_name(Errc code) noexcept;

/// True for failures of the numerical kind (as opposed to bad input or
/// configuration). The CLI maps these to exit code 3.
bool is_numerical(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace ggse
