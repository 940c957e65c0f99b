#pragma once

#include <stdexcept>
#include <string>

namespace moebius_lab {

enum class ErrorCode {
  DimensionMismatch,
  InvalidParameter,
  ThroughInfinity,        // Moebius action denominator vanishes
  DegenerateConfiguration,
  OutsideDomain,          // point (or FD stencil) leaves the chart box
  RankDeficient,          // Jacobian is not an immersion
  NotPositiveDefinite,
  Umbilic,
  TooFewCurvatures,
  RequiresAnalyticChart,
  NotNull,
  UnknownFamily,
  MissingGroup,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace moebius_lab
