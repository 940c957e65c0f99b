#include "moebius_lab/errors.hpp"

namespace moebius_lab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::InvalidParameter: return "invalid_parameter";
    case ErrorCode::ThroughInfinity: return "through_infinity";
    case ErrorCode::DegenerateConfiguration: return "degenerate_configuration";
    case ErrorCode::OutsideDomain: return "outside_domain";
    case ErrorCode::RankDeficient: return "rank_deficient";
    case ErrorCode::NotPositiveDefinite: return "not_positive_definite";
    case ErrorCode::Umbilic: return "umbilic";
    case ErrorCode::TooFewCurvatures: return "too_few_curvatures";
    case ErrorCode::RequiresAnalyticChart: return "requires_analytic_chart";
    case ErrorCode::NotNull: return "not_null";
    case ErrorCode::UnknownFamily: return "unknown_family";
    case ErrorCode::MissingGroup: return "missing_group";
  }
  return "unknown";
}

}  // namespace moebius_lab
