#pragma once

// Machine-readable reports for the command-line front end. Reports are
// self-contained: every verdict is recomputable from the stored numbers.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "moebius_lab/verification.hpp"

namespace moebius_lab {

inline constexpr const char* kToolName = "moebius-lab";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchema = "moebius-lab/1";

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string family;
  std::size_t samples = 50;
  std::uint64_t seed = 1;
  Tolerances tol;
  unsigned workers = 0;
};

/// Per-point invariants, aggregates, orbit block and verdicts. Sets `pass`
/// to whether every verdict holds.
Json invariants_report(const RunConfig& cfg, bool& pass);
/// Orbit classification of `samples` group elements plus the homogeneity
/// residual over `samples` parameter pairs.
Json orbit_report(const RunConfig& cfg, bool& pass);
Json verify_all_report(const VerifyConfig& cfg, const std::vector<CriterionResult>& results);

/// Compact JSON with floats printed as %.17g (non-finite values become null).
std::string to_json_text(const Json& j);

/// One row per (point, invariant, component) from an invariants report:
/// point_index,invariant,component,value.
std::string invariants_csv(const Json& report);
/// One row per check: criterion,check,value,relation,tolerance,pass.
std::string verify_all_csv(const Json& report);
/// Orbit reports as rows of section,name,component,value.
std::string orbit_csv(const Json& report);

}  // namespace moebius_lab
