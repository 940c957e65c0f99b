#pragma once

// The acceptance matrix: ten criteria over the example families, each a list
// of named checks against pinned tolerances. Shared by the CLI's verify-all
// and the acceptance test binary.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "moebius_lab/families.hpp"
#include "moebius_lab/moebius.hpp"

namespace moebius_lab {

/// Named tolerances, overridable from the command line as --tol.<name>=value.
class Tolerances {
 public:
  Tolerances();
  static const std::map<std::string, double>& defaults();

  /// Throws InvalidParameter for an unknown name.
  double operator[](const std::string& name) const;
  /// Throws InvalidParameter for an unknown name or a negative/NaN value.
  void set(const std::string& name, double value);
  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// "<=" (value must not exceed tolerance) or ">=" (value must reach it).
  std::string relation = "<=";
  bool pass = false;
  std::string error;  ///< set when the value could not be computed
};

Check make_check(std::string name, double value, double tolerance, std::string relation = "<=");
Check failed_check(std::string name, std::string error);

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  bool pass = false;
  double seconds = 0.0;
};

struct VerifyConfig {
  std::uint64_t seed = 1;
  Tolerances tol;
  unsigned workers = 0;  ///< 0 = worker_count()
};

/// One analyzed sample point; `report` is empty when the pipeline threw.
struct PointResult {
  std::vector<double> params;
  std::optional<InvariantReport> report;
  std::string error;
};

/// Seeded Halton points in the family's domain, analyzed in parallel.
std::vector<PointResult> analyze_samples(const ExampleFamily& fam, std::size_t count,
                                         std::uint64_t seed, unsigned workers = 0,
                                         const MoebiusOptions& opts = {});

/// Max over {b, -reverse(b)} of the distance to `expected` (orientation flip).
double b_distance(const Eigen::VectorXd& b, const std::vector<double>& expected);

/// Residual group a key belongs to: "frame", "trace_B", "norm_B", "trace_A",
/// "gauss", "codazzi", "C_routes" or "structure".
std::string residual_group(const std::string& key);

inline constexpr int kCriterionCount = 10;
const char* criterion_title(int id);
CriterionResult run_criterion(int id, const VerifyConfig& cfg);
std::vector<CriterionResult> run_all_criteria(const VerifyConfig& cfg);

}  // namespace moebius_lab
