#pragma once

// Homogeneous example families: charts with exact jets, explicit group
// elements carrying the base point to every chart point, and the values the
// invariants are expected to take.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "moebius_lab/diffgeo.hpp"
#include "moebius_lab/lorentz.hpp"

namespace moebius_lab {

enum class OrbitTag { FixedPoint, TotallyGeodesic, Horosphere, Undetermined };

const char* orbit_tag_name(OrbitTag tag);

struct FamilyExpectations {
  std::optional<int> r;
  std::optional<bool> C_zero;
  std::optional<OrbitTag> orbit_case;
  /// Sorted Moebius principal curvatures for one orientation; the other
  /// orientation gives the negated, reversed list.
  std::vector<double> b;
};

struct ExampleFamily {
  std::string name;
  Chart chart;
  /// T(q) with T(q) Y(p0) proportional to Y(q), and T(p0) = identity.
  std::function<LorentzMatrix(const std::vector<double>&)> group_element;
  std::vector<double> base_point;
  Eigen::VectorXd base_Y;
  FamilyExpectations expected;
};

// ---------------------------------------------------------------------------
// Group builders.

/// Lift of the similarity f -> lambda R f + b of R^{d} to O+(d+1, 1), acting on
/// ((1+|f|^2)/2, (1-|f|^2)/2, f).
Eigen::MatrixXd similarity_matrix(double lambda, const Eigen::MatrixXd& rotation,
                                  const Eigen::VectorXd& translation);

/// The translation-rotation matrix with blocks built from u in R^m and Q in
/// O(n-m+1), entry for entry as printed for the cylinder group. It fixes the
/// null direction (1, 1, 0, ..., 0).
Eigen::MatrixXd g_r(const Eigen::VectorXd& u, const Eigen::MatrixXd& q);

/// block diag(boost in O+(m,1), 1, Q in O(n-m+1)).
Eigen::MatrixXd g_h(const Eigen::MatrixXd& boost, const Eigen::MatrixXd& q);

/// block diag(L in O+(n-m,1), G in O(m+2)).
Eigen::MatrixXd g_c(const Eigen::MatrixXd& lorentz_block, const Eigen::MatrixXd& base);

/// The log-spiral group element, entry for entry; n = 1 + y.size().
Eigen::MatrixXd g_e(double c, double s, const Eigen::VectorXd& y);

/// Givens rotation in the (i, i+1) plane of R^dim.
Eigen::MatrixXd givens(int dim, int i, double angle);

/// R(a) = R_{k-1,k}(a_k) ... R_{0,1}(a_1) in SO(k+1); R(a) e_0 is the
/// hyperspherical point with angles a.
Eigen::MatrixXd hyperspherical_rotation(const std::vector<double>& angles);

// ---------------------------------------------------------------------------
// Families.

/// S^k(r) x S^{n-k}(sqrt(1-r^2)) in S^{n+1}.
ExampleFamily make_torus(int n, int k, double r);
/// S^k(1) x R^{n-k} in R^{n+1}; parameters are the n-k translations, then the
/// k sphere angles.
ExampleFamily make_cylinder(int n, int k);
/// tau of S^k(r) x H^{n-k}(sqrt(1+r^2)) in H^{n+1}; parameters are the n-k
/// hyperboloid coordinates, then the k sphere angles.
ExampleFamily make_hyperbolic_cylinder(int n, int k, double r);
/// f(t, y, p) = (y, t u(p)) over a sphere-ambient family u in S^{m+1}.
ExampleFamily make_cone(const ExampleFamily& base, int n);
/// f(s, y) = (e^{cs} cos s, e^{cs} sin s, y).
ExampleFamily make_log_spiral_cylinder(int n, double c);
/// S^k(r) x S^{m-k}(sqrt(1-r^2)) in S^{m+1}.
ExampleFamily make_clifford_torus(int m, double r, int k = 1);

/// Parses selectors such as "torus:n=2:k=1:r=0.6", "cylinder:n=3:k=1",
/// "hypcyl:n=3:k=1:r=1", "cone:clifford:m=2:n=3", "logspiral:n=2:c=1",
/// "clifford:m=2". Throws UnknownFamily or InvalidParameter.
ExampleFamily make_family(const std::string& selector);

/// Selectors covering every family, as used by the verification suite.
std::vector<std::string> standard_selectors();

}  // namespace moebius_lab
