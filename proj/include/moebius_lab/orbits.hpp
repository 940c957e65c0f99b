#pragma once

// Orbits of sampled subgroups of O+(n+2,1): homogeneity of a family's light-cone
// lift, common eigenvectors, and the fixed point / totally geodesic /
// horosphere classification with re-verified witnesses.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "moebius_lab/families.hpp"
#include "moebius_lab/lorentz.hpp"

namespace moebius_lab {

struct GroupSample {
  std::vector<LorentzMatrix> elements;
  int dim_ambient = 0;

  /// Throws InvalidParameter if the list is empty, sizes differ, or an
  /// element fails the membership check.
  static GroupSample from(std::vector<LorentzMatrix> elements);
};

/// `count` group elements of the family at seeded parameters in its domain.
GroupSample sample_family_group(const ExampleFamily& fam, std::size_t count, std::uint64_t seed);

/// Unit Euclidean norm, first nonzero coordinate positive.
Eigen::VectorXd projective_normalize(const Eigen::VectorXd& v);

/// Max over (p, q) of |dir(T(q) T(p)^{-1} Y(p)) - dir(Y(q))|.
double verify_homogeneity(const ExampleFamily& fam,
                          const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs);
/// Same with `pairs` seeded pairs of parameters in the family's domain.
double verify_homogeneity(const ExampleFamily& fam, std::size_t pairs, std::uint64_t seed);

struct CommonEigenvector {
  Eigen::VectorXd vector;
  std::vector<double> eigenvalues;  ///< one per element
  CausalType type = CausalType::Spacelike;
};

struct CommonEigenspace {
  Eigen::MatrixXd basis;  ///< Euclidean-orthonormal columns
  std::vector<double> eigenvalues;
};

/// Intersections of real eigenspaces across all elements. Eigenvalues of one
/// element closer than `cluster_tol` (relative) are merged and replaced by
/// their mean, which absorbs the splitting of Jordan blocks.
std::vector<CommonEigenspace> common_eigenspaces(const GroupSample& gs, double cluster_tol = 1e-4);

/// Basis vectors of each common eigenspace, diagonalizing the Lorentz form on
/// it so that each vector has a definite causal type.
std::vector<CommonEigenvector> common_eigenvectors(const GroupSample& gs, double cluster_tol = 1e-4);

struct OrbitCase {
  OrbitTag tag = OrbitTag::Undetermined;
  /// FixedPoint: q with <q,q> = -1, q_0 > 0. Horosphere: null z, unit norm,
  /// first coordinate positive. TotallyGeodesic: orthonormal basis of V.
  Eigen::MatrixXd witness;
  /// Max over elements of the certificate defect divided by max|T_ij|.
  double certificate_residual = 0.0;
  std::string note;
};

/// Scaled certificate threshold.
inline constexpr double kCertificateTolerance = 1e-8;

OrbitCase classify_orbit_case(const GroupSample& gs);

/// Recomputes the certificate residual of `oc` against every element in `gs`.
double certificate_residual(const OrbitCase& oc, const GroupSample& gs);

/// <y, z>: constant on each horosphere centered at the boundary point of z.
/// Throws NotNull if z is not null.
double horosphere_level(const Eigen::VectorXd& z, const HyperbolicPoint& y);

}  // namespace moebius_lab
