#pragma once

// Moebius invariants of umbilic-free hypersurfaces: the conformal factor rho,
// the position vector Y, the Moebius metric g, the moving frame
// {Y, N, Y_i, xi}, the tensors B, C, A, Moebius principal curvatures and
// curvature ratios, the connection and curvature of g, and the residuals of
// the integrability conditions.
//
// Everything derivative-based is computed from Taylor expansions of the chart
// (order 6 by default), so the only approximation is floating point.

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "moebius_lab/diffgeo.hpp"

namespace moebius_lab {

struct MoebiusOptions {
  /// Umbilic if |II|^2 - n H^2 < umbilic_threshold * (1 + |II|^2).
  double umbilic_threshold = 1e-10;
  double rel_gap = kDefaultRelGap;
  /// Taylor order of the chart expansion; 6 is the minimum for the
  /// derivative of A.
  int jet_order = 6;
};

inline constexpr const char* kOrientationConvention =
    "normal chosen so that (d_1 x, ..., d_n x, normal[, x]) is positively oriented; "
    "xi = (H, H x + normal)";

/// Sign relating Euclidean-route and sphere-route B, C, xi for dimension n:
/// sigma preserves the chosen orientation convention iff n is odd.
int stereographic_orientation_sign(int n);

// ---------------------------------------------------------------------------
// Pointwise quantities that need only second-order jets. These also work for
// finite-difference charts.

double conformal_factor(const Chart& chart, const std::vector<double>& p,
                        const MoebiusOptions& opts = {});
Eigen::VectorXd moebius_position(const Chart& chart, const std::vector<double>& p,
                                 const MoebiusOptions& opts = {});
/// g = rho^2 I in the chart coordinates.
Eigen::MatrixXd moebius_metric(const Chart& chart, const std::vector<double>& p,
                               const MoebiusOptions& opts = {});

// ---------------------------------------------------------------------------

struct MoebiusFrame {
  std::vector<double> basepoint;
  double rho = 0.0;
  Eigen::VectorXd Y;
  Eigen::VectorXd N;
  Eigen::VectorXd xi;
  Eigen::MatrixXd Yi;              ///< column i = Y_i = E_i(Y)
  Eigen::MatrixXd frame_pullback;  ///< column i = E_i in chart coordinates
  bool gauge_degenerate = false;   ///< a multiple B-class had scalar A
};

struct ConnectionData {
  int n = 0;
  std::vector<double> christoffel;  ///< Gamma^a_bc at [(a*n + b)*n + c]
  std::vector<double> omega;        ///< omega_ij(E_k) at [(i*n + j)*n + k]
  std::vector<double> riemann;      ///< frame R_ijkl at [((i*n + j)*n + k)*n + l]
  double s = 0.0;                   ///< sum_{ij} R_ijij / (n(n-1))

  double christoffel_at(int a, int b, int c) const { return christoffel[(a * n + b) * n + c]; }
  double omega_at(int i, int j, int k) const { return omega[(i * n + j) * n + k]; }
  double riemann_at(int i, int j, int k, int l) const {
    return riemann[((i * n + j) * n + k) * n + l];
  }
};

struct CurvatureRatio {
  int i = 0, j = 0, k = 0;  ///< 1-based class indices
  double value = 0.0;
};

struct InvariantReport {
  int n = 0;
  std::string ambient;  ///< route the invariants were computed on
  double rho = 0.0;
  double H = 0.0;
  Eigen::VectorXd lambda;  ///< classical principal curvatures, ascending
  Eigen::MatrixXd B;
  Eigen::VectorXd C;      ///< Moebius form from rho, H and the second fundamental form
  Eigen::VectorXd C_alt;  ///< <dN(E_i), xi>
  Eigen::MatrixXd A;      ///< symmetrized <dN(E_i), Y_j>
  Eigen::VectorXd b;      ///< Moebius principal curvatures, ascending
  DistinctClasses classes;
  std::vector<CurvatureRatio> M;
  double s = 0.0;
  std::map<std::string, double> residuals;
  std::string gauge;
  bool gauge_degenerate = false;
  std::string conventions = kOrientationConvention;

  MoebiusFrame frame;
  ConnectionData connection;
};

/// Runs the full pipeline at p. Requires an analytic chart.
InvariantReport analyze_point(const Chart& chart, const std::vector<double>& p,
                              const MoebiusOptions& opts = {});

MoebiusFrame build_frame(const Chart& chart, const std::vector<double>& p,
                         const MoebiusOptions& opts = {});
/// B_ij = rho^{-1}(II - H I)(e_i, e_j) with e_i = rho E_i.
Eigen::MatrixXd tensor_B(const MoebiusFrame& frame, const PointGeometry& geometry);
Eigen::VectorXd form_C(const Chart& chart, const std::vector<double>& p,
                       const MoebiusOptions& opts = {});
Eigen::MatrixXd tensor_A(const Chart& chart, const std::vector<double>& p,
                         const MoebiusOptions& opts = {});
ConnectionData connection_and_curvature(const Chart& chart, const std::vector<double>& p,
                                        const MoebiusOptions& opts = {});
std::map<std::string, double> integrability_residuals(const Chart& chart,
                                                       const std::vector<double>& p,
                                                       const MoebiusOptions& opts = {});

struct MoebiusCurvatures {
  Eigen::VectorXd values;  ///< ascending
  DistinctClasses classes;
};

MoebiusCurvatures moebius_principal_curvatures(const Eigen::MatrixXd& B,
                                               double rel_gap = kDefaultRelGap);

/// (b_i - b_j) / (b_i - b_k) over every ordered triple of distinct class
/// representatives, in lexicographic order. Throws TooFewCurvatures if r < 3.
std::vector<CurvatureRatio> moebius_curvature_ratios(const std::vector<double>& sorted,
                                                     double rel_gap = kDefaultRelGap);

}  // namespace moebius_lab
