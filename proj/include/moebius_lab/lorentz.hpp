#pragma once

// Lorentz linear algebra in R^{d}_1 (first coordinate timelike), the
// conformal maps between the sphere, Euclidean space and hyperbolic space,
// and the action of O+(n+2,1) on the sphere by Moebius transformations.

#include <Eigen/Dense>

#include "moebius_lab/dense.hpp"
#include "moebius_lab/errors.hpp"
#include "moebius_lab/sampling.hpp"

namespace moebius_lab {

/// Membership residual threshold for T I1 T^t = I1, relative to max|T|^2.
inline constexpr double kMembershipTolerance = 1e-9;
/// |<v,v>| <= kNullTolerance * |v|^2 counts as null.
inline constexpr double kNullTolerance = 1e-9;

enum class CausalType { Timelike, Null, Spacelike };

const char* causal_type_name(CausalType t);

double lorentz_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
CausalType causal_type(const Eigen::VectorXd& v, double null_tol = kNullTolerance);

/// diag(-1, 1, ..., 1).
Eigen::MatrixXd lorentz_metric(int dim);

struct Membership {
  bool is_lorentz = false;
  bool is_orthochronous = false;
  double max_residual = 0.0;     ///< max |(T I1 T^t - I1)_ij|
  double scaled_residual = 0.0;  ///< max_residual / max(1, max|T_ij|)^2
};

Membership check_group_membership(const Eigen::MatrixXd& t,
                                  double tol = kMembershipTolerance);

/// A square matrix together with its cached O(n+2,1) membership.
class LorentzMatrix {
 public:
  explicit LorentzMatrix(Eigen::MatrixXd m);
  static LorentzMatrix identity(int dim) { return LorentzMatrix(Eigen::MatrixXd::Identity(dim, dim)); }

  const Eigen::MatrixXd& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  bool is_lorentz() const { return membership_.is_lorentz; }
  bool is_orthochronous() const { return membership_.is_orthochronous; }
  const Membership& membership() const { return membership_; }

  LorentzMatrix operator*(const LorentzMatrix& o) const { return LorentzMatrix(m_ * o.m_); }
  Eigen::VectorXd operator*(const Eigen::VectorXd& v) const { return m_ * v; }
  /// I1 T^t I1.
  LorentzMatrix inverse() const;

 private:
  Eigen::MatrixXd m_;
  Membership membership_;
};

class SpherePoint {
 public:
  /// Validates |x| = 1 within `tol`.
  static SpherePoint from(Eigen::VectorXd x, double tol = 1e-10);
  const Eigen::VectorXd& coords() const { return x_; }
  int dim() const { return static_cast<int>(x_.size()); }

 private:
  explicit SpherePoint(Eigen::VectorXd x) : x_(std::move(x)) {}
  Eigen::VectorXd x_;
};

class HyperbolicPoint {
 public:
  /// Validates <y,y> = -1 within `tol` and y0 > 0.
  static HyperbolicPoint from(Eigen::VectorXd y, double tol = 1e-10);
  const Eigen::VectorXd& coords() const { return y_; }

 private:
  explicit HyperbolicPoint(Eigen::VectorXd y) : y_(std::move(y)) {}
  Eigen::VectorXd y_;
};

// ---------------------------------------------------------------------------
// Conformal maps. Each has a generic form (usable with Taylor scalars) and a
// typed form on validated points.

/// Inverse stereographic projection sigma: R^{n+1} -> S^{n+1}.
template <class S>
Vector<S> inv_stereographic(const Vector<S>& u) {
  S r2 = u[0] * u[0];
  for (std::size_t i = 1; i < u.size(); ++i) r2 += u[i] * u[i];
  const S inv = S(1.0) / (S(1.0) + r2);
  Vector<S> x;
  x.reserve(u.size() + 1);
  x.push_back((S(1.0) - r2) * inv);
  for (const auto& ui : u) x.push_back(2.0 * ui * inv);
  return x;
}

/// tau: H^{n+1} -> S^{n+1}, y -> (1/y0, y1/y0).
template <class S>
Vector<S> hyperboloid_to_sphere(const Vector<S>& y) {
  const S inv = S(1.0) / y[0];
  Vector<S> x;
  x.reserve(y.size());
  x.push_back(inv);
  for (std::size_t i = 1; i < y.size(); ++i) x.push_back(y[i] * inv);
  return x;
}

/// Psi(T)(x) = (Q x + v) / (u x + w) for T = [[w, u], [v, Q]].
template <class S>
Vector<S> moebius_action(const Eigen::MatrixXd& t, const Vector<S>& x) {
  const std::size_t d = x.size();
  S den = S(t(0, 0));
  for (std::size_t j = 0; j < d; ++j) den += t(0, j + 1) * x[j];
  const S inv = S(1.0) / den;
  Vector<S> out;
  out.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    S num = S(t(i + 1, 0));
    for (std::size_t j = 0; j < d; ++j) num += t(i + 1, j + 1) * x[j];
    out.push_back(num * inv);
  }
  return out;
}

SpherePoint inv_stereographic(const Eigen::VectorXd& u);
/// The conformal factor 2/(1+|u|^2) of sigma.
double stereographic_conformal_factor(const Eigen::VectorXd& u);
/// sigma^{-1}(x) = x_hat / (1 + x0); throws at the pole x0 = -1.
Eigen::VectorXd stereographic(const SpherePoint& x);

SpherePoint hyperboloid_to_sphere(const HyperbolicPoint& y);

/// Requires T orthochronous Lorentz; throws ThroughInfinity if u.x + w is
/// below `tol`.
SpherePoint moebius_action(const LorentzMatrix& t, const SpherePoint& x, double tol = 1e-12);

/// Second intersection with the sphere of the line through o (|o| > 1) and p.
/// Throws DegenerateConfiguration when the line is tangent (p on the polar
/// sphere of o, where the map degenerates to the identity).
SpherePoint moebius_inversion(const Eigen::VectorXd& o, const SpherePoint& p,
                              double tangent_tol = 1e-12);

/// The light-cone lift (1, x).
Eigen::VectorXd light_cone_lift(const SpherePoint& x);

// ---------------------------------------------------------------------------
// Random group elements (used by tests, audits and invariance checks).

/// Uniformly distributed orthogonal matrix (QR of a Gaussian matrix);
/// `special` forces determinant +1.
Eigen::MatrixXd random_orthogonal(int dim, Rng& rng, bool special = true);

/// Orthochronous Lorentz matrix from Lorentz Gram-Schmidt on a random basis
/// whose first vector is (1, w) with |w| < spread < 1 (future timelike).
Eigen::MatrixXd random_lorentz(int dim, Rng& rng, double spread = 0.6);

/// Boost in O+(m,1) taking e0 to the hyperboloid point (sqrt(1+|v|^2), v).
Eigen::MatrixXd boost_to(const Eigen::VectorXd& v);

}  // namespace moebius_lab
