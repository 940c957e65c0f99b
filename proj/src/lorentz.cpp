#include "moebius_lab/lorentz.hpp"

#include <cmath>
#include <string>

namespace moebius_lab {

const char* causal_type_name(CausalType t) {
  switch (t) {
    case CausalType::Timelike: return "timelike";
    case CausalType::Null: return "null";
    case CausalType::Spacelike: return "spacelike";
  }
  return "?";
}

double lorentz_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw Error(ErrorCode::DimensionMismatch, "lorentz_inner: dimensions " +
                                                  std::to_string(a.size()) + " and " +
                                                  std::to_string(b.size()));
  return -a[0] * b[0] + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

CausalType causal_type(const Eigen::VectorXd& v, double null_tol) {
  const double q = lorentz_inner(v, v);
  if (std::abs(q) <= null_tol * v.squaredNorm()) return CausalType::Null;
  return q < 0 ? CausalType::Timelike : CausalType::Spacelike;
}

Eigen::MatrixXd lorentz_metric(int dim) {
  Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(dim, dim);
  i1(0, 0) = -1.0;
  return i1;
}

Membership check_group_membership(const Eigen::MatrixXd& t, double tol) {
  Membership m;
  if (t.rows() != t.cols() || t.rows() < 2) {
    m.max_residual = m.scaled_residual = std::numeric_limits<double>::infinity();
    return m;
  }
  const Eigen::MatrixXd i1 = lorentz_metric(static_cast<int>(t.rows()));
  m.max_residual = (t * i1 * t.transpose() - i1).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  m.scaled_residual = m.max_residual / (scale * scale);
  m.is_lorentz = m.scaled_residual <= tol;
  m.is_orthochronous = m.is_lorentz && t(0, 0) > 0.0;
  return m;
}

LorentzMatrix::LorentzMatrix(Eigen::MatrixXd m)
    : m_(std::move(m)), membership_(check_group_membership(m_)) {}

LorentzMatrix LorentzMatrix::inverse() const {
  const Eigen::MatrixXd i1 = lorentz_metric(dim());
  return LorentzMatrix(i1 * m_.transpose() * i1);
}

SpherePoint SpherePoint::from(Eigen::VectorXd x, double tol) {
  if (x.size() < 2) throw Error(ErrorCode::DimensionMismatch, "SpherePoint: dimension < 2");
  if (std::abs(x.norm() - 1.0) > tol)
    throw Error(ErrorCode::InvalidParameter, "SpherePoint: |x| != 1");
  return SpherePoint(std::move(x));
}

HyperbolicPoint HyperbolicPoint::from(Eigen::VectorXd y, double tol) {
  if (y.size() < 2) throw Error(ErrorCode::DimensionMismatch, "HyperbolicPoint: dimension < 2");
  if (std::abs(lorentz_inner(y, y) + 1.0) > tol * std::max(1.0, y.squaredNorm()) || y[0] <= 0.0)
    throw Error(ErrorCode::InvalidParameter, "HyperbolicPoint: not on the upper hyperboloid");
  return HyperbolicPoint(std::move(y));
}

namespace {

Vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }
Eigen::VectorXd to_eigen(const Vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

SpherePoint inv_stereographic(const Eigen::VectorXd& u) {
  return SpherePoint::from(to_eigen(inv_stereographic(to_std(u))), 1e-9);
}

double stereographic_conformal_factor(const Eigen::VectorXd& u) {
  return 2.0 / (1.0 + u.squaredNorm());
}

Eigen::VectorXd stereographic(const SpherePoint& x) {
  const auto& c = x.coords();
  if (1.0 + c[0] <= 1e-14) throw Error(ErrorCode::ThroughInfinity, "stereographic: pole");
  return c.tail(c.size() - 1) / (1.0 + c[0]);
}

SpherePoint hyperboloid_to_sphere(const HyperbolicPoint& y) {
  if (y.coords()[0] <= 1e-12)
    throw Error(ErrorCode::InvalidParameter, "hyperboloid_to_sphere: y0 <= 0");
  return SpherePoint::from(to_eigen(hyperboloid_to_sphere(to_std(y.coords()))), 1e-9);
}

SpherePoint moebius_action(const LorentzMatrix& t, const SpherePoint& x, double tol) {
  if (t.dim() != x.dim() + 1)
    throw Error(ErrorCode::DimensionMismatch, "moebius_action: matrix/point dimensions");
  if (!t.is_orthochronous())
    throw Error(ErrorCode::InvalidParameter, "moebius_action: matrix is not in O+(n+2,1)");
  const auto& m = t.matrix();
  const auto& c = x.coords();
  const double den = m(0, 0) + m.row(0).tail(c.size()).dot(c);
  if (std::abs(den) < tol)
    throw Error(ErrorCode::ThroughInfinity, "moebius_action: point maps through infinity of the chart");
  Eigen::VectorXd y = (m.col(0).tail(c.size()) + m.bottomRightCorner(c.size(), c.size()) * c) / den;
  return SpherePoint::from(std::move(y), 1e-8);
}

SpherePoint moebius_inversion(const Eigen::VectorXd& o, const SpherePoint& p, double tangent_tol) {
  const auto& pc = p.coords();
  if (o.size() != pc.size()) throw Error(ErrorCode::DimensionMismatch, "moebius_inversion: dimensions");
  const double o2 = o.squaredNorm();
  if (o2 <= 1.0) throw Error(ErrorCode::InvalidParameter, "moebius_inversion: o inside the unit ball");
  // |o + t (p - o)|^2 = 1 has the root t = 1; the other root is c/a.
  const Eigen::VectorXd d = pc - o;
  const double a = d.squaredNorm();
  const double b = 2.0 * o.dot(d);
  const double c = o2 - 1.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= tangent_tol * b * b)
    throw Error(ErrorCode::DegenerateConfiguration, "moebius_inversion: line through o is tangent");
  Eigen::VectorXd q = o + (c / a) * d;
  q.normalize();  // removes O(eps) drift
  return SpherePoint::from(std::move(q), 1e-8);
}

Eigen::VectorXd light_cone_lift(const SpherePoint& x) {
  Eigen::VectorXd y(x.dim() + 1);
  y << 1.0, x.coords();
  return y;
}

Eigen::MatrixXd random_orthogonal(int dim, Rng& rng, bool special) {
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (special && q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Eigen::MatrixXd random_lorentz(int dim, Rng& rng, double spread) {
  Eigen::MatrixXd basis(dim, dim);
  basis(0, 0) = 1.0;
  for (int i = 1; i < dim; ++i) basis(i, 0) = spread * (2.0 * rng.uniform() - 1.0) / std::sqrt(dim - 1.0);
  for (int j = 1; j < dim; ++j)
    for (int i = 0; i < dim; ++i) basis(i, j) = rng.normal();
  Eigen::MatrixXd e(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd v = basis.col(j);
    for (int k = 0; k < j; ++k) {
      const double sign = (k == 0) ? -1.0 : 1.0;  // <e_k, e_k>
      v -= (lorentz_inner(v, e.col(k)) / sign) * e.col(k);
    }
    const double q = lorentz_inner(v, v);
    if (j == 0) {
      e.col(0) = v / std::sqrt(-q);
    } else {
      if (q <= 1e-12) throw Error(ErrorCode::DegenerateConfiguration, "random_lorentz: degenerate basis");
      e.col(j) = v / std::sqrt(q);
    }
  }
  return e;
}

Eigen::MatrixXd boost_to(const Eigen::VectorXd& v) {
  const int m = static_cast<int>(v.size());
  const double gamma = std::sqrt(1.0 + v.squaredNorm());
  Eigen::MatrixXd b(m + 1, m + 1);
  b(0, 0) = gamma;
  b.block(0, 1, 1, m) = v.transpose();
  b.block(1, 0, m, 1) = v;
  b.bottomRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m) + v * v.transpose() / (1.0 + gamma);
  return b;
}

}  // namespace moebius_lab
