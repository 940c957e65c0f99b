#include <cmath>

#include "doctest.h"
#include "moebius_lab/lorentz.hpp"

using namespace moebius_lab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

VectorXd random_vector(int d, Rng& rng, double scale = 1.0) {
  VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = scale * rng.normal();
  return v;
}

SpherePoint random_sphere_point(int d, Rng& rng) {
  return SpherePoint::from(random_vector(d, rng).normalized());
}

}  // namespace

TEST_CASE("lorentz_inner basics") {
  CHECK(lorentz_inner(vec({1, 0, 0}), vec({1, 0, 0})) == -1.0);
  CHECK(lorentz_inner(vec({1, 1, 0}), vec({1, 1, 0})) == 0.0);
  // -(1)(1) + (-1)(1) = -2
  CHECK(lorentz_inner(vec({1, -1, 0}), vec({1, 1, 0})) == -2.0);
  CHECK_THROWS_AS(lorentz_inner(vec({1, 0}), vec({1, 0, 0})), Error);
}

TEST_CASE("causal type is stable under positive scaling") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const VectorXd v = random_vector(5, rng);
    const CausalType t = causal_type(v);
    CHECK(causal_type(3.7 * v) == t);
    CHECK(causal_type(1e-3 * v) == t);
  }
  CHECK(causal_type(vec({2, 2, 0})) == CausalType::Null);
  CHECK(causal_type(vec({2, 1, 0})) == CausalType::Timelike);
  CHECK(causal_type(vec({1, 2, 0})) == CausalType::Spacelike);
}

TEST_CASE("group membership flags") {
  Membership id = check_group_membership(MatrixXd::Identity(4, 4));
  CHECK(id.is_lorentz);
  CHECK(id.is_orthochronous);
  CHECK(id.max_residual == 0.0);
  Membership rev = check_group_membership(lorentz_metric(4));
  CHECK(rev.is_lorentz);
  CHECK_FALSE(rev.is_orthochronous);
  CHECK(rev.max_residual == 0.0);
  MatrixXd bad = MatrixXd::Identity(4, 4);
  bad(1, 2) = 0.1;
  CHECK_FALSE(check_group_membership(bad).is_lorentz);
}

TEST_CASE("random Lorentz matrices preserve the form and the future cone") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const MatrixXd t = random_lorentz(5, rng);
    const Membership m = check_group_membership(t);
    CHECK(m.is_orthochronous);
    const VectorXd a = random_vector(5, rng), b = random_vector(5, rng);
    const double scale = (t * a).norm() * (t * b).norm() + a.norm() * b.norm();
    CHECK(std::abs(lorentz_inner(t * a, t * b) - lorentz_inner(a, b)) <= 1e-10 * scale);
    VectorXd z(5);
    z << 0.0, random_vector(4, rng);
    z[0] = z.tail(4).norm();
    CHECK((t * z)[0] > 0.0);
    const LorentzMatrix lt(t);
    CHECK((lt * lt.inverse()).matrix().isIdentity(1e-10));
  }
}

TEST_CASE("moebius action: identity, rotations, homomorphism") {
  Rng rng(3);
  const int d = 4;
  for (int trial = 0; trial < 20; ++trial) {
    const SpherePoint x = random_sphere_point(d, rng);
    CHECK((moebius_action(LorentzMatrix::identity(d + 1), x).coords() - x.coords()).norm() <
          1e-15);
    MatrixXd rot = MatrixXd::Identity(d + 1, d + 1);
    const MatrixXd q = random_orthogonal(d, rng, false);
    rot.bottomRightCorner(d, d) = q;
    CHECK((moebius_action(LorentzMatrix(rot), x).coords() - q * x.coords()).norm() < 1e-13);
    const LorentzMatrix t1(random_lorentz(d + 1, rng)), t2(random_lorentz(d + 1, rng));
    const VectorXd lhs = moebius_action(t1 * t2, x).coords();
    const VectorXd rhs = moebius_action(t1, moebius_action(t2, x)).coords();
    CHECK((lhs - rhs).norm() <= 1e-10);
    // The linear action on the light-cone lift agrees with Psi.
    const VectorXd lifted = t1 * light_cone_lift(x);
    CHECK((lifted.tail(d) / lifted[0] - moebius_action(t1, x).coords()).norm() < 1e-12);
  }
  CHECK_THROWS_AS(moebius_action(LorentzMatrix(lorentz_metric(d + 1)), random_sphere_point(d, rng)),
                  Error);
}

TEST_CASE("inverse stereographic projection") {
  const SpherePoint north = inv_stereographic(VectorXd::Zero(3));
  CHECK((north.coords() - vec({1, 0, 0, 0})).norm() == 0.0);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const VectorXd u = random_vector(3, rng, 2.0);
    const SpherePoint x = inv_stereographic(u);
    CHECK(std::abs(x.coords().norm() - 1.0) < 1e-14);
    CHECK((stereographic(x) - u).norm() <= 1e-12 * std::max(1.0, u.norm()));
    // |d sigma(v)| = 2/(1+|u|^2) |v|, by a central difference oracle.
    const VectorXd v = random_vector(3, rng).normalized();
    const double h = 1e-6;
    const VectorXd dx = (inv_stereographic(VectorXd(u + h * v)).coords() -
                         inv_stereographic(VectorXd(u - h * v)).coords()) /
                        (2 * h);
    CHECK(dx.norm() == doctest::Approx(stereographic_conformal_factor(u)).epsilon(1e-8));
  }
  const VectorXd unit = random_vector(3, rng).normalized();
  CHECK(std::abs(inv_stereographic(unit).coords()[0]) < 1e-15);
}

TEST_CASE("tau maps the hyperboloid into the upper cap of the sphere") {
  const SpherePoint x0 = hyperboloid_to_sphere(HyperbolicPoint::from(vec({1, 0, 0})));
  CHECK((x0.coords() - vec({1, 0, 0})).norm() == 0.0);
  const double t = 0.9;
  const SpherePoint xt =
      hyperboloid_to_sphere(HyperbolicPoint::from(vec({std::cosh(t), std::sinh(t), 0})));
  CHECK((xt.coords() - vec({1 / std::cosh(t), std::tanh(t), 0})).norm() < 1e-15);
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const VectorXd w = random_vector(3, rng, 3.0);
    VectorXd y(4);
    y << std::sqrt(1 + w.squaredNorm()), w;
    const SpherePoint x = hyperboloid_to_sphere(HyperbolicPoint::from(y));
    CHECK(std::abs(x.coords().norm() - 1.0) < 1e-14);
    CHECK(x.coords()[0] > 0.0);
  }
  CHECK_THROWS_AS(HyperbolicPoint::from(vec({-1, 0, 0})), Error);
}

TEST_CASE("moebius inversion through an exterior point") {
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const VectorXd o = random_vector(3, rng).normalized() * (1.2 + rng.uniform() * 2.0);
    const SpherePoint p = random_sphere_point(3, rng);
    if (std::abs(p.coords().dot(o) - 1.0) < 0.05) continue;
    const SpherePoint q = moebius_inversion(o, p);
    CHECK(std::abs(q.coords().norm() - 1.0) < 1e-12);
    // o, p, q collinear
    const VectorXd a = p.coords() - o, b = q.coords() - o;
    CHECK(std::abs(a.dot(b) - a.norm() * b.norm()) < 1e-10 * a.norm() * b.norm());
    CHECK((moebius_inversion(o, q).coords() - p.coords()).norm() < 1e-10);
  }
  // Line through the center: o = (2,0,0), p = (1,0,0) -> second root of
  // |o + t(p - o)|^2 = 1 is t = 3, i.e. (-1, 0, 0).
  const SpherePoint q = moebius_inversion(vec({2, 0, 0}), SpherePoint::from(vec({1, 0, 0})));
  CHECK((q.coords() - vec({-1, 0, 0})).norm() < 1e-14);
}

TEST_CASE("moebius inversion approaches the identity on the polar circle") {
  // n = 1: o = (2, 0); the polar circle meets S^1 where x . o = 1, i.e. x0 = 1/2.
  const VectorXd o = vec({2, 0});
  const double a0 = std::acos(0.5);
  CHECK_THROWS_AS(moebius_inversion(o, SpherePoint::from(vec({std::cos(a0), std::sin(a0)}))),
                  Error);
  double previous = 1e9;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const VectorXd p = vec({std::cos(a0 + eps), std::sin(a0 + eps)});
    const double gap = (moebius_inversion(o, SpherePoint::from(p)).coords() - p).norm();
    CHECK(gap < previous);
    CHECK(gap < 10.0 * eps);
    previous = gap;
  }
}

TEST_CASE("boost_to maps e0 onto the hyperboloid point") {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const VectorXd v = random_vector(3, rng, 2.0);
    const MatrixXd b = boost_to(v);
    CHECK(check_group_membership(b).is_orthochronous);
    VectorXd y(4);
    y << std::sqrt(1 + v.squaredNorm()), v;
    CHECK((b.col(0) - y).norm() < 1e-12 * y.norm());
  }
}
