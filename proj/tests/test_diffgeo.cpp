#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "moebius_lab/diffgeo.hpp"
#include "moebius_lab/sampling.hpp"

using namespace moebius_lab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Chart linear_chart() {
  return Chart::generic("linear", Ambient::Euclidean, 2, Box{{-1, -1}, {1, 1}},
                        [](const auto& p) {
                          using S = std::decay_t<decltype(p[0])>;
                          return Vector<S>{2.0 * p[0] - p[1], 0.5 * p[1], p[0] + 3.0 * p[1]};
                        });
}

Chart circle_chart() {
  return Chart::generic("circle", Ambient::Euclidean, 1, Box{{-3}, {3}}, [](const auto& p) {
    using std::cos, std::sin;
    using S = std::decay_t<decltype(p[0])>;
    return Vector<S>{cos(p[0]), sin(p[0])};
  });
}

Chart spiral_chart(double c) {
  return Chart::generic("spiral", Ambient::Euclidean, 1, Box{{-2}, {2}}, [c](const auto& p) {
    using std::cos, std::exp, std::sin;
    using S = std::decay_t<decltype(p[0])>;
    const S r = exp(c * p[0]);
    return Vector<S>{r * cos(p[0]), r * sin(p[0])};
  });
}

// Round sphere of radius r in R^3, parameter order (phi, theta) so that the
// oriented normal points inward.
Chart sphere_chart(double r) {
  return Chart::generic("sphere", Ambient::Euclidean, 2, Box{{-3, 0.3}, {3, 2.8}},
                        [r](const auto& p) {
                          using std::cos, std::sin;
                          using S = std::decay_t<decltype(p[0])>;
                          const S& phi = p[0];
                          const S& th = p[1];
                          return Vector<S>{r * sin(th) * cos(phi), r * sin(th) * sin(phi),
                                           r * cos(th)};
                        });
}

// S^1(r) x S^1(sqrt(1 - r^2)) in S^3.
Chart flat_torus(double r, bool swap) {
  const double s = std::sqrt(1 - r * r);
  return Chart::generic("torus", Ambient::Sphere, 2, Box{{-3, -3}, {3, 3}},
                        [r, s, swap](const auto& p) {
                          using std::cos, std::sin;
                          using S = std::decay_t<decltype(p[0])>;
                          const S& a = swap ? p[1] : p[0];
                          const S& b = swap ? p[0] : p[1];
                          return Vector<S>{r * cos(a), r * sin(a), s * cos(b), s * sin(b)};
                        });
}

// Characteristic polynomial of s by Faddeev-LeVerrier, roots via the
// companion matrix.
std::vector<double> companion_roots(const MatrixXd& s) {
  const int n = static_cast<int>(s.rows());
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  MatrixXd m = MatrixXd::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = s * m + c[n - k + 1] * MatrixXd::Identity(n, n);
    c[n - k] = -(s * m).trace() / k;
  }
  MatrixXd comp = MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i];
  Eigen::EigenSolver<MatrixXd> es(comp);
  std::vector<double> roots;
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i].real());
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

TEST_CASE("linear chart has vanishing higher derivatives") {
  const Chart chart = linear_chart();
  for (auto mode : {DerivativeMode::AnalyticJet, DerivativeMode::FiniteDifference}) {
    const JetPoint jet = eval_jet(chart, {0.2, -0.3}, 3, mode);
    for (const auto& v : jet.d2) CHECK(v.norm() < 1e-7);
    for (const auto& v : jet.d3) CHECK(v.norm() < 1e-5);
    CHECK((jet.first(0) - VectorXd::Map(std::vector<double>{2, 0, 1}.data(), 3)).norm() < 1e-9);
  }
  const JetPoint exact = eval_jet(chart, {0.2, -0.3}, 3);
  for (const auto& v : exact.d2) CHECK(v.norm() == 0.0);
}

TEST_CASE("circle chart: second derivative is minus the value") {
  const JetPoint jet = eval_jet(circle_chart(), {0.7}, 2);
  CHECK((jet.second(0, 0) + jet.value).norm() < 1e-15);
  const JetPoint fd = eval_jet(circle_chart(), {0.7}, 2, DerivativeMode::FiniteDifference);
  CHECK((fd.second(0, 0) + fd.value).norm() < 1e-7);
}

TEST_CASE("log spiral: finite differences agree with closed-form derivatives") {
  const double c = 1.0;
  for (double s : {-1.2, -0.3, 0.0, 0.5, 1.1}) {
    const JetPoint fd = eval_jet(spiral_chart(c), {s}, 3, DerivativeMode::FiniteDifference);
    // gamma = Re/Im of exp((c + i) s); k-th derivative = (c + i)^k exp((c + i) s)
    const std::complex<double> w(c, 1.0);
    for (int k = 1; k <= 3; ++k) {
      const std::complex<double> z = std::pow(w, k) * std::exp(w * s);
      const VectorXd& got = k == 1 ? fd.first(0) : k == 2 ? fd.second(0, 0) : fd.third(0, 0, 0);
      const double tol = (k == 1 ? 1e-9 : 1e-7) * std::exp(c * s) * std::pow(std::abs(w), k);
      CHECK(std::abs(got[0] - z.real()) <= tol);
      CHECK(std::abs(got[1] - z.imag()) <= tol);
    }
  }
}

TEST_CASE("finite-difference mode refuses points near the boundary") {
  CHECK_THROWS_AS(eval_jet(spiral_chart(1.0), {1.9999}, 3, DerivativeMode::FiniteDifference),
                  Error);
  CHECK_NOTHROW(eval_jet(spiral_chart(1.0), {1.9999}, 3));
}

TEST_CASE("finite-difference jets agree with analytic jets") {
  Rng rng(17);
  const Chart chart = flat_torus(0.6, false);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const JetPoint a = eval_jet(chart, p, 3);
    const JetPoint f = eval_jet(chart, p, 3, DerivativeMode::FiniteDifference);
    for (std::size_t k = 0; k < a.d1.size(); ++k) CHECK((a.d1[k] - f.d1[k]).norm() <= 1e-9);
    for (std::size_t k = 0; k < a.d2.size(); ++k) CHECK((a.d2[k] - f.d2[k]).norm() <= 1e-7);
    for (std::size_t k = 0; k < a.d3.size(); ++k) CHECK((a.d3[k] - f.d3[k]).norm() <= 1e-5);
    // mixed partial symmetry
    CHECK((f.third(0, 1, 1) - f.third(1, 0, 1)).norm() == 0.0);
  }
}

TEST_CASE("round sphere is umbilic with curvature 1/r for the inward normal") {
  for (double r : {0.5, 2.0}) {
    const PointGeometry g = fundamental_forms(sphere_chart(r), {0.4, 1.1});
    CHECK(g.normal.dot(g.position) < 0.0);
    for (int i = 0; i < 2; ++i)
      CHECK(g.principal_curvatures[i] == doctest::Approx(1.0 / r).epsilon(1e-12));
    CHECK(g.mean_curvature == doctest::Approx(1.0 / r).epsilon(1e-12));
  }
}

TEST_CASE("torus in S^3: principal curvatures and orientation covariance") {
  const double r = 0.6;
  const double k1 = std::sqrt(1 - r * r) / r, k2 = -r / std::sqrt(1 - r * r);
  const PointGeometry g = fundamental_forms(flat_torus(r, false), {0.3, -1.0});
  CHECK(g.principal_curvatures[0] == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(g.principal_curvatures[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(g.principal_curvatures[0] == doctest::Approx(std::min(k1, k2)).epsilon(1e-12));
  const PointGeometry flipped = fundamental_forms(flat_torus(r, true), {-1.0, 0.3});
  CHECK(flipped.principal_curvatures[0] == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));
  CHECK(flipped.principal_curvatures[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(g.normal.dot(g.position)) < 1e-10);
  CHECK(std::abs(g.normal.norm() - 1.0) < 1e-10);
  for (int a = 0; a < 2; ++a) CHECK(std::abs(g.normal.dot(g.tangents.col(a))) < 1e-12);
}

TEST_CASE("principal_decomposition examples") {
  const PrincipalDecomposition zero = principal_decomposition(MatrixXd::Identity(3, 3) * 2.0,
                                                              MatrixXd::Zero(3, 3));
  CHECK(zero.curvatures.cwiseAbs().maxCoeff() == 0.0);
  CHECK((zero.frame.transpose() * 2.0 * zero.frame).isIdentity(1e-12));

  MatrixXd first = MatrixXd::Zero(2, 2), second = MatrixXd::Zero(2, 2);
  first.diagonal() << 1, 4;
  second.diagonal() << 2, 4;
  const PrincipalDecomposition pd = principal_decomposition(first, second);
  CHECK(pd.curvatures[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pd.curvatures[1] == doctest::Approx(2.0).epsilon(1e-14));

  MatrixXd indefinite = MatrixXd::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(principal_decomposition(indefinite, second), Error);
}

TEST_CASE("principal_decomposition matches a characteristic-polynomial oracle") {
  Rng rng(99);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      MatrixXd a(n, n), b(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          a(i, j) = rng.normal();
          b(i, j) = rng.normal();
        }
      const MatrixXd first = a * a.transpose() + 0.5 * MatrixXd::Identity(n, n);
      const MatrixXd second = 0.5 * (b + b.transpose());
      const PrincipalDecomposition pd = principal_decomposition(first, second);
      const std::vector<double> oracle = companion_roots(first.inverse() * second);
      for (int i = 0; i < n; ++i)
        CHECK(std::abs(pd.curvatures[i] - oracle[i]) <= 1e-9 * std::max(1.0, std::abs(oracle[i])));
      CHECK((pd.frame.transpose() * first * pd.frame).isIdentity(1e-9));
      CHECK(pd.curvatures.sum() ==
            doctest::Approx((first.inverse() * second).trace()).epsilon(1e-9));
    }
  }
}

TEST_CASE("group_distinct") {
  std::vector<double> v{-1.0, 0.5, 0.5};
  const DistinctClasses c = group_distinct(v, 1e-6);
  CHECK(c.count == 2);
  CHECK(c.multiplicities == std::vector<int>{1, 2});
  CHECK(c.simple == 1);
  CHECK(group_distinct({0.3, 0.3, 0.3, 0.3}).count == 1);
  CHECK(group_distinct({0.0, 0.0}).count == 1);
  CHECK(group_distinct({-0.5, 0.0, 0.5}).count == 3);
}
