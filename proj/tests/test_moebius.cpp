#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "moebius_lab/errors.hpp"
#include "moebius_lab/families.hpp"
#include "moebius_lab/lorentz.hpp"
#include "moebius_lab/moebius.hpp"
#include "moebius_lab/sampling.hpp"

using namespace moebius_lab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::vector<std::vector<double>> points(const Chart& c, std::size_t count, std::uint64_t seed) {
  return halton_box(c.domain().lo, c.domain().hi, count, seed);
}

VectorXd to_vec(const std::vector<double>& v) { return Eigen::Map<const VectorXd>(v.data(), v.size()); }

// Distance between sorted lists, allowing the orientation flip b -> -reverse(b).
double b_distance(const VectorXd& b, const VectorXd& expected) {
  const VectorXd flipped = -b.reverse();
  return std::min((b - expected).cwiseAbs().maxCoeff(), (flipped - expected).cwiseAbs().maxCoeff());
}

// Two-class b from trace B = 0 and |B|^2 = (n-1)/n with multiplicities (k, n-k).
VectorXd two_class_b(int n, int k) {
  const double hi = std::sqrt((n - 1.0) * (n - k) / (n * n * static_cast<double>(k)));
  const double lo = -k * hi / (n - k);
  VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = i < n - k ? lo : hi;
  std::sort(b.begin(), b.end());
  return b;
}

double max_residual(const InvariantReport& rep) {
  double worst = 0.0;
  for (const auto& [key, value] : rep.residuals) worst = std::max(worst, std::abs(value));
  return worst;
}

// Frame components back to chart coordinates: T_ab = sum_ij T_ij (g E_i)_a (g E_j)_b,
// where g E = E^{-t} because E is g-orthonormal.
MatrixXd coordinate_tensor(const InvariantReport& rep, const MatrixXd& t) {
  const MatrixXd dual = rep.frame.frame_pullback.transpose().inverse();
  return dual * t * dual.transpose();
}

VectorXd coordinate_form(const InvariantReport& rep, const VectorXd& c) {
  return rep.frame.frame_pullback.transpose().inverse() * c;
}

// Chart of the round sphere of radius 2 in R^3; every point is umbilic.
Chart round_sphere() {
  return Chart::generic("sphere", Ambient::Euclidean, 2, Box{{0.5, -3}, {2.6, 3}},
                        [](const auto& p) {
                          using std::cos, std::sin;
                          using S = std::decay_t<decltype(p[0])>;
                          return Vector<S>{2.0 * sin(p[0]) * cos(p[1]), 2.0 * sin(p[0]) * sin(p[1]),
                                           2.0 * cos(p[0])};
                        });
}

}  // namespace

TEST_CASE("orientation sign between routes") {
  CHECK(stereographic_orientation_sign(2) == -1);
  CHECK(stereographic_orientation_sign(3) == 1);
  CHECK(stereographic_orientation_sign(4) == -1);
}

TEST_CASE("torus: two-class curvatures, vanishing form, scalar curvature") {
  for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    CAPTURE(n);
    CAPTURE(k);
    const double r = 0.6, s = 0.8;
    const ExampleFamily fam = make_torus(n, k, r);
    // Classical curvatures s/r (k times) and -r/s; rho^2 from the trace-free norm.
    double h = (k * s / r - (n - k) * r / s) / n;
    double norm2 = k * (s / r) * (s / r) + (n - k) * (r / s) * (r / s);
    const double rho2 = n / (n - 1.0) * (norm2 - n * h * h);
    const double scal =
        (k * (k - 1) / (rho2 * r * r) + (n - k) * (n - k - 1) / (rho2 * s * s)) / (n * (n - 1));
    for (const auto& p : points(fam.chart, 10, 7)) {
      const InvariantReport rep = analyze_point(fam.chart, p);
      CHECK(rep.rho == doctest::Approx(std::sqrt(rho2)).epsilon(1e-10));
      CHECK(b_distance(rep.b, two_class_b(n, k)) < 1e-10);
      CHECK(rep.C.norm() < 1e-10);
      CHECK(rep.C_alt.norm() < 1e-10);
      CHECK(rep.s == doctest::Approx(scal).epsilon(1e-9));
      CHECK(rep.classes.count == 2);
      CHECK(max_residual(rep) < 1e-9);
    }
  }
}

TEST_CASE("cone over the minimal Clifford torus") {
  const ExampleFamily fam = make_family("cone:clifford:m=2:n=3");
  for (const auto& p : points(fam.chart, 10, 3)) {
    const double t = p[0];
    const InvariantReport rep = analyze_point(fam.chart, p);
    // Classical curvatures {0, -1/t, 1/t}, so rho = sqrt(3)/t and b = lambda/rho.
    CHECK(rep.rho == doctest::Approx(std::sqrt(3.0) / t).epsilon(1e-10));
    const double b = 1.0 / std::sqrt(3.0);
    CHECK(b_distance(rep.b, VectorXd{{-b, 0.0, b}}) < 1e-10);
    CHECK(rep.C.norm() < 1e-10);
    CHECK(max_residual(rep) < 1e-9);

    // Y / rho0 = (i(t, 0), u) with the constant rho0 = sqrt(3).
    const VectorXd u = to_vec(make_clifford_torus(2, std::sqrt(0.5)).chart({p[1], p[2]}));
    VectorXd expected(6);
    expected << (1 + t * t) / 2, (1 - t * t) / 2, t * u;
    expected *= std::sqrt(3.0) / t;
    CHECK((rep.frame.Y - expected).norm() < 1e-10 * expected.norm());

    REQUIRE(rep.M.size() == 6);
    CHECK(rep.M[0].i == 1);
    CHECK(rep.M[0].j == 2);
    CHECK(rep.M[0].k == 3);
    CHECK(rep.M[0].value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rep.M[1].value == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("log-spiral cylinder: |C| = c, s = -c^2") {
  // For a plane curve times R^{n-1}, rho is the curve's curvature kappa and
  // C(E_1) = d(1/kappa)/d(arclength), which is c for the log spiral.
  for (int n : {2, 3}) {
    for (double c : {0.5, 1.0}) {
      CAPTURE(n);
      CAPTURE(c);
      const ExampleFamily fam = make_log_spiral_cylinder(n, c);
      for (const auto& p : points(fam.chart, 8, 11)) {
        const InvariantReport rep = analyze_point(fam.chart, p);
        const double kappa = std::exp(-c * p[0]) / std::sqrt(1 + c * c);
        CHECK(rep.rho == doctest::Approx(kappa).epsilon(1e-10));
        CHECK(rep.C.norm() == doctest::Approx(c).epsilon(1e-9));
        CHECK((rep.C - rep.C_alt).norm() < 1e-9);
        CHECK(rep.s == doctest::Approx(-c * c).epsilon(1e-8));
        CHECK(b_distance(rep.b, two_class_b(n, 1)) < 1e-10);
        CHECK(max_residual(rep) < 1e-8);
      }
    }
  }
}

TEST_CASE("hyperbolic cylinder: frame and structure residuals") {
  const ExampleFamily fam = make_family("hypcyl:n=3:k=1:r=1");
  for (const auto& p : points(fam.chart, 8, 5)) {
    const InvariantReport rep = analyze_point(fam.chart, p);
    CHECK(rep.ambient == "sphere");
    CHECK(b_distance(rep.b, two_class_b(3, 1)) < 1e-10);
    CHECK(rep.C.norm() < 1e-10);
    CHECK(max_residual(rep) < 1e-9);
  }
}

TEST_CASE("invariance under similarities and Moebius transformations") {
  Rng rng(99);
  for (const char* sel : {"torus:n=3:k=1:r=0.6", "cone:clifford:m=2:n=3", "logspiral:n=2:c=1"}) {
    CAPTURE(sel);
    const ExampleFamily fam = make_family(sel);
    const auto p = points(fam.chart, 1, 2).front();
    const InvariantReport ref = analyze_point(fam.chart, p);
    for (int trial = 0; trial < 3; ++trial) {
      const MatrixXd t = random_lorentz(fam.chart.dim() + 3, rng);
      const InvariantReport rep = analyze_point(fam.chart.transformed(t), p);
      CHECK(b_distance(rep.b, ref.b) < 1e-8);
      CHECK(rep.C.norm() == doctest::Approx(ref.C.norm()).epsilon(1e-8));
      CHECK(rep.s == doctest::Approx(ref.s).epsilon(1e-7));
      // Y is equivariant: T Y = Y of the transformed hypersurface.
      CHECK((t * ref.frame.Y - rep.frame.Y).norm() < 1e-8 * rep.frame.Y.norm());
    }
    if (fam.chart.ambient() == Ambient::Euclidean) {
      const InvariantReport rep = analyze_point(fam.chart.scaled(2.5), p);
      CHECK(b_distance(rep.b, ref.b) < 1e-10);
      CHECK(rep.C.norm() == doctest::Approx(ref.C.norm()).epsilon(1e-10));
    }
  }
}

TEST_CASE("Euclidean route agrees with the sigma-pushed sphere route") {
  for (const char* sel : {"cylinder:n=2:k=1", "cylinder:n=3:k=1", "logspiral:n=2:c=1",
                          "logspiral:n=3:c=1", "cone:clifford:m=2:n=3"}) {
    CAPTURE(sel);
    const ExampleFamily fam = make_family(sel);
    const int n = fam.chart.dim();
    const double sign = stereographic_orientation_sign(n);
    for (const auto& p : points(fam.chart, 4, 17)) {
      const InvariantReport e = analyze_point(fam.chart, p);
      const InvariantReport s = analyze_point(fam.chart.on_sphere(), p);
      CHECK(e.ambient == "euclidean");
      CHECK(s.ambient == "sphere");
      CHECK((e.frame.Y - s.frame.Y).norm() < 1e-9 * e.frame.Y.norm());
      CHECK((e.frame.N - s.frame.N).norm() < 1e-8 * e.frame.N.norm());
      CHECK((e.frame.xi - sign * s.frame.xi).norm() < 1e-8);
      // Frames may differ by a permutation, so compare coordinate tensors.
      CHECK((coordinate_tensor(e, e.B) - sign * coordinate_tensor(s, s.B)).norm() < 1e-8);
      CHECK((coordinate_tensor(e, e.A) - coordinate_tensor(s, s.A)).norm() < 1e-8);
      CHECK((coordinate_form(e, e.C) - sign * coordinate_form(s, s.C)).norm() < 1e-8);
      const VectorXd sb = sign > 0 ? VectorXd(s.b) : VectorXd(-s.b.reverse());
      CHECK((e.b - sb).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(e.s == doctest::Approx(s.s).epsilon(1e-8));
    }
  }
}

TEST_CASE("pointwise quantities from finite differences") {
  const ExampleFamily fam = make_family("logspiral:n=2:c=1");
  const Chart fd = fam.chart.with_mode(DerivativeMode::FiniteDifference);
  const std::vector<double> p{0.3, -0.4};
  CHECK(conformal_factor(fd, p) == doctest::Approx(conformal_factor(fam.chart, p)).epsilon(1e-6));
  CHECK((moebius_position(fd, p) - moebius_position(fam.chart, p)).norm() < 1e-6);
  CHECK((moebius_metric(fd, p) - moebius_metric(fam.chart, p)).norm() < 1e-6);
  try {
    analyze_point(fd, p);
    FAIL("expected RequiresAnalyticChart");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RequiresAnalyticChart);
  }
}

TEST_CASE("Moebius metric is rho^2 times the induced metric") {
  const ExampleFamily fam = make_family("cylinder:n=2:k=1");
  // f(v, a) = (v, cos a, sin a): I = identity, rho = 1.
  const MatrixXd g = moebius_metric(fam.chart, {0.2, 0.7});
  CHECK((g - MatrixXd::Identity(2, 2)).norm() < 1e-12);
  const VectorXd y = moebius_position(fam.chart, {0.2, 0.7});
  CHECK(std::abs(lorentz_inner(y, y)) < 1e-12);
}

TEST_CASE("umbilic points are refused") {
  const Chart sphere = round_sphere();
  auto expect_umbilic = [](auto&& fn) {
    try {
      fn();
      FAIL("expected Umbilic");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Umbilic);
    }
  };
  expect_umbilic([&] { conformal_factor(sphere, {1.0, 0.5}); });
  expect_umbilic([&] { analyze_point(sphere, {1.0, 0.5}); });
}

TEST_CASE("principal curvatures and ratios from B") {
  const MatrixXd b{{0.2, 0.1, 0.0}, {0.1, 0.2, 0.0}, {0.0, 0.0, -0.4}};
  const MoebiusCurvatures mc = moebius_principal_curvatures(b);
  CHECK(mc.values[0] == doctest::Approx(-0.4));
  CHECK(mc.values[1] == doctest::Approx(0.1));
  CHECK(mc.values[2] == doctest::Approx(0.3));
  CHECK(mc.classes.count == 3);

  const auto ratios = moebius_curvature_ratios({-1.0, 0.0, 0.0, 2.0});
  REQUIRE(ratios.size() == 6);
  // (b1 - b2) / (b1 - b3) with representatives -1, 0, 2.
  CHECK(ratios[0].value == doctest::Approx(1.0 / 3.0));
  CHECK(ratios[5].i == 3);
  CHECK(ratios[5].j == 2);
  CHECK(ratios[5].k == 1);
  CHECK(ratios[5].value == doctest::Approx(2.0 / 3.0));
  try {
    moebius_curvature_ratios({-0.5, 0.5});
    FAIL("expected TooFewCurvatures");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewCurvatures);
  }
}

TEST_CASE("degenerate gauge is flagged only for repeated curvatures") {
  const ExampleFamily torus = make_family("torus:n=2:k=1:r=0.6");
  CHECK_FALSE(analyze_point(torus.chart, torus.base_point).gauge_degenerate);
  const ExampleFamily cyl = make_family("cylinder:n=3:k=1");
  CHECK(analyze_point(cyl.chart, cyl.base_point).gauge_degenerate);
}
