#include <cmath>

#include "doctest.h"
#include "moebius_lab/errors.hpp"
#include "moebius_lab/families.hpp"
#include "moebius_lab/lorentz.hpp"
#include "moebius_lab/moebius.hpp"
#include "moebius_lab/orbits.hpp"
#include "moebius_lab/sampling.hpp"

using namespace moebius_lab;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

GroupSample rotation_sample(int d, Rng& rng, int count = 6) {
  std::vector<LorentzMatrix> out;
  for (int i = 0; i < count; ++i) {
    MatrixXd t = MatrixXd::Identity(d, d);
    t.bottomRightCorner(d - 1, d - 1) = random_orthogonal(d - 1, rng);
    out.emplace_back(t);
  }
  return GroupSample::from(out);
}

GroupSample ge_sample(double c, int n, Rng& rng, int count = 6) {
  std::vector<LorentzMatrix> out;
  for (int i = 0; i < count; ++i) {
    VectorXd y(n - 1);
    for (auto& v : y) v = rng.uniform(-2, 2);
    out.emplace_back(g_e(c, rng.uniform(-2, 2), y));
  }
  return GroupSample::from(out);
}

GroupSample gr_sample(int m, int k, Rng& rng, int count = 6) {
  std::vector<LorentzMatrix> out;
  for (int i = 0; i < count; ++i) {
    VectorXd u(m);
    for (auto& v : u) v = rng.uniform(-2, 2);
    out.emplace_back(g_r(u, random_orthogonal(k, rng)));
  }
  return GroupSample::from(out);
}

GroupSample gh_sample(int m, int k, Rng& rng, int count = 6) {
  std::vector<LorentzMatrix> out;
  for (int i = 0; i < count; ++i) {
    VectorXd v(m);
    for (auto& x : v) x = rng.uniform(-1, 1);
    out.emplace_back(g_h(boost_to(v), random_orthogonal(k, rng)));
  }
  return GroupSample::from(out);
}

VectorXd unit_null(int d, double sign) {
  VectorXd z = VectorXd::Zero(d);
  z[0] = 1.0;
  z[1] = sign;
  return z / std::sqrt(2.0);
}

MatrixXd projector(const MatrixXd& w) { return w * (w.transpose() * w).inverse() * w.transpose(); }

}  // namespace

TEST_CASE("projective normalization") {
  const VectorXd v = projective_normalize(VectorXd{{0.0, -3.0, 4.0}});
  CHECK((v - VectorXd{{0.0, 0.6, -0.8}}).norm() < 1e-15);
}

TEST_CASE("homogeneity of every family") {
  for (const std::string& sel : standard_selectors()) {
    CAPTURE(sel);
    const ExampleFamily fam = make_family(sel);
    CHECK(verify_homogeneity(fam, 20, 1) <= 1e-8);
    CHECK(verify_homogeneity(fam, {{fam.base_point, fam.base_point}}) == 0.0);
  }
}

TEST_CASE("homogeneity survives conjugation") {
  Rng rng(21);
  for (const char* sel : {"cylinder:n=2:k=1", "logspiral:n=2:c=1"}) {
    const ExampleFamily fam = make_family(sel);
    const MatrixXd c = random_lorentz(fam.chart.dim() + 3, rng);
    const LorentzMatrix cl(c);
    ExampleFamily conj = fam;
    conj.chart = fam.chart.transformed(c);
    conj.group_element = [cl, g = fam.group_element](const std::vector<double>& q) {
      return cl * g(q) * cl.inverse();
    };
    conj.base_Y = moebius_position(conj.chart, conj.base_point);
    const double before = verify_homogeneity(fam, 20, 3);
    const double after = verify_homogeneity(conj, 20, 3);
    CHECK(after <= std::max(10 * before, 1e-8));
  }
}

TEST_CASE("a wrong group map is caught") {
  ExampleFamily fam = make_family("logspiral:n=2:c=1");
  fam.group_element = [](const std::vector<double>& q) { return LorentzMatrix(g_e(1.0, 2 * q[0], VectorXd::Zero(1))); };
  CHECK(verify_homogeneity(fam, 10, 2) > 1e-3);
  fam.group_element = nullptr;
  CHECK_THROWS_AS(verify_homogeneity(fam, 10, 2), Error);
}

TEST_CASE("common eigenvectors of the standard groups") {
  Rng rng(31);
  SUBCASE("rotations fix e0") {
    const auto ev = common_eigenvectors(rotation_sample(6, rng));
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].type == CausalType::Timelike);
    CHECK((ev[0].vector - VectorXd::Unit(6, 0)).norm() < 1e-10);
    for (double l : ev[0].eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("log-spiral group: (1,-1,0,...) with eigenvalue e^{cs}") {
    const double c = 0.8;
    std::vector<LorentzMatrix> els;
    std::vector<double> s{-1.3, 0.2, 1.7};
    for (double si : s) els.emplace_back(g_e(c, si, VectorXd{{0.5 * si, 1.0 - si * si}}));
    const auto ev = common_eigenvectors(GroupSample::from(els));
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].type == CausalType::Null);
    CHECK((ev[0].vector - unit_null(6, -1)).norm() < 1e-10);
    for (std::size_t i = 0; i < s.size(); ++i)
      CHECK(ev[0].eigenvalues[i] == doctest::Approx(std::exp(c * s[i])).epsilon(1e-10));
  }
  SUBCASE("translation-rotation group: (1,1,0,...) with eigenvalue 1") {
    const auto ev = common_eigenvectors(gr_sample(2, 3, rng));
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].type == CausalType::Null);
    CHECK((ev[0].vector - unit_null(7, 1)).norm() < 1e-8);
    for (double l : ev[0].eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("generic Lorentz elements share nothing") {
    std::vector<LorentzMatrix> els;
    for (int i = 0; i < 3; ++i) els.emplace_back(random_lorentz(5, rng));
    CHECK(common_eigenvectors(GroupSample::from(els)).empty());
  }
}

TEST_CASE("orbit classification of the standard groups") {
  Rng rng(41);
  SUBCASE("rotations: fixed point e0") {
    const GroupSample gs = rotation_sample(5, rng);
    const OrbitCase oc = classify_orbit_case(gs);
    CHECK(oc.tag == OrbitTag::FixedPoint);
    CHECK((oc.witness.col(0) - VectorXd::Unit(5, 0)).norm() < 1e-10);
    CHECK(oc.certificate_residual <= kCertificateTolerance);
  }
  SUBCASE("block group with a boost factor: totally geodesic") {
    const GroupSample gs = gh_sample(2, 2, rng);
    const OrbitCase oc = classify_orbit_case(gs);
    CHECK(oc.tag == OrbitTag::TotallyGeodesic);
    MatrixXd block = MatrixXd::Zero(6, 3);
    block.topLeftCorner(3, 3).setIdentity();
    REQUIRE(oc.witness.cols() == 3);
    CHECK((projector(oc.witness) - projector(block)).norm() < 1e-9);
    CHECK(certificate_residual(oc, gs) <= kCertificateTolerance);
  }
  SUBCASE("log-spiral group: horosphere at (1,-1,0,...)") {
    const GroupSample gs = ge_sample(1.0, 3, rng);
    const OrbitCase oc = classify_orbit_case(gs);
    CHECK(oc.tag == OrbitTag::Horosphere);
    CHECK((oc.witness.col(0) - unit_null(6, -1)).norm() < 1e-10);
    CHECK(certificate_residual(oc, gs) <= kCertificateTolerance);
  }
  SUBCASE("translation-rotation group: horosphere at (1,1,0,...)") {
    const GroupSample gs = gr_sample(3, 2, rng);
    const OrbitCase oc = classify_orbit_case(gs);
    CHECK(oc.tag == OrbitTag::Horosphere);
    CHECK((oc.witness.col(0) - unit_null(7, 1)).norm() < 1e-8);
  }
  SUBCASE("generic elements: undetermined") {
    std::vector<LorentzMatrix> els;
    for (int i = 0; i < 3; ++i) els.emplace_back(random_lorentz(5, rng));
    CHECK(classify_orbit_case(GroupSample::from(els)).tag == OrbitTag::Undetermined);
  }
}

TEST_CASE("family groups classify as expected") {
  for (const std::string& sel : standard_selectors()) {
    CAPTURE(sel);
    const ExampleFamily fam = make_family(sel);
    const GroupSample gs = sample_family_group(fam, 8, 5);
    const OrbitCase oc = classify_orbit_case(gs);
    REQUIRE(fam.expected.orbit_case.has_value());
    CHECK(oc.tag == *fam.expected.orbit_case);
    CHECK(certificate_residual(oc, gs) <= kCertificateTolerance);
  }
}

TEST_CASE("certificates reject wrong witnesses") {
  Rng rng(3);
  const GroupSample gs = ge_sample(1.0, 2, rng);
  OrbitCase fake{OrbitTag::Horosphere, unit_null(5, 1), 0.0, ""};
  CHECK(certificate_residual(fake, gs) > 1e-3);
  OrbitCase fixed{OrbitTag::FixedPoint, VectorXd::Unit(5, 0), 0.0, ""};
  CHECK(certificate_residual(fixed, gs) > 1e-3);
}

TEST_CASE("group samples validate membership") {
  MatrixXd bad = MatrixXd::Identity(4, 4);
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(GroupSample::from({LorentzMatrix(bad)}), Error);
  CHECK_THROWS_AS(GroupSample::from({}), Error);
  CHECK_THROWS_AS(GroupSample::from({LorentzMatrix::identity(4), LorentzMatrix::identity(5)}), Error);
}

TEST_CASE("horosphere levels") {
  const VectorXd z{{1.0, 1.0, 0.0}};
  CHECK(horosphere_level(z, HyperbolicPoint::from(VectorXd{{1.0, 0.0, 0.0}})) == -1.0);
  CHECK_THROWS_AS(horosphere_level(VectorXd{{1.0, 0.5, 0.0}},
                                   HyperbolicPoint::from(VectorXd{{1.0, 0.0, 0.0}})),
                  Error);

  // Along the geodesic toward z the level is -e^{-t}: increasing to 0.
  double prev = -2.0;
  for (double t = 0.0; t < 6.0; t += 0.5) {
    const double level =
        horosphere_level(z, HyperbolicPoint::from(VectorXd{{std::cosh(t), std::sinh(t), 0.0}}));
    CHECK(level == doctest::Approx(-std::exp(-t)).epsilon(1e-12));
    CHECK(level > prev);
    prev = level;
  }
}

TEST_CASE("log-spiral group preserves the horosphere foliation at (1,-1,0,...)") {
  const double c = 0.9;
  const VectorXd z = unit_null(6, -1);
  const HyperbolicPoint y = HyperbolicPoint::from(VectorXd{{std::sqrt(1.0 + 0.09 + 0.16), 0.3, 0.0, -0.4, 0.0, 0.0}});
  const double level = horosphere_level(z, y);
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const VectorXd shift{{rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    // Translations keep the level.
    const VectorXd moved = g_e(c, 0.0, shift) * y.coords();
    CHECK(std::abs(horosphere_level(z, HyperbolicPoint::from(moved)) - level) <=
          1e-9 * std::abs(level));
    // The spiral part carries the level-l horosphere to level l e^{-cs}.
    const double s = rng.uniform(-2, 2);
    const VectorXd spun = g_e(c, s, shift) * y.coords();
    CHECK(horosphere_level(z, HyperbolicPoint::from(spun)) ==
          doctest::Approx(level * std::exp(-c * s)).epsilon(1e-9));
  }
}
