#include "moebius_lab/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "moebius_lab/errors.hpp"
#include "moebius_lab/lorentz.hpp"
#include "moebius_lab/orbits.hpp"
#include "moebius_lab/parallel.hpp"
#include "moebius_lab/sampling.hpp"

namespace moebius_lab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::string> kFrameFamilies = {
    "torus:n=2:k=1:r=0.6", "torus:n=3:k=1:r=0.6", "cylinder:n=2:k=1",
    "cylinder:n=3:k=1",    "hypcyl:n=3:k=1:r=1",  "cone:clifford:m=2:n=3",
    "logspiral:n=2:c=1",   "logspiral:n=3:c=1"};

// Max of the residuals whose key satisfies `pick`, over all points.
template <class Pick>
Check residual_check(const std::string& name, const std::vector<PointResult>& pts, double tol,
                     Pick pick) {
  double worst = 0.0;
  for (const PointResult& p : pts) {
    if (!p.report) return failed_check(name, p.error);
    for (const auto& [key, value] : p.report->residuals)
      if (pick(key)) worst = std::max(worst, std::abs(value));
  }
  return make_check(name, worst, tol);
}

Check group_check(const std::string& name, const std::vector<PointResult>& pts, double tol,
                  const std::string& group) {
  return residual_check(name, pts, tol,
                        [&](const std::string& key) { return residual_group(key) == group; });
}

// First failed point, if any, as a check.
std::optional<Check> analysis_failure(const std::string& name, const std::vector<PointResult>& pts) {
  for (const PointResult& p : pts)
    if (!p.report) return failed_check(name, p.error);
  return std::nullopt;
}

// Two-class Moebius curvatures from trace B = 0 and |B|^2 = (n-1)/n, with
// multiplicities (k, n-k).
std::vector<double> two_class_b(int n, int k) {
  const double hi = std::sqrt((n - 1.0) * (n - k) / (n * n * static_cast<double>(k)));
  const double lo = -k * hi / (n - k);
  std::vector<double> b(n - k, lo);
  b.insert(b.end(), k, hi);
  return b;
}

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

MatrixXd coordinate_dual(const InvariantReport& r) {
  return r.frame.frame_pullback.transpose().inverse();
}

double max_abs(const MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

VectorXd unit_null(int d, double sign) {
  VectorXd z = VectorXd::Zero(d);
  z[0] = 1.0;
  z[1] = sign;
  return z / std::sqrt(2.0);
}

VectorXd uniform_vector(Rng& rng, int size, double lo, double hi) {
  VectorXd v(size);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

template <class F>
void guarded(std::vector<Check>& checks, const std::string& name, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    checks.push_back(failed_check(name, e.what()));
  }
}

// ---------------------------------------------------------------------------

std::vector<Check> frame_identities(const VerifyConfig& cfg) {
  std::vector<Check> out;
  for (const std::string& sel : kFrameFamilies) {
    guarded(out, sel, [&] {
      const auto pts = analyze_samples(make_family(sel), 50, cfg.seed, cfg.workers);
      out.push_back(group_check(sel + " frame relations", pts, cfg.tol["frame"], "frame"));
    });
  }
  return out;
}

std::vector<Check> algebraic_integrability(const VerifyConfig& cfg) {
  std::vector<Check> out;
  for (const std::string& sel : kFrameFamilies) {
    guarded(out, sel, [&] {
      const auto pts = analyze_samples(make_family(sel), 50, cfg.seed, cfg.workers);
      out.push_back(group_check(sel + " trace B", pts, cfg.tol["trace_B"], "trace_B"));
      out.push_back(group_check(sel + " |B|^2 - (n-1)/n", pts, cfg.tol["norm_B"], "norm_B"));
      out.push_back(group_check(sel + " trace A - (1+n^2 s)/(2n)", pts, cfg.tol["trace_A"],
                                "trace_A"));
    });
  }
  return out;
}

std::vector<Check> gauss_codazzi(const VerifyConfig& cfg) {
  std::vector<Check> out;
  for (const char* sel : {"torus:n=2:k=1:r=0.6", "cone:clifford:m=2:n=3"}) {
    guarded(out, sel, [&] {
      const auto pts = analyze_samples(make_family(sel), 20, cfg.seed, cfg.workers);
      out.push_back(group_check(std::string(sel) + " Gauss equation", pts, cfg.tol["gauss"], "gauss"));
      out.push_back(group_check(std::string(sel) + " B_ij,k symmetry and divergence", pts,
                                cfg.tol["codazzi"], "codazzi"));
    });
  }
  return out;
}

std::vector<Check> minimal_cone(const VerifyConfig& cfg) {
  std::vector<Check> out;
  const std::string sel = "cone:clifford:m=2:n=3";
  guarded(out, sel, [&] {
    const auto pts = analyze_samples(make_family(sel), 50, cfg.seed, cfg.workers);
    if (auto f = analysis_failure(sel, pts)) {
      out.push_back(*f);
      return;
    }
    const double third = 1.0 / std::sqrt(3.0);
    const std::vector<double> expected{-third, 0.0, third};
    double c_max = 0, b_err = 0, b_spread = 0, rho_err = 0, oracle_err = 0;
    const VectorXd& b0 = pts.front().report->b;
    for (const PointResult& p : pts) {
      const InvariantReport& r = *p.report;
      c_max = std::max(c_max, r.C.norm());
      b_err = std::max(b_err, b_distance(r.b, expected));
      b_spread = std::max(b_spread, (r.b - b0).cwiseAbs().maxCoeff());
      // rho = sqrt(3)/t and b_i = (lambda_i - H)/rho for the classical curvatures.
      const double rho = std::sqrt(3.0) / p.params[0];
      rho_err = std::max(rho_err, std::abs(r.rho - rho) / rho);
      VectorXd from_lambda = (r.lambda.array() - r.H) / rho;
      std::sort(from_lambda.begin(), from_lambda.end());
      oracle_err = std::max(oracle_err, (from_lambda - r.b).cwiseAbs().maxCoeff());
    }
    out.push_back(make_check("max |C|", c_max, cfg.tol["C_zero"]));
    out.push_back(make_check("b vs {-1/sqrt3, 0, 1/sqrt3}", b_err, cfg.tol["cone_b"]));
    out.push_back(make_check("b vs (lambda - H)/rho with rho = sqrt(3)/t", oracle_err,
                             cfg.tol["cone_b"]));
    out.push_back(make_check("rho vs sqrt(3)/t (relative)", rho_err, cfg.tol["rho_oracle"]));
    out.push_back(make_check("b spread across points", b_spread, cfg.tol["b_constant"]));
  });
  return out;
}

std::vector<Check> example_coverage(const VerifyConfig& cfg) {
  std::vector<Check> out;
  for (auto [n, k] : {std::pair{2, 1}, {3, 1}, {3, 2}}) {
    const std::string name = "torus n=" + std::to_string(n) + " k=" + std::to_string(k);
    guarded(out, name, [&] {
      const auto pts = analyze_samples(make_torus(n, k, 0.6), 20, cfg.seed, cfg.workers);
      if (auto f = analysis_failure(name, pts)) {
        out.push_back(*f);
        return;
      }
      std::vector<double> expected = two_class_b(n, k);
      std::sort(expected.begin(), expected.end());
      double b_err = 0, class_err = 0;
      for (const PointResult& p : pts) {
        const InvariantReport& r = *p.report;
        b_err = std::max(b_err, b_distance(r.b, expected));
        std::vector<int> mult = r.classes.multiplicities;
        std::sort(mult.begin(), mult.end());
        std::vector<int> want{std::min(k, n - k), std::max(k, n - k)};
        class_err = std::max(class_err, mult == want ? 0.0 : 1.0);
      }
      out.push_back(make_check(name + " b vs two-class formula", b_err, cfg.tol["torus_b"]));
      out.push_back(make_check(name + " multiplicities {k, n-k} (mismatches)", class_err, 0.0));
    });
  }
  for (int n : {2, 3}) {
    const std::string name = "logspiral n=" + std::to_string(n);
    guarded(out, name, [&] {
      const auto pts = analyze_samples(make_log_spiral_cylinder(n, 1.0), 20, cfg.seed, cfg.workers);
      if (auto f = analysis_failure(name, pts)) {
        out.push_back(*f);
        return;
      }
      double r_err = 0, c_min = kInf, c_max = 0, c_sum = 0;
      for (const PointResult& p : pts) {
        const InvariantReport& r = *p.report;
        r_err = std::max(r_err, std::abs(r.classes.count - 2.0));
        const double c = r.C.norm();
        c_min = std::min(c_min, c);
        c_max = std::max(c_max, c);
        c_sum += c;
      }
      const double mean = c_sum / static_cast<double>(pts.size());
      out.push_back(make_check(name + " |r - 2|", r_err, 0.0));
      out.push_back(make_check(name + " min |C|", c_min, cfg.tol["C_floor"], ">="));
      out.push_back(make_check(name + " |C| relative variation", (c_max - c_min) / mean,
                               cfg.tol["C_variation"]));
    });
  }
  return out;
}

std::vector<Check> group_audits(const VerifyConfig& cfg) {
  std::vector<Check> out;
  Rng rng(cfg.seed * 7919 + 6);
  const int n = 3, m = 2;
  double gr = 0, gh = 0, gc = 0, ge = 0, hom = 0, not_ortho = 0;
  auto track = [&](double& worst, const MatrixXd& t) {
    const Membership mem = check_group_membership(t);
    worst = std::max(worst, mem.scaled_residual);
    if (!mem.is_orthochronous) not_ortho += 1;
  };
  for (int draw = 0; draw < 100; ++draw) {
    track(gr, g_r(uniform_vector(rng, m, -2, 2), random_orthogonal(n - m + 1, rng, false)));
    track(gh, g_h(boost_to(uniform_vector(rng, m, -1.5, 1.5)),
                  random_orthogonal(n - m + 1, rng, false)));
    track(gc, g_c(random_lorentz(n - m + 1, rng), random_orthogonal(m + 2, rng, false)));
    const double c = rng.uniform(0.2, 1.5);
    track(ge, g_e(c, rng.uniform(-2, 2), uniform_vector(rng, n - 1, -2, 2)));
    const double s1 = rng.uniform(-2, 2), s2 = rng.uniform(-2, 2);
    const VectorXd zero = VectorXd::Zero(n - 1);
    const MatrixXd prod = g_e(c, s1, zero) * g_e(c, s2, zero);
    hom = std::max(hom, max_abs(prod - g_e(c, s1 + s2, zero)) /
                            std::exp(2 * c * (std::abs(s1) + std::abs(s2))));
  }
  const double tol = cfg.tol["membership"];
  out.push_back(make_check("translation-rotation group T I1 T^t = I1 (scaled)", gr, tol));
  out.push_back(make_check("hyperbolic-cylinder group T I1 T^t = I1 (scaled)", gh, tol));
  out.push_back(make_check("cone group T I1 T^t = I1 (scaled)", gc, tol));
  out.push_back(make_check("log-spiral group T I1 T^t = I1 (scaled)", ge, tol));
  out.push_back(make_check("non-orthochronous draws", not_ortho, 0.0));
  out.push_back(make_check("log-spiral slice homomorphism (scaled)", hom, cfg.tol["homomorphism"]));
  out.push_back(make_check(
      "log-spiral group at (0, 0) is the identity",
      max_abs(g_e(1.0, 0.0, VectorXd::Zero(n - 1)) - MatrixXd::Identity(n + 3, n + 3)), 0.0));
  return out;
}

std::vector<Check> homogeneity(const VerifyConfig& cfg) {
  std::vector<Check> out;
  for (const char* sel : {"cylinder:n=2:k=1", "cylinder:n=3:k=1", "hypcyl:n=3:k=1:r=1",
                          "cone:clifford:m=2:n=3", "logspiral:n=2:c=1", "logspiral:n=3:c=1"}) {
    guarded(out, sel, [&] {
      out.push_back(make_check(std::string(sel) + " projective residual",
                               verify_homogeneity(make_family(sel), 50, cfg.seed),
                               cfg.tol["homogeneity"]));
    });
  }
  return out;
}

std::vector<Check> classifier(const VerifyConfig& cfg) {
  std::vector<Check> out;
  Rng rng(cfg.seed * 104729 + 8);
  const double tol = cfg.tol["certificate"];
  const int count = 10;

  auto audit = [&](const std::string& name, const GroupSample& gs, OrbitTag want,
                   const std::optional<VectorXd>& witness) {
    const OrbitCase oc = classify_orbit_case(gs);
    out.push_back(make_check(name + " tag is " + orbit_tag_name(want) + " (got " +
                                 orbit_tag_name(oc.tag) + ")",
                             oc.tag == want ? 0.0 : 1.0, 0.0));
    out.push_back(make_check(name + " certificate re-verified", certificate_residual(oc, gs), tol));
    if (witness) {
      const double dist = oc.witness.cols() ? (oc.witness.col(0) - *witness).norm() : kInf;
      out.push_back(make_check(name + " witness distance", dist, tol));
    }
  };

  guarded(out, "rotations", [&] {
    std::vector<LorentzMatrix> els;
    for (int i = 0; i < count; ++i) {
      MatrixXd t = MatrixXd::Identity(6, 6);
      t.bottomRightCorner(5, 5) = random_orthogonal(5, rng, false);
      els.emplace_back(t);
    }
    audit("rotations", GroupSample::from(els), OrbitTag::FixedPoint, VectorXd::Unit(6, 0));
  });
  guarded(out, "hyperbolic-cylinder group", [&] {
    std::vector<LorentzMatrix> els;
    for (int i = 0; i < count; ++i)
      els.emplace_back(g_h(boost_to(uniform_vector(rng, 2, -1.5, 1.5)), random_orthogonal(2, rng)));
    audit("hyperbolic-cylinder group", GroupSample::from(els), OrbitTag::TotallyGeodesic,
          std::nullopt);
  });
  guarded(out, "translation-rotation group", [&] {
    std::vector<LorentzMatrix> els;
    for (int i = 0; i < count; ++i)
      els.emplace_back(g_r(uniform_vector(rng, 2, -2, 2), random_orthogonal(2, rng)));
    audit("translation-rotation group", GroupSample::from(els), OrbitTag::Horosphere,
          unit_null(6, 1.0));
  });
  guarded(out, "log-spiral group", [&] {
    std::vector<LorentzMatrix> els;
    for (int i = 0; i < count; ++i)
      els.emplace_back(g_e(1.0, rng.uniform(-2, 2), uniform_vector(rng, 2, -2, 2)));
    audit("log-spiral group", GroupSample::from(els), OrbitTag::Horosphere, unit_null(6, -1.0));
  });
  for (const std::string& sel : standard_selectors()) {
    guarded(out, sel, [&] {
      const ExampleFamily fam = make_family(sel);
      audit(sel + " family group", sample_family_group(fam, count, cfg.seed),
            fam.expected.orbit_case.value_or(OrbitTag::Undetermined), std::nullopt);
    });
  }
  return out;
}

std::vector<Check> moebius_invariance(const VerifyConfig& cfg) {
  std::vector<Check> out;
  Rng rng(cfg.seed * 15485863 + 9);
  for (const char* sel : {"torus:n=2:k=1:r=0.6", "torus:n=3:k=1:r=0.6", "cone:clifford:m=2:n=3"}) {
    guarded(out, sel, [&] {
      const ExampleFamily fam = make_family(sel);
      const auto pts = halton_box(fam.chart.domain().lo, fam.chart.domain().hi, 3, cfg.seed);
      std::vector<InvariantReport> ref;
      for (const auto& p : pts) ref.push_back(analyze_point(fam.chart, p));
      double b_err = 0, c_err = 0;
      for (int trial = 0; trial < 10; ++trial) {
        const Chart moved = fam.chart.transformed(random_lorentz(fam.chart.dim() + 3, rng));
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const InvariantReport r = analyze_point(moved, pts[i]);
          b_err = std::max(b_err, b_distance(r.b, to_std(ref[i].b)));
          c_err = std::max(c_err, std::abs(r.C.norm() - ref[i].C.norm()));
        }
      }
      out.push_back(make_check(std::string(sel) + " sorted b", b_err, cfg.tol["invariance"]));
      out.push_back(make_check(std::string(sel) + " |C|", c_err, cfg.tol["invariance"]));
    });
  }
  return out;
}

std::vector<Check> route_consistency(const VerifyConfig& cfg) {
  std::vector<Check> out;
  for (const std::string& sel : standard_selectors()) {
    guarded(out, sel, [&] {
      const auto pts = analyze_samples(make_family(sel), 20, cfg.seed, cfg.workers);
      out.push_back(group_check(sel + " C from rho, H, II vs <dN, xi>", pts, cfg.tol["C_routes"],
                                "C_routes"));
    });
  }
  for (const char* sel : {"cylinder:n=2:k=1", "cylinder:n=3:k=1", "logspiral:n=2:c=1",
                          "logspiral:n=3:c=1"}) {
    guarded(out, sel, [&] {
      const ExampleFamily fam = make_family(sel);
      const Chart sphere = fam.chart.on_sphere();
      const double sign = stereographic_orientation_sign(fam.chart.dim());
      double y = 0, b = 0, bt = 0, ct = 0, at = 0, s = 0;
      for (const auto& p : halton_box(fam.chart.domain().lo, fam.chart.domain().hi, 20, cfg.seed)) {
        const InvariantReport e = analyze_point(fam.chart, p);
        const InvariantReport q = analyze_point(sphere, p);
        y = std::max(y, (e.frame.Y - q.frame.Y).norm() / e.frame.Y.norm());
        const VectorXd qb = sign > 0 ? VectorXd(q.b) : VectorXd(-q.b.reverse());
        b = std::max(b, (e.b - qb).cwiseAbs().maxCoeff());
        const MatrixXd de = coordinate_dual(e), dq = coordinate_dual(q);
        bt = std::max(bt, max_abs(de * e.B * de.transpose() - sign * dq * q.B * dq.transpose()));
        at = std::max(at, max_abs(de * e.A * de.transpose() - dq * q.A * dq.transpose()));
        ct = std::max(ct, max_abs(de * e.C - sign * dq * q.C));
        s = std::max(s, std::abs(e.s - q.s));
      }
      const double tol = cfg.tol["routes"];
      const std::string base = std::string(sel) + " Euclidean vs sphere route: ";
      out.push_back(make_check(base + "Y (relative)", y, tol));
      out.push_back(make_check(base + "b", b, tol));
      out.push_back(make_check(base + "B (coordinates)", bt, tol));
      out.push_back(make_check(base + "C (coordinates)", ct, tol));
      out.push_back(make_check(base + "A (coordinates)", at, tol));
      out.push_back(make_check(base + "s", s, tol));
    });
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Tolerances::Tolerances() : values_(defaults()) {}

const std::map<std::string, double>& Tolerances::defaults() {
  static const std::map<std::string, double> d = {
      {"frame", 1e-6},        {"trace_B", 1e-7},     {"norm_B", 1e-6},
      {"trace_A", 1e-4},      {"gauss", 1e-3},       {"codazzi", 1e-3},
      {"structure", 1e-3},    {"C_zero", 1e-5},      {"cone_b", 1e-5},
      {"rho_oracle", 1e-8},   {"b_constant", 1e-6},  {"torus_b", 1e-6},
      {"b_expected", 1e-6},   {"C_floor", 1e-3},     {"C_variation", 1e-4},
      {"membership", 1e-10},  {"homomorphism", 1e-9}, {"homogeneity", 1e-8},
      {"certificate", 1e-8},  {"invariance", 1e-5},  {"C_routes", 1e-4},
      {"routes", 1e-6}};
  return d;
}

double Tolerances::operator[](const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw Error(ErrorCode::InvalidParameter, "unknown tolerance '" + name + "'");
  return it->second;
}

void Tolerances::set(const std::string& name, double value) {
  auto it = values_.find(name);
  if (it == values_.end()) throw Error(ErrorCode::InvalidParameter, "unknown tolerance '" + name + "'");
  if (!(value >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "tolerance '" + name + "' must be >= 0");
  it->second = value;
}

Check make_check(std::string name, double value, double tolerance, std::string relation) {
  Check c{std::move(name), value, tolerance, std::move(relation), false, {}};
  c.pass = c.relation == ">=" ? value >= tolerance : value <= tolerance;
  return c;
}

Check failed_check(std::string name, std::string error) {
  Check c{std::move(name), std::numeric_limits<double>::quiet_NaN(), 0.0, "<=", false,
          std::move(error)};
  return c;
}

std::vector<PointResult> analyze_samples(const ExampleFamily& fam, std::size_t count,
                                         std::uint64_t seed, unsigned workers,
                                         const MoebiusOptions& opts) {
  const Box& box = fam.chart.domain();
  const auto params = halton_box(box.lo, box.hi, count, seed);
  std::vector<PointResult> out(params.size());
  parallel_for(
      params.size(),
      [&](std::size_t i) {
        out[i].params = params[i];
        try {
          out[i].report = analyze_point(fam.chart, params[i], opts);
        } catch (const std::exception& e) {
          out[i].error = e.what();
        }
      },
      workers);
  return out;
}

double b_distance(const Eigen::VectorXd& b, const std::vector<double>& expected) {
  if (static_cast<std::size_t>(b.size()) != expected.size()) return kInf;
  const VectorXd e = Eigen::Map<const VectorXd>(expected.data(), b.size());
  const VectorXd flipped = -b.reverse();
  return std::min((b - e).cwiseAbs().maxCoeff(), (flipped - e).cwiseAbs().maxCoeff());
}

std::string residual_group(const std::string& key) {
  if (key.rfind("frame.", 0) == 0) return "frame";
  if (key == "equa6.trace_B") return "trace_B";
  if (key == "equa6.norm_B") return "norm_B";
  if (key == "equa6.trace_A") return "trace_A";
  if (key == "equa4") return "gauss";
  if (key.rfind("equa3.", 0) == 0) return "codazzi";
  if (key == "C_routes") return "C_routes";
  return "structure";
}

const char* criterion_title(int id) {
  switch (id) {
    case 1: return "frame identities";
    case 2: return "algebraic integrability";
    case 3: return "Gauss and Codazzi equations";
    case 4: return "cone over the minimal Clifford torus";
    case 5: return "example coverage: tori and log-spiral cylinders";
    case 6: return "group audits";
    case 7: return "homogeneity";
    case 8: return "orbit classifier";
    case 9: return "Moebius invariance";
    case 10: return "cross-route consistency";
  }
  throw Error(ErrorCode::InvalidParameter, "criterion id must be 1.." + std::to_string(kCriterionCount));
}

CriterionResult run_criterion(int id, const VerifyConfig& cfg) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: r.checks = frame_identities(cfg); break;
      case 2: r.checks = algebraic_integrability(cfg); break;
      case 3: r.checks = gauss_codazzi(cfg); break;
      case 4: r.checks = minimal_cone(cfg); break;
      case 5: r.checks = example_coverage(cfg); break;
      case 6: r.checks = group_audits(cfg); break;
      case 7: r.checks = homogeneity(cfg); break;
      case 8: r.checks = classifier(cfg); break;
      case 9: r.checks = moebius_invariance(cfg); break;
      case 10: r.checks = route_consistency(cfg); break;
    }
  } catch (const std::exception& e) {
    r.checks.push_back(failed_check("criterion", e.what()));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.pass = !r.checks.empty() &&
           std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
  return r;
}

std::vector<CriterionResult> run_all_criteria(const VerifyConfig& cfg) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, cfg));
  return out;
}

}  // namespace moebius_lab
