#include "moebius_lab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "moebius_lab/errors.hpp"
#include "moebius_lab/orbits.hpp"

namespace moebius_lab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

Json vec(const VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json mat(const MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec(m.row(i).transpose()));
  return rows;
}

Json columns(const MatrixXd& m) {
  Json cols = Json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) cols.push_back(vec(m.col(j)));
  return cols;
}

Json header(const std::string& command) {
  Json j;
  j["schema"] = kSchema;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["command"] = command;
  return j;
}

Json tolerances(const Tolerances& tol) {
  Json t = Json::object();
  for (const auto& [k, v] : tol.values()) t[k] = v;
  return t;
}

Json check_json(const Check& c) {
  Json j{{"name", c.name}, {"value", c.value}, {"relation", c.relation},
         {"tolerance", c.tolerance}, {"pass", c.pass}};
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

Json family_json(const ExampleFamily& fam) {
  Json expected = Json::object();
  if (fam.expected.r) expected["r"] = *fam.expected.r;
  if (fam.expected.C_zero) expected["C_zero"] = *fam.expected.C_zero;
  if (fam.expected.orbit_case) expected["orbit_case"] = orbit_tag_name(*fam.expected.orbit_case);
  if (!fam.expected.b.empty()) expected["b"] = fam.expected.b;
  return {{"name", fam.name},
          {"dim", fam.chart.dim()},
          {"ambient", ambient_name(fam.chart.ambient())},
          {"base_point", fam.base_point},
          {"domain", {{"lo", fam.chart.domain().lo}, {"hi", fam.chart.domain().hi}}},
          {"expected", expected}};
}

Json point_json(std::size_t index, const PointResult& p) {
  Json j{{"index", index}, {"params", p.params}, {"ok", p.report.has_value()}};
  if (!p.report) {
    j["error"] = p.error;
    return j;
  }
  const InvariantReport& r = *p.report;
  j["rho"] = r.rho;
  j["H"] = r.H;
  j["lambda"] = vec(r.lambda);
  j["b"] = vec(r.b);
  j["r"] = r.classes.count;
  j["multiplicities"] = r.classes.multiplicities;
  j["C"] = vec(r.C);
  j["C_norm"] = r.C.norm();
  j["C_alt"] = vec(r.C_alt);
  j["B"] = mat(r.B);
  j["A"] = mat(r.A);
  j["trace_A"] = r.A.trace();
  j["s"] = r.s;
  Json m = Json::array();
  for (const CurvatureRatio& cr : r.M)
    m.push_back({{"i", cr.i}, {"j", cr.j}, {"k", cr.k}, {"value", cr.value}});
  j["M"] = m;
  j["gauge_degenerate"] = r.gauge_degenerate;
  Json res = Json::object();
  for (const auto& [k, v] : r.residuals) res[k] = v;
  j["residuals"] = res;
  return j;
}

struct Range {
  double lo = kInf, hi = -kInf, sum = 0.0;
  std::size_t count = 0;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
    ++count;
  }
  Json json() const {
    if (count == 0) return nullptr;
    return {{"min", lo}, {"max", hi}, {"mean", sum / static_cast<double>(count)}};
  }
};

Json orbit_json(const OrbitCase& oc, double homogeneity) {
  return {{"tag", orbit_tag_name(oc.tag)},
          {"witness", columns(oc.witness)},
          {"certificate_residual", oc.certificate_residual},
          {"note", oc.note},
          {"homogeneity_residual", homogeneity}};
}

// Adds group-element classification and homogeneity verdicts.
void orbit_verdicts(const ExampleFamily& fam, const OrbitCase& oc, double homogeneity,
                    const Tolerances& tol, std::vector<Check>& verdicts) {
  if (fam.expected.orbit_case)
    verdicts.push_back(make_check(std::string("orbit case is ") +
                                      orbit_tag_name(*fam.expected.orbit_case),
                                  oc.tag == *fam.expected.orbit_case ? 0.0 : 1.0, 0.0));
  if (oc.tag != OrbitTag::Undetermined)
    verdicts.push_back(make_check("orbit certificate", oc.certificate_residual, tol["certificate"]));
  verdicts.push_back(make_check("homogeneity", homogeneity, tol["homogeneity"]));
}

Json finish(Json j, const std::vector<Check>& verdicts, bool& pass) {
  Json v = Json::array();
  pass = true;
  for (const Check& c : verdicts) {
    v.push_back(check_json(c));
    pass = pass && c.pass;
  }
  j["verdicts"] = v;
  j["pass"] = pass;
  return j;
}

void write_json(std::ostringstream& os, const Json& j) {
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
      }
      break;
    }
    case Json::value_t::array: {
      os << '[';
      bool first = true;
      for (const Json& e : j) {
        if (!first) os << ',';
        first = false;
        write_json(os, e);
      }
      os << ']';
      break;
    }
    case Json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << Json(it.key()).dump() << ':';
        write_json(os, it.value());
      }
      os << '}';
      break;
    }
    default:
      os << j.dump();
  }
}

std::string csv_number(const Json& v) {
  if (!v.is_number()) return "";
  if (v.is_number_integer()) return v.dump();
  const double d = v.get<double>();
  if (!std::isfinite(d)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

// Quotes fields containing separators.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

// ---------------------------------------------------------------------------

Json invariants_report(const RunConfig& cfg, bool& pass) {
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidParameter, "--samples must be >= 1");
  const ExampleFamily fam = make_family(cfg.family);
  const Tolerances& tol = cfg.tol;
  const std::vector<PointResult> pts = analyze_samples(fam, cfg.samples, cfg.seed, cfg.workers);

  Json j = header("invariants");
  j["config"] = {{"family", cfg.family}, {"samples", cfg.samples}, {"seed", cfg.seed},
                 {"tolerances", tolerances(tol)}};
  std::string gauge;
  for (const PointResult& p : pts)
    if (p.report) {
      gauge = p.report->gauge;
      break;
    }
  j["conventions"] = {
      {"orientation", kOrientationConvention},
      {"gauge", gauge},
      {"route", "sphere and hyperbolic charts are evaluated on the sphere; Euclidean charts "
                "in R^{n+1}"},
      {"b_comparison", "expected b is matched up to the orientation flip b -> -reverse(b)"}};
  j["family"] = family_json(fam);

  Json points = Json::array();
  std::map<std::string, Range> scalars;
  std::map<std::string, double> max_residual;
  std::size_t failures = 0;
  double r_err = 0, b_err = 0, b_spread = 0;
  const VectorXd* b0 = nullptr;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    points.push_back(point_json(i, pts[i]));
    if (!pts[i].report) {
      ++failures;
      continue;
    }
    const InvariantReport& r = *pts[i].report;
    scalars["rho"].add(r.rho);
    scalars["H"].add(r.H);
    scalars["C_norm"].add(r.C.norm());
    scalars["s"].add(r.s);
    scalars["trace_A"].add(r.A.trace());
    scalars["r"].add(r.classes.count);
    for (Eigen::Index k = 0; k < r.b.size(); ++k) scalars["b_" + std::to_string(k + 1)].add(r.b[k]);
    for (const auto& [key, value] : r.residuals)
      max_residual[key] = std::max(max_residual[key], std::abs(value));
    if (fam.expected.r) r_err = std::max(r_err, std::abs(r.classes.count - double(*fam.expected.r)));
    if (!fam.expected.b.empty()) b_err = std::max(b_err, b_distance(r.b, fam.expected.b));
    if (!b0) b0 = &r.b;
    b_spread = std::max(b_spread, (r.b - *b0).cwiseAbs().maxCoeff());
  }
  j["points"] = points;
  Json agg_scalars = Json::object();
  for (const auto& [k, v] : scalars) agg_scalars[k] = v.json();
  Json agg_res = Json::object();
  for (const auto& [k, v] : max_residual) agg_res[k] = v;
  j["aggregates"] = {{"scalars", agg_scalars}, {"max_residuals", agg_res}};

  std::vector<Check> verdicts;
  verdicts.push_back(make_check("failed points", static_cast<double>(failures), 0.0));
  std::map<std::string, double> by_group;
  for (const auto& [k, v] : max_residual) {
    const std::string g = residual_group(k);
    by_group[g] = std::max(by_group[g], v);
  }
  for (const auto& [g, v] : by_group) verdicts.push_back(make_check("residuals: " + g, v, tol[g]));
  if (failures < pts.size()) {
    if (fam.expected.r) verdicts.push_back(make_check("|r - expected r|", r_err, 0.0));
    if (!fam.expected.b.empty())
      verdicts.push_back(make_check("b vs expected", b_err, tol["b_expected"]));
    verdicts.push_back(make_check("b spread across points", b_spread, tol["b_constant"]));
    if (fam.expected.C_zero) {
      const Range& c = scalars["C_norm"];
      if (*fam.expected.C_zero) {
        verdicts.push_back(make_check("max |C|", c.hi, tol["C_zero"]));
      } else {
        verdicts.push_back(make_check("min |C|", c.lo, tol["C_floor"], ">="));
        const double mean = c.sum / static_cast<double>(c.count);
        verdicts.push_back(make_check("|C| relative variation", (c.hi - c.lo) / mean,
                                      tol["C_variation"]));
      }
    }
  }

  if (fam.group_element) {
    const OrbitCase oc = classify_orbit_case(sample_family_group(fam, 10, cfg.seed));
    const double hom = verify_homogeneity(fam, cfg.samples, cfg.seed);
    j["orbit"] = orbit_json(oc, hom);
    orbit_verdicts(fam, oc, hom, tol, verdicts);
  }
  return finish(std::move(j), verdicts, pass);
}

Json orbit_report(const RunConfig& cfg, bool& pass) {
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidParameter, "--samples must be >= 1");
  const ExampleFamily fam = make_family(cfg.family);
  if (!fam.group_element)
    throw Error(ErrorCode::MissingGroup, "family " + fam.name + " has no group map");
  const GroupSample gs = sample_family_group(fam, cfg.samples, cfg.seed);
  const OrbitCase oc = classify_orbit_case(gs);
  const double hom = verify_homogeneity(fam, cfg.samples, cfg.seed);

  Json j = header("orbit");
  j["config"] = {{"family", cfg.family}, {"samples", cfg.samples}, {"seed", cfg.seed},
                 {"tolerances", tolerances(cfg.tol)}};
  j["conventions"] = {{"projective_normalization", "unit Euclidean norm, first nonzero coordinate positive"},
                      {"certificate_scale", "defect divided by max |T_ij| per element"},
                      {"totally_geodesic", "existence of an invariant subspace is certified; "
                                           "uniqueness of the orbit is not"}};
  j["family"] = family_json(fam);
  j["orbit"] = orbit_json(oc, hom);
  Json ev = Json::array();
  for (const CommonEigenvector& c : common_eigenvectors(gs))
    ev.push_back({{"vector", vec(c.vector)},
                  {"type", causal_type_name(c.type)},
                  {"eigenvalues", c.eigenvalues}});
  j["common_eigenvectors"] = ev;
  std::vector<Check> verdicts;
  orbit_verdicts(fam, oc, hom, cfg.tol, verdicts);
  return finish(std::move(j), verdicts, pass);
}

Json verify_all_report(const VerifyConfig& cfg, const std::vector<CriterionResult>& results) {
  Json j = header("verify-all");
  j["config"] = {{"seed", cfg.seed}, {"tolerances", tolerances(cfg.tol)}};
  Json criteria = Json::array();
  bool all = true;
  for (const CriterionResult& r : results) {
    Json checks = Json::array();
    for (const Check& c : r.checks) checks.push_back(check_json(c));
    criteria.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"checks", checks}});
    all = all && r.pass;
  }
  j["criteria"] = criteria;
  Json failing = Json::array();
  for (const CriterionResult& r : results)
    for (const Check& c : r.checks)
      if (!c.pass) failing.push_back({{"criterion", r.id}, {"check", c.name}});
  j["failing_checks"] = failing;
  j["pass"] = all;
  return j;
}

std::string to_json_text(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << '\n';
  return os.str();
}

std::string invariants_csv(const Json& report) {
  std::ostringstream os;
  os << "point_index,invariant,component,value\n";
  auto row = [&](std::size_t i, const std::string& name, const std::string& comp, const Json& v) {
    os << i << ',' << csv_field(name) << ',' << csv_field(comp) << ',' << csv_number(v) << '\n';
  };
  for (const Json& p : report.at("points")) {
    const std::size_t i = p.at("index").get<std::size_t>();
    for (std::size_t k = 0; k < p.at("params").size(); ++k)
      row(i, "param", std::to_string(k), p["params"][k]);
    if (!p.at("ok").get<bool>()) {
      row(i, "error", p.at("error").get<std::string>(), Json());
      continue;
    }
    for (const char* name : {"rho", "H", "C_norm", "trace_A", "s", "r"}) row(i, name, "0", p.at(name));
    for (const char* name : {"lambda", "b", "C", "C_alt"}) {
      const Json& v = p.at(name);
      for (std::size_t k = 0; k < v.size(); ++k) row(i, name, std::to_string(k), v[k]);
    }
    for (const char* name : {"B", "A"}) {
      const Json& m = p.at(name);
      for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = 0; b < m[a].size(); ++b)
          row(i, name, std::to_string(a) + ":" + std::to_string(b), m[a][b]);
    }
    for (const Json& m : p.at("M"))
      row(i, "M",
          std::to_string(m.at("i").get<int>()) + ":" + std::to_string(m.at("j").get<int>()) + ":" +
              std::to_string(m.at("k").get<int>()),
          m.at("value"));
    for (auto it = p.at("residuals").begin(); it != p.at("residuals").end(); ++it)
      row(i, "residual", it.key(), it.value());
  }
  return os.str();
}

std::string verify_all_csv(const Json& report) {
  std::ostringstream os;
  os << "criterion,check,value,relation,tolerance,pass\n";
  for (const Json& c : report.at("criteria"))
    for (const Json& k : c.at("checks"))
      os << c.at("id").get<int>() << ',' << csv_field(k.at("name").get<std::string>()) << ','
         << csv_number(k.at("value")) << ',' << k.at("relation").get<std::string>() << ','
         << csv_number(k.at("tolerance")) << ',' << (k.at("pass").get<bool>() ? "true" : "false")
         << '\n';
  return os.str();
}

std::string orbit_csv(const Json& report) {
  std::ostringstream os;
  os << "section,name,component,value\n";
  const Json& o = report.at("orbit");
  os << "orbit,tag," << o.at("tag").get<std::string>() << ",\n";
  os << "orbit,certificate_residual,0," << csv_number(o.at("certificate_residual")) << '\n';
  os << "orbit,homogeneity_residual,0," << csv_number(o.at("homogeneity_residual")) << '\n';
  const Json& w = o.at("witness");
  for (std::size_t c = 0; c < w.size(); ++c)
    for (std::size_t k = 0; k < w[c].size(); ++k)
      os << "witness,column " << c << ',' << k << ',' << csv_number(w[c][k]) << '\n';
  for (const Json& v : report.at("verdicts"))
    os << "verdict," << csv_field(v.at("name").get<std::string>()) << ','
       << (v.at("pass").get<bool>() ? "pass" : "fail") << ',' << csv_number(v.at("value")) << '\n';
  return os.str();
}

}  // namespace moebius_lab
