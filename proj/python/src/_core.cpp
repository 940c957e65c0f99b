#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "moebius_lab/errors.hpp"
#include "moebius_lab/families.hpp"
#include "moebius_lab/lorentz.hpp"
#include "moebius_lab/moebius.hpp"
#include "moebius_lab/orbits.hpp"
#include "moebius_lab/report.hpp"
#include "moebius_lab/verification.hpp"

namespace py = pybind11;
using namespace moebius_lab;

namespace {

py::dict expectations(const FamilyExpectations& e) {
  py::dict d;
  d["r"] = e.r ? py::object(py::int_(*e.r)) : py::none();
  d["C_zero"] = e.C_zero ? py::object(py::bool_(*e.C_zero)) : py::none();
  d["orbit_case"] = e.orbit_case ? py::object(py::str(orbit_tag_name(*e.orbit_case))) : py::none();
  d["b"] = e.b;
  return d;
}

py::dict report_dict(const InvariantReport& r) {
  py::dict d;
  d["n"] = r.n;
  d["route"] = r.ambient;
  d["rho"] = r.rho;
  d["H"] = r.H;
  d["lambda"] = r.lambda;
  d["B"] = r.B;
  d["C"] = r.C;
  d["C_alt"] = r.C_alt;
  d["A"] = r.A;
  d["b"] = r.b;
  d["r"] = r.classes.count;
  d["multiplicities"] = r.classes.multiplicities;
  py::list m;
  for (const CurvatureRatio& c : r.M) m.append(py::make_tuple(c.i, c.j, c.k, c.value));
  d["M"] = m;
  d["s"] = r.s;
  d["residuals"] = r.residuals;
  d["gauge"] = r.gauge;
  d["gauge_degenerate"] = r.gauge_degenerate;
  d["conventions"] = r.conventions;
  d["Y"] = r.frame.Y;
  return d;
}

py::dict orbit_dict(const OrbitCase& oc) {
  py::dict d;
  d["tag"] = orbit_tag_name(oc.tag);
  d["witness"] = oc.witness;
  d["certificate_residual"] = oc.certificate_residual;
  d["note"] = oc.note;
  return d;
}

py::dict criterion_dict(const CriterionResult& r) {
  py::dict d;
  d["id"] = r.id;
  d["title"] = r.title;
  d["pass"] = r.pass;
  py::list checks;
  for (const Check& c : r.checks) {
    py::dict k;
    k["name"] = c.name;
    k["value"] = c.value;
    k["relation"] = c.relation;
    k["tolerance"] = c.tolerance;
    k["pass"] = c.pass;
    k["error"] = c.error;
    checks.append(k);
  }
  d["checks"] = checks;
  return d;
}

GroupSample to_sample(const std::vector<Eigen::MatrixXd>& ms) {
  std::vector<LorentzMatrix> els;
  for (const auto& m : ms) els.emplace_back(m);
  return GroupSample::from(std::move(els));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Moebius invariants of hypersurfaces, orbit classification and checks";
  m.attr("__version__") = kToolVersion;
  m.attr("ORIENTATION_CONVENTION") = kOrientationConvention;

  static py::exception<Error> error(m, "MoebiusLabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string("[") + error_code_name(e.code()) + "] " + e.what()).c_str());
    }
  });

  py::class_<ExampleFamily>(m, "Family")
      .def_readonly("name", &ExampleFamily::name)
      .def_readonly("base_point", &ExampleFamily::base_point)
      .def_readonly("base_Y", &ExampleFamily::base_Y)
      .def_property_readonly("dim", [](const ExampleFamily& f) { return f.chart.dim(); })
      .def_property_readonly("ambient", [](const ExampleFamily& f) { return ambient_name(f.chart.ambient()); })
      .def_property_readonly("domain", [](const ExampleFamily& f) {
        return py::make_tuple(f.chart.domain().lo, f.chart.domain().hi);
      })
      .def_property_readonly("expected", [](const ExampleFamily& f) { return expectations(f.expected); })
      .def_property_readonly("has_group", [](const ExampleFamily& f) { return static_cast<bool>(f.group_element); })
      .def("point", [](const ExampleFamily& f, const std::vector<double>& p) { return f.chart(p); },
           py::arg("params"), "Ambient coordinates of the chart at `params`.")
      .def("group_element",
           [](const ExampleFamily& f, const std::vector<double>& q) -> Eigen::MatrixXd {
             if (!f.group_element) throw Error(ErrorCode::MissingGroup, f.name + " has no group map");
             return f.group_element(q).matrix();
           },
           py::arg("params"))
      .def("__repr__", [](const ExampleFamily& f) { return "<Family " + f.name + ">"; });

  m.def("make_family", &make_family, py::arg("selector"));
  m.def("standard_selectors", &standard_selectors);

  m.def(
      "analyze_point",
      [](const ExampleFamily& f, const std::vector<double>& p, int jet_order) {
        MoebiusOptions opts;
        opts.jet_order = jet_order;
        return report_dict(analyze_point(f.chart, p, opts));
      },
      py::arg("family"), py::arg("params"), py::arg("jet_order") = 6,
      "Full invariant report at one parameter point, as a dict.");

  m.def("verify_homogeneity",
        py::overload_cast<const ExampleFamily&, std::size_t, std::uint64_t>(&verify_homogeneity),
        py::arg("family"), py::arg("pairs") = 50, py::arg("seed") = 1);

  m.def(
      "classify_orbit",
      [](const ExampleFamily& f, std::size_t samples, std::uint64_t seed) {
        return orbit_dict(classify_orbit_case(sample_family_group(f, samples, seed)));
      },
      py::arg("family"), py::arg("samples") = 10, py::arg("seed") = 1);
  m.def(
      "classify_matrices",
      [](const std::vector<Eigen::MatrixXd>& ms) { return orbit_dict(classify_orbit_case(to_sample(ms))); },
      py::arg("matrices"), "Orbit case of the group generated by the given Lorentz matrices.");

  m.def(
      "run_criterion",
      [](int id, std::uint64_t seed, const std::map<std::string, double>& tol) {
        VerifyConfig cfg;
        cfg.seed = seed;
        for (const auto& [k, v] : tol) cfg.tol.set(k, v);
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id, cfg);
        }
        return criterion_dict(r);
      },
      py::arg("id"), py::arg("seed") = 1, py::arg("tolerances") = std::map<std::string, double>{});
  m.attr("CRITERION_COUNT") = kCriterionCount;
  m.def("default_tolerances", &Tolerances::defaults);

  m.def(
      "invariants_report_json",
      [](const std::string& family, std::size_t samples, std::uint64_t seed) {
        RunConfig cfg;
        cfg.family = family;
        cfg.samples = samples;
        cfg.seed = seed;
        bool pass = false;
        return to_json_text(invariants_report(cfg, pass));
      },
      py::arg("family"), py::arg("samples") = 50, py::arg("seed") = 1,
      "The CLI's invariants report as JSON text.");

  // Lorentz model helpers.
  m.def("lorentz_metric", &lorentz_metric, py::arg("dim"));
  m.def("lorentz_inner", &lorentz_inner, py::arg("a"), py::arg("b"));
  m.def(
      "group_membership",
      [](const Eigen::MatrixXd& t) {
        const Membership mem = check_group_membership(t);
        py::dict d;
        d["is_lorentz"] = mem.is_lorentz;
        d["is_orthochronous"] = mem.is_orthochronous;
        d["max_residual"] = mem.max_residual;
        d["scaled_residual"] = mem.scaled_residual;
        return d;
      },
      py::arg("matrix"));
  m.def(
      "inv_stereographic", [](const Eigen::VectorXd& u) { return inv_stereographic(u).coords(); },
      py::arg("u"));
  m.def(
      "stereographic", [](const Eigen::VectorXd& x) { return stereographic(SpherePoint::from(x)); },
      py::arg("x"));
  m.def(
      "moebius_action",
      [](const Eigen::MatrixXd& t, const Eigen::VectorXd& x) {
        return moebius_action(LorentzMatrix(t), SpherePoint::from(x)).coords();
      },
      py::arg("matrix"), py::arg("x"));
  m.def(
      "light_cone_lift", [](const Eigen::VectorXd& x) { return light_cone_lift(SpherePoint::from(x)); },
      py::arg("x"));
  m.def(
      "horosphere_level",
      [](const Eigen::VectorXd& z, const Eigen::VectorXd& y) {
        return horosphere_level(z, HyperbolicPoint::from(y));
      },
      py::arg("z"), py::arg("y"));
}
