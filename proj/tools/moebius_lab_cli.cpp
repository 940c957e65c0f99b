// moebius-lab: invariant reports, orbit classification and the acceptance
// matrix from the command line.
//
// Exit status: 0 all verdicts pass, 1 a verdict failed, 2 usage error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "moebius_lab/errors.hpp"
#include "moebius_lab/report.hpp"

using namespace moebius_lab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pulls --tol.<name>=v and --tol.<name> v out of argv; CLI11 does not do
// prefix-matched option families.
std::vector<std::pair<std::string, std::string>> extract_tolerances(std::vector<std::string>& args) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> rest;
  const std::string prefix = "--tol.";
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind(prefix, 0) != 0) {
      rest.push_back(a);
      continue;
    }
    const std::string body = a.substr(prefix.size());
    const auto eq = body.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else {
      if (i + 1 >= args.size()) throw UsageError(a + " needs a value");
      out.emplace_back(body, args[++i]);
    }
  }
  args = std::move(rest);
  return out;
}

void apply_tolerances(const std::vector<std::pair<std::string, std::string>>& overrides,
                      Tolerances& tol) {
  for (const auto& [name, text] : overrides) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size())
      throw UsageError("--tol." + name + ": not a number: " + text);
    tol.set(name, v);
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::pair<std::string, std::string>> overrides;
  try {
    overrides = extract_tolerances(args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App app{"Moebius invariants of hypersurfaces in S^{n+1}", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  app.footer("Tolerances are overridden with --tol.<name>=value; see `list-tolerances`.");

  RunConfig cfg;
  std::string format = "json";
  std::string out;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    sub->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--out", out, "output file (default stdout)");
    sub->add_option("--workers", cfg.workers, "worker threads (0 = automatic)");
  };

  CLI::App* inv = app.add_subcommand("invariants", "per-point invariants with verdicts");
  inv->add_option("--family", cfg.family, "family selector, e.g. torus:n=2:k=1:r=0.6")->required();
  inv->add_option("--samples", cfg.samples, "number of sample points")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  add_common(inv);

  CLI::App* orb = app.add_subcommand("orbit", "orbit classification of the family's group");
  orb->add_option("--family", cfg.family, "family selector")->required();
  orb->add_option("--samples", cfg.samples, "number of group elements and homogeneity pairs")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  add_common(orb);

  CLI::App* ver = app.add_subcommand("verify-all", "run the acceptance matrix");
  add_common(ver);

  CLI::App* fams = app.add_subcommand("list-families", "print the standard family selectors");
  CLI::App* tols = app.add_subcommand("list-tolerances", "print tolerance names and defaults");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    apply_tolerances(overrides, cfg.tol);

    if (*fams) {
      for (const std::string& s : standard_selectors()) std::cout << s << "\n";
      return kExitPass;
    }
    if (*tols) {
      for (const auto& [k, v] : Tolerances::defaults()) std::printf("%-14s %g\n", k.c_str(), v);
      return kExitPass;
    }

    if (*ver) {
      VerifyConfig vc;
      vc.seed = cfg.seed;
      vc.tol = cfg.tol;
      vc.workers = cfg.workers;
      const std::vector<CriterionResult> results = run_all_criteria(vc);
      const Json report = verify_all_report(vc, results);
      emit(format == "csv" ? verify_all_csv(report) : to_json_text(report), out);
      for (const CriterionResult& r : results) {
        std::fprintf(stderr, "criterion %2d: %s  %s\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str());
        for (const Check& c : r.checks)
          if (!c.pass)
            std::fprintf(stderr, "    failed: %s: %.6g %s %.3g%s%s\n", c.name.c_str(), c.value,
                         c.relation == ">=" ? "<" : ">", c.tolerance, c.error.empty() ? "" : ": ",
                         c.error.c_str());
      }
      return report["pass"].get<bool>() ? kExitPass : kExitFail;
    }

    bool pass = false;
    Json report;
    std::string text;
    if (*inv) {
      report = invariants_report(cfg, pass);
      text = format == "csv" ? invariants_csv(report) : to_json_text(report);
    } else {
      report = orbit_report(cfg, pass);
      text = format == "csv" ? orbit_csv(report) : to_json_text(report);
    }
    emit(text, out);
    for (const Json& v : report["verdicts"])
      if (!v["pass"].get<bool>())
        std::fprintf(stderr, "verdict failed: %s\n", v["name"].get<std::string>().c_str());
    return pass ? kExitPass : kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::UnknownFamily:
      case ErrorCode::InvalidParameter:
      case ErrorCode::MissingGroup:
      case ErrorCode::DimensionMismatch:
        return kExitUsage;
      default:
        return kExitFail;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
