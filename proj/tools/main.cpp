#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crkfr/bench.hpp"
#include "crkfr/config.hpp"
#include "crkfr/driver.hpp"
#include "crkfr/errors.hpp"

namespace {

constexpr int kExitAdmissibility = 2;
constexpr int kExitConfig = 3;

std::vector<int> parse_meshes(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw crkfr::ConfigError("bad mesh size '" + tok + "' in --meshes");
    }
  }
  if (out.empty()) throw crkfr::ConfigError("--meshes needs at least one size");
  return out;
}

void log_line(const std::string& s) { std::cerr << s << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cRKFR solver for hyperbolic conservation laws"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run one configuration to its final time");
  run->add_option("config", config, "INI run configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--override,-o", overrides, "section.key=value");
  run->add_flag("--quiet,-q", quiet, "Only print errors");

  std::string meshes = "32,64,128,256";
  std::string eoc_out;
  auto* converge = app.add_subcommand("converge", "Convergence study against the exact solution");
  converge->add_option("config", config, "INI run configuration")->required()->check(CLI::ExistingFile);
  converge->add_option("--meshes", meshes, "Comma-separated element counts per direction");
  converge->add_option("--out", eoc_out, "EOC table path (CSV); stdout when omitted");
  converge->add_option("--override,-o", overrides, "section.key=value");

  int reps = 20;
  int warmup = 3;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Per-phase step timings and trace counters");
  bench->add_option("config", config, "INI run configuration")->required()->check(CLI::ExistingFile);
  bench->add_option("--repetitions,-r", reps, "Timed steps")->check(CLI::PositiveNumber);
  bench->add_option("--warmup", warmup, "Untimed steps (>= 3)");
  bench->add_option("--out", bench_out, "Report path (CSV); stdout when omitted");
  bench->add_option("--override,-o", overrides, "section.key=value");

  auto* list = app.add_subcommand("list-problems", "Print the built-in problem catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*list) {
      for (const auto& p : crkfr::problem_catalog()) {
        std::printf("%-28s %-18s %dD  mesh %d", p.id.c_str(), p.equation.c_str(), p.dim, p.default_nx);
        if (p.dim == 2) std::printf("x%d", p.default_ny);
        std::printf("  t=%-8g %s%s\n", p.final_time, p.has_exact ? "[exact] " : "", p.description.c_str());
      }
      return 0;
    }
    const auto cfg = crkfr::parse_config(config, overrides);
    if (*run) {
      const auto report = crkfr::run(cfg, quiet ? crkfr::LogFn{} : crkfr::LogFn{log_line});
      if (!quiet) {
        if (report.errors)
          std::printf("L1 %.6e  L2 %.6e  Linf %.6e\n", report.errors->l1, report.errors->l2, report.errors->linf);
        for (std::size_t k = 0; k < report.min_constraint.size(); ++k)
          std::printf("min constraint %zu: %.6e\n", k, report.min_constraint[k]);
      }
      return 0;
    }
    if (*converge) {
      const auto rows = crkfr::convergence_study(cfg, parse_meshes(meshes), crkfr::LogFn{log_line});
      if (eoc_out.empty()) std::cout << crkfr::eoc_csv(rows);
      else crkfr::write_eoc_csv(eoc_out, rows);
      return 0;
    }
    if (*bench) {
      const auto r = crkfr::bench_step(cfg, reps, warmup);
      if (bench_out.empty()) {
        std::cout << crkfr::bench_csv(r);
      } else {
        std::ofstream out(bench_out);
        if (!out) throw crkfr::ConfigError("cannot write " + bench_out);
        out << crkfr::bench_csv(r);
      }
      return 0;
    }
  } catch (const crkfr::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const crkfr::AdmissibilityError& e) {
    std::cerr << "admissibility failure at step " << e.step() << ", element " << e.element() << ": " << e.what()
              << '\n';
    return kExitAdmissibility;
  } catch (const crkfr::StageFailure& e) {
    std::cerr << "stage failure in element " << e.element() << ": " << e.what() << '\n';
    return kExitAdmissibility;
  } catch (const crkfr::DomainError& e) {
    std::cerr << "non-physical state: " << e.what() << '\n';
    return kExitAdmissibility;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
