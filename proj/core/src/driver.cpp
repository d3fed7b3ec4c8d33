#include "crkfr/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crkfr/cfl.hpp"

namespace crkfr {

int configure_threads(int requested) {
#ifdef _OPENMP
  int n = requested > 0 ? requested : omp_get_num_procs();
  if (const char* env = std::getenv("CRKFR_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  n = std::max(n, 1);
  omp_set_num_threads(n);
  return n;
#else
  (void)requested;
  return 1;
#endif
}

namespace {

std::string numbered_path(const std::string& path, int index) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%04d", index);
  return (p.parent_path() / (p.stem().string() + buf + p.extension().string())).string();
}

template <class Eq>
std::vector<double> nodal_constraint_min(const Eq& eq, const SolutionField<Eq::kVars>& u) {
  std::vector<double> m(Eq::kConstraints, std::numeric_limits<double>::infinity());
  for (const auto& v : u.values)
    for (int k = 0; k < Eq::kConstraints; ++k) m[k] = std::min(m[k], eq.constraint(k, v));
  return m;
}

template <class State>
std::vector<double> as_vector(const State& s) {
  return std::vector<double>(s.v.begin(), s.v.end());
}

template <class Eq>
RunReport run_setup(ProblemSetup<Eq> setup, const RunConfig& cfg, const LogFn& log) {
  const auto t_start = std::chrono::steady_clock::now();
  if (cfg.final_time >= 0.0) setup.final_time = cfg.final_time;
  for (int s = 0; s < 2 * Eq::kDim; ++s)
    if (cfg.boundary[s]) setup.boundary.kinds[s] = *cfg.boundary[s];
  setup.boundary.treatment = cfg.treatment;
  if (!(cfg.scheme.cfl_safety > 0.0 && cfg.scheme.cfl_safety <= 1.0))
    throw ConfigError("cfl_safety must lie in (0, 1]");

  RunReport r;
  r.threads = configure_threads(cfg.scheme.threads);
  r.warnings = cfg.warnings;
  CrkSolver<Eq> solver(setup, cfg.scheme, cfg.limiter);
  if (solver.tableau().order != cfg.scheme.degree + 1)
    r.warnings.push_back("tableau " + solver.tableau().name + " has order " +
                         std::to_string(solver.tableau().order) + " but degree " +
                         std::to_string(cfg.scheme.degree) + " expects order " +
                         std::to_string(cfg.scheme.degree + 1));
  if (log)
    for (const auto& w : r.warnings) log("warning: " + w);

  const Eq& eq = solver.equation();
  auto u = solver.initial_field();
  r.problem = setup.id;
  r.equation = Eq::kName;
  r.dim = Eq::kDim;
  r.nx = setup.mesh.nx;
  r.ny = setup.mesh.ny;
  r.degree = cfg.scheme.degree;
  r.points = std::string(to_string(cfg.scheme.points));
  r.dissipation = std::string(to_string(cfg.scheme.dissipation));
  r.trace = std::string(to_string(cfg.scheme.trace));
  r.blend = std::string(to_string(cfg.limiter.blend));
  r.tableau = solver.tableau().name;
  r.flux_limiter = cfg.limiter.flux_limiter;
  r.scaling_limiter = cfg.limiter.scaling_limiter;
  r.cfl = solver.cfl();
  r.mass_initial = as_vector(u.total());
  r.min_constraint = nodal_constraint_min(eq, u);
  r.dt_min = std::numeric_limits<double>::infinity();

  const auto names = eq.variable_names();
  const double T = setup.final_time;
  const double interval = cfg.output.dump_interval;
  int dump_index = 0;
  double next_dump = interval > 0.0 ? interval : std::numeric_limits<double>::infinity();
  if (interval > 0.0 && !cfg.output.dump.empty()) {
    const auto path = numbered_path(cfg.output.dump, dump_index++);
    write_field(path, make_dump(u, Eq::kName, names));
    r.dumps.push_back(path);
  }

  double alpha_sum = 0.0;
  while (u.time < T) {
    if (cfg.max_steps > 0 && r.steps >= cfg.max_steps) break;
    const double target = std::min(T, next_dump);
    double dt = solver.compute_dt(u);
    bool clipped = false;
    if (!(u.time + dt * (1.0 + 1e-12) < target)) {
      dt = target - u.time;
      clipped = true;
    }
    solver.step(u, dt);
    if (clipped) u.time = target;
    ++r.steps;
    r.dt_min = std::min(r.dt_min, dt);
    r.dt_max = std::max(r.dt_max, dt);
    const auto& d = solver.diagnostics();
    r.limited_face_points += d.limited_face_points;
    r.mh_fallbacks += d.mh_fallbacks;
    r.stage_failures += d.stage_failures;
    r.scaled_elements += d.scaled_elements;
    r.alpha_max = std::max(r.alpha_max, d.alpha_max);
    alpha_sum += d.alpha_mean;
    const auto mc = nodal_constraint_min(eq, u);
    for (int k = 0; k < Eq::kConstraints; ++k) r.min_constraint[k] = std::min(r.min_constraint[k], mc[k]);
    if (clipped && u.time == next_dump) {
      if (!cfg.output.dump.empty() && u.time < T) {
        const auto path = numbered_path(cfg.output.dump, dump_index++);
        write_field(path, make_dump(u, Eq::kName, names));
        r.dumps.push_back(path);
      }
      next_dump += interval;
    }
    if (log && cfg.output.log_every > 0 && r.steps % cfg.output.log_every == 0) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "step %ld  t = %.6e  dt = %.3e  alpha_max = %.3f", r.steps, u.time, dt,
                    d.alpha_max);
      log(buf);
    }
  }
  if (r.steps == 0) r.dt_min = 0.0;
  r.alpha_mean = r.steps > 0 ? alpha_sum / r.steps : 0.0;
  r.final_time = u.time;
  r.mass_final = as_vector(u.total());
  r.min_constraint_final = nodal_constraint_min(eq, u);
  if (setup.exact) r.errors = error_norms<Eq::kVars>(u, setup.exact);
  r.counters = solver.counters;
  r.times = solver.times;
  r.field = make_dump(u, Eq::kName, names);
  if (!cfg.output.dump.empty()) {
    const auto path = interval > 0.0 ? numbered_path(cfg.output.dump, dump_index++) : cfg.output.dump;
    write_field(path, r.field);
    r.dumps.push_back(path);
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (!cfg.output.report.empty()) {
    std::ofstream out(cfg.output.report);
    if (!out) throw ConfigError("cannot write report " + cfg.output.report);
    out << report_json(r) << '\n';
  }
  if (log) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s: %ld steps to t = %.6g in %.2f s", r.problem.c_str(), r.steps,
                  r.final_time, r.wall_time);
    log(buf);
  }
  return r;
}

}  // namespace

RunReport run(const RunConfig& cfg, const LogFn& log) {
  ProblemParams p = cfg.physics;
  p.nx = cfg.nx;
  p.ny = cfg.ny;
  return with_problem(cfg.problem, p, [&](auto setup) { return run_setup(std::move(setup), cfg, log); });
}

std::vector<EocRow> convergence_study(const RunConfig& tmpl, const std::vector<int>& meshes, const LogFn& log) {
  if (meshes.empty()) throw ConfigError("convergence study needs at least one mesh");
  const auto& info = problem_info(tmpl.problem);
  if (!info.has_exact) throw ConfigError("problem '" + tmpl.problem + "' has no exact solution");
  std::vector<EocRow> rows;
  for (int m : meshes) {
    RunConfig c = tmpl;
    c.nx = m;
    c.ny = info.dim == 2 ? m : 0;
    c.output = OutputOptions{};
    const auto r = run(c, log);
    EocRow row;
    row.mesh = m;
    const long npe = info.dim == 2 ? (r.degree + 1L) * (r.degree + 1L) : r.degree + 1L;
    row.ndof = static_cast<long>(r.nx) * r.ny * npe;
    row.errors = *r.errors;
    if (!rows.empty()) {
      const auto& prev = rows.back();
      row.eoc = std::log(prev.errors.l2 / row.errors.l2) / std::log(static_cast<double>(m) / prev.mesh);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string eoc_csv(const std::vector<EocRow>& rows) {
  std::ostringstream out;
  out << "mesh,ndof,l1,l2,linf,eoc\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%ld,%.17g,%.17g,%.17g,%.6f\n", r.mesh, r.ndof, r.errors.l1, r.errors.l2,
                  r.errors.linf, r.eoc);
    out << buf;
  }
  return out.str();
}

void write_eoc_csv(const std::string& path, const std::vector<EocRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << eoc_csv(rows);
}

std::string report_json(const RunReport& r, int indent) {
  nlohmann::ordered_json j;
  j["problem"] = r.problem;
  j["equation"] = r.equation;
  j["dim"] = r.dim;
  j["mesh"] = {r.nx, r.ny};
  j["degree"] = r.degree;
  j["points"] = r.points;
  j["tableau"] = r.tableau;
  j["dissipation"] = r.dissipation;
  j["trace"] = r.trace;
  j["blend"] = r.blend;
  j["flux_limiter"] = r.flux_limiter;
  j["scaling_limiter"] = r.scaling_limiter;
  j["cfl"] = r.cfl;
  j["steps"] = r.steps;
  j["final_time"] = r.final_time;
  j["dt_min"] = r.dt_min;
  j["dt_max"] = r.dt_max;
  if (r.errors) j["errors"] = {{"l1", r.errors->l1}, {"l2", r.errors->l2}, {"linf", r.errors->linf}};
  else j["errors"] = nullptr;
  j["min_constraint"] = r.min_constraint;
  j["min_constraint_final"] = r.min_constraint_final;
  j["mass_initial"] = r.mass_initial;
  j["mass_final"] = r.mass_final;
  j["diagnostics"] = {{"limited_face_points", r.limited_face_points},
                      {"mh_fallbacks", r.mh_fallbacks},
                      {"stage_failures", r.stage_failures},
                      {"scaled_elements", r.scaled_elements},
                      {"alpha_max", r.alpha_max},
                      {"alpha_mean", r.alpha_mean}};
  j["counters"] = {{"solution_trace", r.counters.solution_trace},
                   {"time_average", r.counters.time_average},
                   {"stage_trace", r.counters.stage_trace},
                   {"face_sides", r.counters.face_sides}};
  j["times"] = {{"indicator", r.times.indicator}, {"stages", r.times.stages},
                {"low_order", r.times.low_order}, {"fluxes", r.times.fluxes},
                {"update", r.times.update},       {"total", r.times.total}};
  j["wall_time"] = r.wall_time;
  j["threads"] = r.threads;
  j["warnings"] = r.warnings;
  j["dumps"] = r.dumps;
  return j.dump(indent);
}

}  // namespace crkfr
