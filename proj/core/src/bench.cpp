#include "crkfr/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace crkfr {

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

long long per_side(long long total, long long sides) {
  if (sides == 0) return 0;
  if (total % sides != 0) throw std::logic_error("trace counter is not a whole multiple of the face sides");
  return total / sides;
}

template <class Eq>
BenchReport bench_setup(ProblemSetup<Eq> setup, const RunConfig& cfg, int reps, int warmup) {
  for (int s = 0; s < 2 * Eq::kDim; ++s)
    if (cfg.boundary[s]) setup.boundary.kinds[s] = *cfg.boundary[s];
  setup.boundary.treatment = cfg.treatment;
  BenchReport r;
  r.threads = configure_threads(cfg.scheme.threads);
  CrkSolver<Eq> solver(setup, cfg.scheme, cfg.limiter);
  const auto u0 = solver.initial_field();
  const double dt = std::min(solver.compute_dt(u0), setup.final_time > 0.0 ? setup.final_time : 1.0);
  r.problem = setup.id;
  r.dissipation = std::string(to_string(cfg.scheme.dissipation));
  r.vars = Eq::kVars;
  r.stages = solver.tableau().stages;
  r.repetitions = reps;
  for (int i = 0; i < warmup; ++i) {
    auto u = u0;
    solver.step(u, dt);
  }
  const char* names[] = {"indicator", "stages", "low_order", "fluxes", "update", "total"};
  std::vector<std::vector<double>> samples(6);
  std::vector<double> coverage;
  for (int i = 0; i < reps; ++i) {
    auto u = u0;
    solver.times = PhaseTimes{};
    solver.counters = CommCounters{};
    solver.step(u, dt);
    const auto& t = solver.times;
    const double parts[] = {t.indicator, t.stages, t.low_order, t.fluxes, t.update, t.total};
    for (int k = 0; k < 6; ++k) samples[k].push_back(parts[k]);
    const double sum = t.indicator + t.stages + t.low_order + t.fluxes + t.update;
    coverage.push_back(t.total > 0.0 ? sum / t.total : 1.0);
    if (i == 0) {
      const auto& c = solver.counters;
      r.per_face_side.solution_trace = per_side(c.solution_trace, c.face_sides);
      r.per_face_side.time_average = per_side(c.time_average, c.face_sides);
      r.per_face_side.stage_trace = per_side(c.stage_trace, c.face_sides);
    }
  }
  for (int k = 0; k < 6; ++k)
    r.phases.push_back({names[k], quantile(samples[k], 0.5), quantile(samples[k], 0.1), quantile(samples[k], 0.9)});
  r.phase_coverage = quantile(coverage, 0.5);
  return r;
}

}  // namespace

BenchReport bench_step(const RunConfig& cfg, int repetitions, int warmup) {
  if (warmup < 3) throw ConfigError("bench needs at least 3 warm-up steps");
  if (repetitions < 1) throw ConfigError("bench needs at least one repetition");
  ProblemParams p = cfg.physics;
  p.nx = cfg.nx;
  p.ny = cfg.ny;
  return with_problem(cfg.problem, p,
                      [&](auto setup) { return bench_setup(std::move(setup), cfg, repetitions, warmup); });
}

std::string bench_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "# problem=" << r.problem << " dissipation=" << r.dissipation << " vars=" << r.vars
      << " stages=" << r.stages << " threads=" << r.threads << " repetitions=" << r.repetitions << '\n';
  out << "phase,median_s,p10_s,p90_s\n";
  char buf[160];
  for (const auto& p : r.phases) {
    std::snprintf(buf, sizeof buf, "%s,%.6e,%.6e,%.6e\n", p.phase.c_str(), p.median, p.p10, p.p90);
    out << buf;
  }
  out << "counter,values_per_face_side\n";
  out << "solution_trace," << r.per_face_side.solution_trace << '\n';
  out << "time_average," << r.per_face_side.time_average << '\n';
  out << "stage_trace," << r.per_face_side.stage_trace << '\n';
  std::snprintf(buf, sizeof buf, "phase_coverage,%.4f\n", r.phase_coverage);
  out << buf;
  return out.str();
}

}  // namespace crkfr
