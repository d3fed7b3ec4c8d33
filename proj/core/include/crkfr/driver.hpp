#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crkfr/field_io.hpp"
#include "crkfr/problems.hpp"
#include "crkfr/scheme.hpp"
#include "crkfr/solver.hpp"

namespace crkfr {

struct OutputOptions {
  std::string dump;          // final field dump path (empty: none)
  std::string report;        // JSON report path (empty: none)
  double dump_interval = 0;  // > 0 also dumps at multiples of this time
  int log_every = 0;         // progress line every n steps (0: off)
};

struct RunConfig {
  std::string problem;
  int nx = 0, ny = 0;           // 0 keeps the problem default
  double final_time = -1.0;     // < 0 keeps the problem default
  SchemeOptions scheme;
  LimiterOptions limiter;
  std::array<std::optional<BoundaryKind>, 4> boundary{};  // per-side overrides
  BoundaryTreatment treatment = BoundaryTreatment::InterfaceGhost;
  ProblemParams physics;
  OutputOptions output;
  long max_steps = 0;  // 0: unlimited
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;  // filled by the config parser
};

struct ErrorNorms {
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

struct RunReport {
  std::string problem, equation;
  int dim = 1, nx = 0, ny = 1, degree = 0;
  std::string points, dissipation, trace, blend, tableau;
  bool flux_limiter = false, scaling_limiter = false;
  long steps = 0;
  double final_time = 0.0;
  double cfl = 0.0;
  double dt_min = 0.0, dt_max = 0.0;
  std::optional<ErrorNorms> errors;
  /// Smallest value of each admissibility constraint over all nodes of every
  /// accepted step (including the initial field).
  std::vector<double> min_constraint;
  std::vector<double> min_constraint_final;
  std::vector<double> mass_initial, mass_final;
  long limited_face_points = 0;
  long mh_fallbacks = 0;
  long stage_failures = 0;
  long scaled_elements = 0;
  double alpha_max = 0.0;
  double alpha_mean = 0.0;  // averaged over steps
  CommCounters counters;
  PhaseTimes times;
  double wall_time = 0.0;
  int threads = 1;
  std::vector<std::string> warnings;
  std::vector<std::string> dumps;
  FieldDump field;
};

using LogFn = std::function<void(const std::string&)>;

/// Applies the pool size: `requested` (0 = OpenMP default) capped by the
/// CRKFR_THREADS environment variable. Returns the resulting size.
int configure_threads(int requested);

/// Full time loop for the configured catalog problem. Throws ConfigError for
/// invalid settings, AdmissibilityError/StageFailure when the run aborts.
RunReport run(const RunConfig& cfg, const LogFn& log = {});

/// L1/L2/Linf errors of the first variable against `exact`, sampled at N+3
/// equispaced midpoints per direction in every element.
template <int M>
ErrorNorms error_norms(const SolutionField<M>& u, const std::function<Vec<M>(const Point&, double)>& exact) {
  const int n = u.n();
  const int ns = u.basis.degree + 3;
  const bool two = u.mesh.dim == 2;
  std::vector<double> xi(ns);
  for (int j = 0; j < ns; ++j) xi[j] = (j + 0.5) / ns;
  const auto interp = u.basis.interpolation_matrix(xi);
  const double w = u.mesh.cell_volume() / (two ? ns * ns : ns);
  ErrorNorms r;
  double l2 = 0.0;
  for (int e = 0; e < u.mesh.num_elements(); ++e) {
    const int ix = e % u.mesh.nx, iy = e / u.mesh.nx;
    const double x0 = u.mesh.x_left(ix), y0 = u.mesh.y_bottom(iy);
    for (int b = 0; b < (two ? ns : 1); ++b) {
      for (int a = 0; a < ns; ++a) {
        double v = 0.0;
        for (int q = 0; q < (two ? n : 1); ++q) {
          const double lq = two ? interp[b * n + q] : 1.0;
          for (int p = 0; p < n; ++p) v += lq * interp[a * n + p] * u.at(e, p, q)[0];
        }
        const Point pt{x0 + xi[a] * u.mesh.dx(), two ? y0 + xi[b] * u.mesh.dy() : 0.0};
        const double err = std::abs(v - exact(pt, u.time)[0]);
        r.l1 += w * err;
        l2 += w * err * err;
        r.linf = std::max(r.linf, err);
      }
    }
  }
  r.l2 = std::sqrt(l2);
  return r;
}

struct EocRow {
  int mesh = 0;
  long ndof = 0;
  ErrorNorms errors;
  double eoc = 0.0;  // from L2, 0 on the first row
};

/// Runs `tmpl` on every mesh size (nx = ny = m in 2-D) and tabulates the
/// observed order log(e_prev / e) / log(m / m_prev).
std::vector<EocRow> convergence_study(const RunConfig& tmpl, const std::vector<int>& meshes,
                                      const LogFn& log = {});
void write_eoc_csv(const std::string& path, const std::vector<EocRow>& rows);
std::string eoc_csv(const std::vector<EocRow>& rows);

std::string report_json(const RunReport& r, int indent = 2);

}  // namespace crkfr
