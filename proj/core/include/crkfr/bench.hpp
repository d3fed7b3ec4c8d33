#pragma once

#include <string>
#include <vector>

#include "crkfr/driver.hpp"

namespace crkfr {

struct PhaseStats {
  std::string phase;
  double median = 0.0, p10 = 0.0, p90 = 0.0;  // seconds per step
};

/// Values written to trace buffers in one step, divided by the number of
/// element face sides (element faces times face points). Exact integers.
struct TraceVolume {
  long long solution_trace = 0;
  long long time_average = 0;
  long long stage_trace = 0;
  long long total() const { return solution_trace + time_average + stage_trace; }
};

struct BenchReport {
  std::string problem;
  std::string dissipation;
  int vars = 0;
  int stages = 0;
  int threads = 1;
  int repetitions = 0;
  std::vector<PhaseStats> phases;  // indicator, stages, low_order, fluxes, update, total
  TraceVolume per_face_side;
  /// Median over repetitions of (sum of phase times) / (total step time).
  double phase_coverage = 0.0;
};

/// Times `repetitions` single steps from the initial field of `cfg` after
/// `warmup` (>= 3) untimed steps. Throws ConfigError for warmup < 3 or
/// repetitions < 1.
BenchReport bench_step(const RunConfig& cfg, int repetitions, int warmup = 3);

std::string bench_csv(const BenchReport& r);

}  // namespace crkfr
