#include <algorithm>

#include <gtest/gtest.h>

#include "crkfr/bench.hpp"

using namespace crkfr;

namespace {

RunConfig bench_config(Dissipation d, const std::string& tableau = "") {
  RunConfig c;
  c.problem = "blast";
  c.nx = 40;
  c.scheme.degree = 2;
  c.scheme.dissipation = d;
  c.scheme.tableau = tableau;
  c.scheme.threads = 1;
  return c;
}

}  // namespace

TEST(Bench, TraceVolumeFollowsDissipationModel) {
  const auto d1 = bench_step(bench_config(Dissipation::D1), 2);
  const auto d2 = bench_step(bench_config(Dissipation::D2), 2);
  const auto cs = bench_step(bench_config(Dissipation::DCSX), 2);
  const long long m = d1.vars;
  ASSERT_EQ(m, 3);
  EXPECT_EQ(d1.per_face_side.solution_trace, m);
  EXPECT_EQ(d1.per_face_side.time_average, m);
  EXPECT_EQ(d1.per_face_side.stage_trace, 0);
  EXPECT_EQ(d2.per_face_side.solution_trace, m);
  EXPECT_EQ(d2.per_face_side.time_average, 2 * d1.per_face_side.time_average);
  EXPECT_EQ(d2.per_face_side.stage_trace, 0);
  EXPECT_EQ(cs.per_face_side.solution_trace, 0);
  EXPECT_EQ(cs.per_face_side.time_average, m);
  EXPECT_EQ(cs.per_face_side.stage_trace, m * cs.stages);
}

TEST(Bench, StageTraceScalesWithStages) {
  const auto r = bench_step(bench_config(Dissipation::DCSX, "crk33"), 1);
  EXPECT_EQ(r.stages, 3);
  EXPECT_EQ(r.per_face_side.stage_trace, 3 * r.vars);
}

TEST(Bench, PhasesCoverTheStep) {
  auto c = bench_config(Dissipation::D2);
  c.nx = 400;
  c.scheme.degree = 3;
  c.limiter.blend = BlendKind::MH;
  const auto r = bench_step(c, 5);
  ASSERT_EQ(r.phases.size(), 6u);
  EXPECT_EQ(r.phases.back().phase, "total");
  EXPECT_GE(r.phase_coverage, 0.95);
  for (const auto& p : r.phases) {
    EXPECT_LE(p.p10, p.median);
    EXPECT_LE(p.median, p.p90);
  }
}

TEST(Bench, RejectsShortWarmup) {
  EXPECT_THROW(bench_step(bench_config(Dissipation::D2), 3, 2), ConfigError);
  EXPECT_THROW(bench_step(bench_config(Dissipation::D2), 0), ConfigError);
}

TEST(Bench, CsvHasOneRowPerPhase) {
  const auto csv = bench_csv(bench_step(bench_config(Dissipation::D1), 1));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
  EXPECT_NE(csv.find("phase,median_s,p10_s,p90_s"), std::string::npos);
}
