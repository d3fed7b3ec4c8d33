#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "crkfr/boundary.hpp"
#include "crkfr/problems.hpp"
#include "crkfr/solver.hpp"
#include "oracles.hpp"

using namespace crkfr;

namespace {

using S3 = Vec<3>;

FaceSide<S3> side(const S3& u, const S3& F, const S3& U) {
  FaceSide<S3> s;
  s.u = u;
  s.F = F;
  s.U = U;
  return s;
}

}  // namespace

TEST(Boundary, WallReflectsTraces) {
  Euler1D eq;
  const S3 u{{1.0, 0.3, 2.5}};
  const auto in = side(u, eq.flux(u, {}, 0), u);
  const auto g = interface_ghost_values(eq, BoundaryKind::Wall, in, 0, {}, 0.0, 0.1, crk22(), {});
  EXPECT_EQ(g.u, (S3{{1.0, -0.3, 2.5}}));
  EXPECT_EQ(g.U, (S3{{1.0, -0.3, 2.5}}));
  const auto f = eq.flux(u, {}, 0);
  EXPECT_EQ(g.F, (S3{{-f[0], f[1], -f[2]}}));
  const auto back = interface_ghost_values(eq, BoundaryKind::Wall, g, 0, {}, 0.0, 0.1, crk22(), {});
  EXPECT_EQ(back.u, in.u);
  EXPECT_EQ(back.F, in.F);
  EXPECT_EQ(back.U, in.U);
}

TEST(Boundary, WallIsRejectedForScalars) {
  FaceSide<Vec<1>> in;
  EXPECT_THROW(interface_ghost_values(Burgers1D{}, BoundaryKind::Wall, in, 0, {}, 0.0, 0.1, crk22(), {}),
               ConfigError);
}

TEST(Boundary, SteadyInflowGivesPhysicalFlux) {
  Euler1D eq;
  const auto gstate = eq.from_primitive(1.2, 0.8, 0.9);
  const std::function<S3(double)> g = [gstate](double) { return gstate; };
  for (const auto& tab : {crk22(), crk33(), crk44()}) {
    const auto ghost = interface_ghost_values(eq, BoundaryKind::Inflow, FaceSide<S3>{}, 0, g, 0.3, 0.01, tab, {});
    const auto f = eq.flux(gstate, {}, 0);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(ghost.F[k], f[k], 1e-14);
      EXPECT_NEAR(ghost.U[k], gstate[k], 1e-14);
    }
    EXPECT_EQ(ghost.u, gstate);
  }
}

TEST(Boundary, InflowSamplesStageTimes) {
  const std::function<Vec<1>(double)> g = [](double t) { return Vec<1>{{t}}; };
  const auto tab = crk33();
  const auto ghost = interface_ghost_values(LinearAdvection1D{2.0}, BoundaryKind::Inflow, FaceSide<Vec<1>>{}, 0, g,
                                            1.0, 0.1, tab, {});
  double ref = 0.0;
  for (int i = 0; i < 3; ++i) ref += tab.b[i] * (1.0 + tab.c[i] * 0.1);
  EXPECT_NEAR(ghost.U[0], ref, 1e-15);
  EXPECT_NEAR(ghost.F[0], 2.0 * ref, 1e-15);
  EXPECT_EQ(ghost.u[0], 1.0);
}

TEST(Boundary, InflowWithoutDataIsConfigError) {
  EXPECT_THROW(interface_ghost_values(Burgers1D{}, BoundaryKind::Inflow, FaceSide<Vec<1>>{}, 0, {}, 0.0, 0.1,
                                      crk22(), {}),
               ConfigError);
  auto setup = make_varadv_x2(ProblemParams{});
  setup.boundary_state = nullptr;
  EXPECT_THROW(CrkSolver<VariableAdvection1D>(setup, SchemeOptions{}, LimiterOptions{}), ConfigError);
}

TEST(Boundary, SolverRejectsInconsistentSpecs) {
  auto setup = make_linear_advection(ProblemParams{});
  setup.boundary.kinds[0] = BoundaryKind::Outflow;
  EXPECT_THROW(CrkSolver<LinearAdvection1D>(setup, SchemeOptions{}, LimiterOptions{}), ConfigError);
  setup.boundary.kinds[1] = BoundaryKind::Wall;
  EXPECT_THROW(CrkSolver<LinearAdvection1D>(setup, SchemeOptions{}, LimiterOptions{}), ConfigError);
  auto two = make_isentropic_vortex(ProblemParams{});
  two.boundary.treatment = BoundaryTreatment::GhostElement;
  EXPECT_THROW(CrkSolver<Euler2D>(two, SchemeOptions{}, LimiterOptions{}), ConfigError);
}

TEST(Boundary, WallWithMirrorDataHasNoMassFlux) {
  Euler1D eq;
  auto g = oracle::rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto u = eq.from_primitive(oracle::uniform(g, 0.5, 2), oracle::uniform(g, -1, 1), oracle::uniform(g, 0.5, 2));
    const auto U = eq.from_primitive(oracle::uniform(g, 0.5, 2), oracle::uniform(g, -1, 1), oracle::uniform(g, 0.5, 2));
    const auto in = side(u, eq.flux(U, {}, 0), U);
    const auto ghost = interface_ghost_values(eq, BoundaryKind::Wall, in, 0, {}, 0.0, 0.01, crk22(), {});
    for (auto d : {Dissipation::D1, Dissipation::D2}) {
      const auto right = boundary_flux(eq, BoundaryKind::Wall, in, ghost, true, d, crk22(), {}, 0);
      const auto left = boundary_flux(eq, BoundaryKind::Wall, in, ghost, false, d, crk22(), {}, 0);
      EXPECT_NEAR(right[0], 0.0, 1e-14);
      EXPECT_NEAR(left[0], 0.0, 1e-14);
    }
  }
}

TEST(Boundary, ConstantStateGivesPhysicalFlux) {
  Euler1D eq;
  const auto u = eq.from_primitive(1.0, 0.4, 1.2);
  const auto f = eq.flux(u, {}, 0);
  auto in = side(u, f, u);
  in.stages = {u, u};
  const std::function<S3(double)> g = [u](double) { return u; };
  for (auto kind : {BoundaryKind::Periodic, BoundaryKind::Outflow, BoundaryKind::Inflow, BoundaryKind::MixedHllc}) {
    const auto ghost = interface_ghost_values(eq, kind, in, 0, g, 0.0, 0.01, crk22(), {});
    for (auto d : {Dissipation::D1, Dissipation::D2, Dissipation::DCSX}) {
      const auto F = boundary_flux(eq, kind, in, ghost, true, d, crk22(), {}, 0);
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(F[k], f[k], 1e-14) << to_string(kind);
    }
  }
}

TEST(Boundary, HllcReducesToUpwindForSupersonicFlow) {
  Euler1D eq;
  const auto a = eq.from_primitive(1.0, 5.0, 1.0), b = eq.from_primitive(0.5, 5.0, 0.7);
  FaceData<S3> fd;
  fd.u_minus = fd.U_minus = a;
  fd.u_plus = fd.U_plus = b;
  fd.F_minus = eq.flux(a, {}, 0);
  fd.F_plus = eq.flux(b, {}, 0);
  EXPECT_EQ(hllc_time_averaged(eq, fd, 0), fd.F_minus);
}

TEST(Boundary, PeriodicGhostElementMatchesDirect) {
  auto direct = make_linear_advection(ProblemParams{});
  direct.mesh = Mesh::line(16, 0.0, 1.0);
  auto ghost = direct;
  ghost.boundary.treatment = BoundaryTreatment::GhostElement;
  SchemeOptions so;
  so.degree = 3;
  CrkSolver<LinearAdvection1D> a(direct, so, {}), b(ghost, so, {});
  auto ua = a.initial_field(), ub = b.initial_field();
  for (int s = 0; s < 20; ++s) {
    const double dt = a.compute_dt(ua);
    a.step(ua, dt);
    b.step(ub, dt);
    EXPECT_NEAR(a.x_face_flux(0)[0], b.x_face_flux(0)[0], 1e-12);
    EXPECT_NEAR(a.x_face_flux(16)[0], b.x_face_flux(16)[0], 1e-12);
  }
  for (std::size_t i = 0; i < ua.values.size(); ++i) EXPECT_NEAR(ua.values[i][0], ub.values[i][0], 1e-12);
}

TEST(Boundary, PeriodicTotalsAreConservedForEuler) {
  ProblemParams pp;
  auto setup = make_blast(pp);
  setup.mesh = Mesh::line(50, 0.0, 1.0);
  for (auto& k : setup.boundary.kinds) k = BoundaryKind::Periodic;
  Euler1D eq = setup.eq;
  setup.initial = [eq](const Point& x) {
    return eq.from_primitive(1.0 + 0.3 * std::sin(2 * std::numbers::pi * x.x), 0.5, 1.0);
  };
  SchemeOptions so;
  so.degree = 2;
  CrkSolver<Euler1D> s(setup, so, {});
  auto u = s.initial_field();
  const auto m0 = u.total();
  for (int i = 0; i < 100; ++i) s.step(u, s.compute_dt(u));
  const auto m1 = u.total();
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(m1[k], m0[k], 1e-12 * std::abs(m0[k]) + 1e-15);
}

TEST(Boundary, FullyOutgoingFollowsCharacteristics) {
  Euler1D eq;
  const auto sub = eq.from_primitive(1.0, 0.5, 1.0), sup = eq.from_primitive(1.0, 3.0, 1.0);
  EXPECT_FALSE(fully_outgoing(eq, sub, {}, 0, true));
  EXPECT_FALSE(fully_outgoing(eq, sub, {}, 0, false));
  EXPECT_TRUE(fully_outgoing(eq, sup, {}, 0, true));
  EXPECT_FALSE(fully_outgoing(eq, sup, {}, 0, false));
  EXPECT_TRUE(fully_outgoing(Burgers1D{}, Vec<1>{{-0.5}}, {}, 0, false));
  EXPECT_FALSE(fully_outgoing(Burgers1D{}, Vec<1>{{-0.5}}, {}, 0, true));
}

TEST(Boundary, SubsonicOutflowKeepsUniformFlow) {
  auto setup = make_titarev_toro(ProblemParams{});
  setup.mesh = Mesh::line(40, -5.0, 5.0);
  const Euler1D eq = setup.eq;
  const auto state = eq.from_primitive(1.515695, 0.523346, 1.805);
  setup.initial = [state](const Point&) { return state; };
  SchemeOptions so;
  so.degree = 3;
  so.cfl_safety = 0.95;
  CrkSolver<Euler1D> s(setup, so, {});
  auto u = s.initial_field();
  for (int i = 0; i < 600; ++i) s.step(u, s.compute_dt(u));
  for (const auto& v : u.values)
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(v[k], state[k], 1e-11);
}
