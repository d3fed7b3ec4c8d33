#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>
#include <vector>

#include "crkfr/crk_core.hpp"
#include "crkfr/equations.hpp"
#include "crkfr/errors.hpp"
#include "crkfr/scheme.hpp"
#include "crkfr/tableau.hpp"

namespace crkfr {

/// Trace data of one side of a face: solution trace at t^n, central flux trace,
/// time-averaged solution trace and (D-CSX) per-stage solution traces.
template <class State>
struct FaceSide {
  State u{}, F{}, U{};
  std::vector<State> stages;
};

template <class State>
FaceData<State> make_face_data(const FaceSide<State>& minus, const FaceSide<State>& plus) {
  FaceData<State> fd;
  fd.u_minus = minus.u;
  fd.u_plus = plus.u;
  fd.F_minus = minus.F;
  fd.F_plus = plus.F;
  fd.U_minus = minus.U;
  fd.U_plus = plus.U;
  fd.stage_minus = minus.stages;
  fd.stage_plus = plus.stages;
  return fd;
}

/// Interface ghost values for one boundary face point.
///  periodic: `interior` must already hold the opposite-boundary traces; returned as is.
///  inflow / mixed_hllc: u = g(t^n), F = sum b_i f(g(t^n + c_i dt)), U = sum b_i g(...).
///  outflow: copy of the interior traces.
///  wall: velocity (and flux) reflection of the interior traces.
template <class Eq>
FaceSide<typename Eq::State> interface_ghost_values(
    const Eq& eq, BoundaryKind kind, const FaceSide<typename Eq::State>& interior, int dir,
    const std::function<typename Eq::State(double)>& g, double tn, double dt,
    const ButcherTableau& tab, const Point& at) {
  using State = typename Eq::State;
  FaceSide<State> ghost;
  switch (kind) {
    case BoundaryKind::Periodic:
    case BoundaryKind::Outflow:
      return interior;
    case BoundaryKind::Inflow:
    case BoundaryKind::MixedHllc: {
      if (!g) throw ConfigError("inflow boundary without boundary data");
      ghost.u = g(tn);
      for (int i = 0; i < tab.stages; ++i) {
        const State gi = g(tn + tab.c[i] * dt);
        if (!interior.stages.empty()) ghost.stages.push_back(gi);
        if (tab.b[i] == 0.0) continue;
        axpy(tab.b[i], eq.flux(gi, at, dir), ghost.F);
        axpy(tab.b[i], gi, ghost.U);
      }
      return ghost;
    }
    case BoundaryKind::Wall: {
      if constexpr (!Eq::kHasWall) {
        throw ConfigError(std::string("wall boundaries are not defined for ") + Eq::kName);
      } else {
        ghost.u = eq.reflect(interior.u, dir);
        ghost.F = eq.reflect_flux(interior.F, dir);
        ghost.U = eq.reflect(interior.U, dir);
        for (const auto& s : interior.stages) ghost.stages.push_back(eq.reflect(s, dir));
        return ghost;
      }
    }
    case BoundaryKind::Problem:
      break;
  }
  throw ConfigError("boundary kind must be resolved before computing ghost values");
}

template <class Eq>
struct IsEuler : std::false_type {};
template <int D>
struct IsEuler<Euler<D>> : std::true_type {};

/// True when every characteristic at `u` leaves the domain through the face.
/// `high_side` is the right/top boundary. Systems other than Euler report true.
template <class Eq>
bool fully_outgoing(const Eq& eq, const typename Eq::State& u, const Point& at, int dir, bool high_side) {
  if constexpr (IsEuler<Eq>::value) {
    const double vn = u[1 + dir] / u[0];
    const double c = std::sqrt(std::max(eq.gamma * eq.pressure(u) / u[0], 0.0));
    return high_side ? vn - c >= 0.0 : vn + c <= 0.0;
  } else if constexpr (Eq::kVars == 1) {
    const double h = 1e-6 * std::max(1.0, std::abs(u[0]));
    auto up = u, um = u;
    up[0] += h;
    um[0] -= h;
    const double a = (eq.flux(up, at, dir)[0] - eq.flux(um, at, dir)[0]) / (2.0 * h);
    return high_side ? a >= 0.0 : a <= 0.0;
  } else {
    return true;
  }
}

/// HLLC flux assembled from time averages: wave speeds and the contact speed use
/// the solution traces u, star states are built from the time-averaged
/// solution U, and the outer fluxes are the time-averaged flux traces F.
template <int D>
Vec<D + 2> hllc_time_averaged(const Euler<D>& eq, const FaceData<Vec<D + 2>>& fd, int dir) {
  using State = Vec<D + 2>;
  const int mn = 1 + dir;
  auto prim = [&](const State& u, double& rho, double& vn, double& p, double& c) {
    rho = u[0];
    vn = u[mn] / rho;
    p = eq.pressure(u);
    c = std::sqrt(std::max(eq.gamma * p / rho, 0.0));
  };
  double rl, vl, pl, cl, rr, vr, pr, cr;
  prim(fd.u_minus, rl, vl, pl, cl);
  prim(fd.u_plus, rr, vr, pr, cr);
  const double sl = std::min(vl - cl, vr - cr);
  const double sr = std::max(vl + cl, vr + cr);
  if (sl >= 0.0) return fd.F_minus;
  if (sr <= 0.0) return fd.F_plus;
  const double den = rl * (sl - vl) - rr * (sr - vr);
  const double ss = den != 0.0 ? (pr - pl + rl * vl * (sl - vl) - rr * vr * (sr - vr)) / den : 0.0;
  auto star = [&](const State& U, double sk) {
    const double rho = U[0], vn = U[mn] / rho, p = eq.pressure(U);
    const double fac = rho * (sk - vn) / (sk - ss);
    State us;
    us[0] = fac;
    for (int d = 1; d <= D; ++d) us[d] = fac * U[d] / rho;
    us[mn] = fac * ss;
    us[D + 1] = fac * (U[D + 1] / rho + (ss - vn) * (ss + p / (rho * (sk - vn))));
    return us;
  };
  if (ss >= 0.0) return fd.F_minus + sl * (star(fd.U_minus, sl) - fd.U_minus);
  return fd.F_plus + sr * (star(fd.U_plus, sr) - fd.U_plus);
}

/// Boundary numerical flux given the interior side and its ghost side.
/// `interior_is_minus` is true on the high side of the domain (right/top).
template <class Eq>
typename Eq::State boundary_flux(const Eq& eq, BoundaryKind kind,
                                 const FaceSide<typename Eq::State>& interior,
                                 const FaceSide<typename Eq::State>& ghost, bool interior_is_minus,
                                 Dissipation model, const ButcherTableau& tab, const Point& at,
                                 int dir) {
  if (kind == BoundaryKind::Inflow) return ghost.F;
  if (kind == BoundaryKind::Outflow) return interior.F;
  const auto fd = interior_is_minus ? make_face_data(interior, ghost) : make_face_data(ghost, interior);
  if (kind == BoundaryKind::MixedHllc) {
    if constexpr (IsEuler<Eq>::value) return hllc_time_averaged(eq, fd, dir);
  }
  if (model == Dissipation::DCSX && fd.stage_minus.empty())
    return numerical_flux(eq, fd, Dissipation::D2, tab, at, dir);
  return numerical_flux(eq, fd, model, tab, at, dir);
}

}  // namespace crkfr
