#pragma once

// Element-level building blocks of the cRKFR update on one 1-D element.
// The mesh-wide solver in solver.hpp fuses these steps; the functions here are
// the reference forms used by tests and small drivers.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "crkfr/basis.hpp"
#include "crkfr/equations.hpp"
#include "crkfr/errors.hpp"
#include "crkfr/scheme.hpp"
#include "crkfr/tableau.hpp"

namespace crkfr {

/// D * values / dx on one element.
template <class State>
std::vector<State> local_derivative(const std::vector<State>& values, const NodalBasis& basis,
                                    double dx) {
  const int n = basis.size();
  if (static_cast<int>(values.size()) != n)
    throw std::invalid_argument("local_derivative: value count does not match the basis");
  std::vector<State> out(n, State{});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) axpy(basis.d(i, j), values[j], out[i]);
    out[i] *= 1.0 / dx;
  }
  return out;
}

/// Evaluates the nodal interpolant at xi = 0 (left) or xi = 1 (right).
template <class State>
State boundary_value(const std::vector<State>& values, const NodalBasis& basis, bool right) {
  const auto& l = right ? basis.l_at_1 : basis.l_at_0;
  State v{};
  for (int j = 0; j < basis.size(); ++j) axpy(l[j], values[j], v);
  return v;
}

template <class State>
struct TimeAverages {
  std::vector<State> F;  // time-averaged flux at the solution points
  std::vector<State> U;  // time-averaged solution
  std::vector<State> S;  // time-averaged source (zeros without a source)
};

template <class State>
struct StageResult {
  std::vector<std::vector<State>> stages;  // u^(1) .. u^(s)
  TimeAverages<State> averages;
};

/// Local cRK stages on one element [x_left, x_left + dx] for a 1-D equation.
/// Throws StageFailure (element index `element`) if a stage leaves the flux domain.
template <class Eq>
StageResult<typename Eq::State> crk_stages(const Eq& eq, const std::vector<typename Eq::State>& un,
                                           const ButcherTableau& tab, const NodalBasis& basis,
                                           double x_left, double dx, double dt, double t = 0.0,
                                           long element = 0) {
  using State = typename Eq::State;
  const int n = basis.size();
  const int s = tab.stages;
  StageResult<State> r;
  r.stages.assign(s, std::vector<State>(n));
  r.averages.F.assign(n, State{});
  r.averages.U.assign(n, State{});
  r.averages.S.assign(n, State{});
  std::vector<std::vector<State>> rhs(s, std::vector<State>(n));
  std::vector<State> f(n);
  for (int i = 0; i < s; ++i) {
    auto& ui = r.stages[i];
    ui = un;
    for (int j = 0; j < i; ++j) {
      const double a = tab.coeff(i, j);
      if (a == 0.0) continue;
      for (int p = 0; p < n; ++p) axpy(dt * a, rhs[j][p], ui[p]);
    }
    for (int p = 0; p < n; ++p)
      if (!eq.in_domain(ui[p]))
        throw StageFailure("stage " + std::to_string(i + 1) + " left the flux domain", element);
    for (int p = 0; p < n; ++p) f[p] = eq.flux(ui[p], Point{x_left + basis.points[p] * dx, 0.0}, 0);
    const auto df = local_derivative(f, basis, dx);
    for (int p = 0; p < n; ++p) {
      rhs[i][p] = -df[p];
      if (eq.has_source()) {
        const auto src = eq.source(ui[p], Point{x_left + basis.points[p] * dx, 0.0}, t + tab.c[i] * dt);
        rhs[i][p] += src;
        axpy(tab.b[i], src, r.averages.S[p]);
      }
      axpy(tab.b[i], f[p], r.averages.F[p]);
      axpy(tab.b[i], ui[p], r.averages.U[p]);
    }
  }
  return r;
}

/// Central flux traces (F at xi = 0, F at xi = 1) of one element.
template <class Eq>
std::pair<typename Eq::State, typename Eq::State> central_trace(
    const Eq& eq, const StageResult<typename Eq::State>& st, TraceMode mode, const NodalBasis& basis,
    const ButcherTableau& tab, double x_left, double dx) {
  using State = typename Eq::State;
  if (mode == TraceMode::AE)
    return {boundary_value(st.averages.F, basis, false), boundary_value(st.averages.F, basis, true)};
  State fl{}, fr{};
  const Point pl{x_left, 0.0}, pr{x_left + dx, 0.0};
  for (int i = 0; i < tab.stages; ++i) {
    if (tab.b[i] == 0.0) continue;
    axpy(tab.b[i], eq.flux(boundary_value(st.stages[i], basis, false), pl, 0), fl);
    axpy(tab.b[i], eq.flux(boundary_value(st.stages[i], basis, true), pr, 0), fr);
  }
  return {fl, fr};
}

/// Trace data at one interface. Minus is the left element, plus the right one.
template <class State>
struct FaceData {
  State u_minus{}, u_plus{};
  State F_minus{}, F_plus{};
  State U_minus{}, U_plus{};
  std::vector<State> stage_minus, stage_plus;  // D-CSX only
};

/// Dissipative part D of the time-averaged numerical flux.
template <class Eq>
typename Eq::State dissipation(const Eq& eq, const FaceData<typename Eq::State>& fd,
                               Dissipation model, const ButcherTableau& tab, const Point& at,
                               int dir = 0) {
  using State = typename Eq::State;
  auto lam = [&](const State& a, const State& b) {
    return std::max(eq.speed(a, at, dir), eq.speed(b, at, dir));
  };
  switch (model) {
    case Dissipation::D1:
      return 0.5 * lam(fd.u_minus, fd.u_plus) * (fd.u_plus - fd.u_minus);
    case Dissipation::D2:
      return 0.5 * lam(fd.u_minus, fd.u_plus) * (fd.U_plus - fd.U_minus);
    case Dissipation::DCSX: {
      if (static_cast<int>(fd.stage_minus.size()) != tab.stages ||
          static_cast<int>(fd.stage_plus.size()) != tab.stages)
        throw ConfigError("D-CSX dissipation needs per-stage traces on both sides");
      State d{};
      for (int i = 0; i < tab.stages; ++i) {
        if (tab.b[i] == 0.0) continue;
        const auto& a = fd.stage_minus[i];
        const auto& b = fd.stage_plus[i];
        axpy(0.5 * tab.b[i] * lam(a, b), b - a, d);
      }
      return d;
    }
  }
  return State{};
}

template <class Eq>
typename Eq::State numerical_flux(const Eq& eq, const FaceData<typename Eq::State>& fd,
                                  Dissipation model, const ButcherTableau& tab, const Point& at,
                                  int dir = 0) {
  return 0.5 * (fd.F_minus + fd.F_plus) - dissipation(eq, fd, model, tab, at, dir);
}

/// FR update of one element from time averages and the two interface fluxes.
template <class State>
std::vector<State> fr_update(const std::vector<State>& un, const std::vector<State>& F,
                             const State& flux_left, const State& flux_right,
                             const NodalBasis& basis, double dx, double dt,
                             const std::vector<State>* S = nullptr) {
  const int n = basis.size();
  const auto dF = local_derivative(F, basis, dx);
  const State fl = boundary_value(F, basis, false);
  const State fr = boundary_value(F, basis, true);
  std::vector<State> out(un);
  for (int p = 0; p < n; ++p) {
    State r = dF[p];
    axpy(basis.gr_prime[p] / dx, flux_right - fr, r);
    axpy(basis.gl_prime[p] / dx, flux_left - fl, r);
    axpy(-dt, r, out[p]);
    if (S) axpy(dt, (*S)[p], out[p]);
  }
  return out;
}

}  // namespace crkfr
