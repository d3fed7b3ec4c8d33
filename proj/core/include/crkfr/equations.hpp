#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "crkfr/errors.hpp"
#include "crkfr/geometry.hpp"
#include "crkfr/vec.hpp"

namespace crkfr {

/// Strict positivity threshold shared by every admissibility constraint.
inline constexpr double kEpsPos = 1e-13;

// Every equation system below exposes the same static interface consumed by the
// solver templates:
//   kVars, kDim, kConstraints, kHasWall, kName
//   flux(u, point, dir), speed(u, point, dir)
//   constraint(k, u), constraint_linear(k), in_domain(u)
//   has_source(), source(u, point, t)
//   reflect(u, dir), reflect_flux(f, dir), indicator(u), variable_names()

struct LinearAdvection1D {
  static constexpr int kVars = 1, kDim = 1, kConstraints = 0;
  static constexpr bool kHasWall = false;
  static constexpr const char* kName = "linear_advection";
  using State = Vec<1>;

  double velocity = 1.0;

  State flux(const State& u, const Point&, int) const { return State{{velocity * u[0]}}; }
  double speed(const State&, const Point&, int) const { return std::abs(velocity); }
  double constraint(int, const State&) const { return 1.0; }
  static constexpr bool constraint_linear(int) { return true; }
  bool in_domain(const State& u) const { return all_finite(u); }
  bool has_source() const { return false; }
  State source(const State&, const Point&, double) const { return {}; }
  State reflect(const State& u, int) const { return u; }
  State reflect_flux(const State& f, int) const { return f; }
  double indicator(const State& u) const { return u[0]; }
  std::vector<std::string> variable_names() const { return {"u"}; }
};

/// u_t + (a(x) u)_x = 0 with a(x) = x^2.
struct VariableAdvection1D {
  static constexpr int kVars = 1, kDim = 1, kConstraints = 0;
  static constexpr bool kHasWall = false;
  static constexpr const char* kName = "variable_advection";
  using State = Vec<1>;

  static double a(double x) { return x * x; }
  State flux(const State& u, const Point& p, int) const { return State{{a(p.x) * u[0]}}; }
  double speed(const State&, const Point& p, int) const { return std::abs(a(p.x)); }
  double constraint(int, const State&) const { return 1.0; }
  static constexpr bool constraint_linear(int) { return true; }
  bool in_domain(const State& u) const { return all_finite(u); }
  bool has_source() const { return false; }
  State source(const State&, const Point&, double) const { return {}; }
  State reflect(const State& u, int) const { return u; }
  State reflect_flux(const State& f, int) const { return f; }
  double indicator(const State& u) const { return u[0]; }
  std::vector<std::string> variable_names() const { return {"u"}; }
};

struct Burgers1D {
  static constexpr int kVars = 1, kDim = 1, kConstraints = 0;
  static constexpr bool kHasWall = false;
  static constexpr const char* kName = "burgers";
  using State = Vec<1>;

  State flux(const State& u, const Point&, int) const { return State{{0.5 * u[0] * u[0]}}; }
  double speed(const State& u, const Point&, int) const { return std::abs(u[0]); }
  double constraint(int, const State&) const { return 1.0; }
  static constexpr bool constraint_linear(int) { return true; }
  bool in_domain(const State& u) const { return all_finite(u); }
  bool has_source() const { return false; }
  State source(const State&, const Point&, double) const { return {}; }
  State reflect(const State& u, int) const { return u; }
  State reflect_flux(const State& f, int) const { return f; }
  double indicator(const State& u) const { return u[0]; }
  std::vector<std::string> variable_names() const { return {"u"}; }
};

/// Scalar advection in the plane, either with a constant velocity or with the
/// solid-body rotation field (1/2 - y, x - 1/2).
struct Advection2D {
  static constexpr int kVars = 1, kDim = 2, kConstraints = 0;
  static constexpr bool kHasWall = false;
  static constexpr const char* kName = "advection2d";
  using State = Vec<1>;

  bool rotation = false;
  double ax = 1.0, ay = 1.0;

  double vel(const Point& p, int dir) const {
    if (rotation) return dir == 0 ? 0.5 - p.y : p.x - 0.5;
    return dir == 0 ? ax : ay;
  }
  State flux(const State& u, const Point& p, int dir) const { return State{{vel(p, dir) * u[0]}}; }
  double speed(const State&, const Point& p, int dir) const { return std::abs(vel(p, dir)); }
  double constraint(int, const State&) const { return 1.0; }
  static constexpr bool constraint_linear(int) { return true; }
  bool in_domain(const State& u) const { return all_finite(u); }
  bool has_source() const { return false; }
  State source(const State&, const Point&, double) const { return {}; }
  State reflect(const State& u, int) const { return u; }
  State reflect_flux(const State& f, int) const { return f; }
  double indicator(const State& u) const { return u[0]; }
  std::vector<std::string> variable_names() const { return {"u"}; }
};

/// Pressure of a conserved Euler state. Throws DomainError when rho <= 0.
template <int M>
double euler_pressure(const Vec<M>& u, double gamma) {
  static_assert(M == 3 || M == 4);
  if (!(u[0] > 0.0)) throw DomainError("euler_pressure: non-positive density");
  double ke = 0.0;
  for (int d = 1; d < M - 1; ++d) ke += u[d] * u[d];
  return (gamma - 1.0) * (u[M - 1] - 0.5 * ke / u[0]);
}

template <int Dim>
struct Euler {
  static constexpr int kVars = Dim + 2, kDim = Dim, kConstraints = 2;
  static constexpr bool kHasWall = true;
  static constexpr const char* kName = Dim == 1 ? "euler1d" : "euler2d";
  using State = Vec<kVars>;

  double gamma = 1.4;
  double gravity = 0.0;  // acceleration along +y (2-D only)

  double pressure(const State& u) const {
    double ke = 0.0;
    for (int d = 1; d <= Dim; ++d) ke += u[d] * u[d];
    return (gamma - 1.0) * (u[kVars - 1] - 0.5 * ke / u[0]);
  }

  State from_primitive(double rho, double v1, double v2, double p) const {
    State u;
    u[0] = rho;
    u[1] = rho * v1;
    double ke = rho * v1 * v1;
    if constexpr (Dim == 2) {
      u[2] = rho * v2;
      ke += rho * v2 * v2;
    }
    u[kVars - 1] = p / (gamma - 1.0) + 0.5 * ke;
    return u;
  }
  State from_primitive(double rho, double v1, double p) const {
    static_assert(Dim == 1);
    return from_primitive(rho, v1, 0.0, p);
  }

  State flux(const State& u, const Point&, int dir) const {
    const double p = pressure(u);
    const double vn = u[1 + dir] / u[0];
    State f;
    f[0] = u[1 + dir];
    for (int d = 1; d <= Dim; ++d) f[d] = u[d] * vn;
    f[1 + dir] += p;
    f[kVars - 1] = (u[kVars - 1] + p) * vn;
    return f;
  }
  double speed(const State& u, const Point&, int dir) const {
    const double p = pressure(u);
    const double c = std::sqrt(std::max(gamma * p / u[0], 0.0));
    return std::abs(u[1 + dir] / u[0]) + c;
  }
  double constraint(int k, const State& u) const { return k == 0 ? u[0] : pressure(u); }
  static constexpr bool constraint_linear(int k) { return k == 0; }
  bool in_domain(const State& u) const { return all_finite(u) && u[0] > 0.0; }
  bool has_source() const { return Dim == 2 && gravity != 0.0; }
  State source(const State& u, const Point&, double) const {
    State s{};
    if constexpr (Dim == 2) {
      s[2] = gravity * u[0];
      s[3] = gravity * u[2];
    }
    return s;
  }
  State reflect(const State& u, int dir) const {
    State r = u;
    r[1 + dir] = -r[1 + dir];
    return r;
  }
  State reflect_flux(const State& f, int dir) const {
    State r = -f;
    r[1 + dir] = f[1 + dir];
    return r;
  }
  double indicator(const State& u) const { return u[0] * pressure(u); }
  std::vector<std::string> variable_names() const {
    if constexpr (Dim == 1) return {"rho", "rho_v1", "E"};
    else return {"rho", "rho_v1", "rho_v2", "E"};
  }
};

using Euler1D = Euler<1>;
using Euler2D = Euler<2>;

/// Quiver potential W(x, y) = amplitude * exp(-decay * ((x-xc)^2 + [(y-yc)^2])),
/// with analytic gradient. The y term is included only when use_y is set.
struct QuiverPotential {
  double amplitude = 0.0;
  double decay = 0.0;
  double xc = 0.0, yc = 0.0;
  bool use_y = false;

  double value(const Point& p) const {
    const double dx = p.x - xc, dy = use_y ? p.y - yc : 0.0;
    return amplitude * std::exp(-decay * (dx * dx + dy * dy));
  }
  double dwdx(const Point& p) const { return -2.0 * decay * (p.x - xc) * value(p); }
  double dwdy(const Point& p) const { return use_y ? -2.0 * decay * (p.y - yc) * value(p) : 0.0; }
};

/// Quiver-energy sources of the ten-moment system for prescribed gradients of W,
/// plus the optional absorption term nu_T * rho * W in the E11 equation.
inline Vec<6> tenmoment_sources(const Vec<6>& u, double dwdx, double dwdy, double w = 0.0,
                                double nu_t = 0.0, bool y_component = true) {
  const double rho = u[0];
  const double v1 = u[1] / rho, v2 = u[2] / rho;
  Vec<6> s{};
  s[1] = -0.5 * rho * dwdx;
  s[3] = -0.5 * rho * v1 * dwdx;
  s[4] = -0.25 * rho * v2 * dwdx;
  if (y_component) {
    s[2] = -0.5 * rho * dwdy;
    s[4] += -0.25 * rho * v1 * dwdy;
    s[5] = -0.5 * rho * v2 * dwdy;
  }
  s[3] += nu_t * rho * w;
  return s;
}

/// Ten-moment Gaussian closure with conserved variables
/// (rho, rho v1, rho v2, E11, E12, E22).
template <int Dim>
struct TenMoment {
  static constexpr int kVars = 6, kDim = Dim, kConstraints = 3;
  static constexpr bool kHasWall = true;
  static constexpr const char* kName = Dim == 1 ? "tenmoment1d" : "tenmoment2d";
  using State = Vec<6>;

  QuiverPotential potential;
  bool source_on = false;
  bool y_source = true;
  double nu_t = 0.0;

  struct Pressure {
    double p11, p12, p22;
  };
  Pressure pressure(const State& u) const {
    const double v1 = u[1] / u[0], v2 = u[2] / u[0];
    return {2.0 * u[3] - u[1] * v1, 2.0 * u[4] - u[1] * v2, 2.0 * u[5] - u[2] * v2};
  }
  State from_primitive(double rho, double v1, double v2, double p11, double p12, double p22) const {
    return State{{rho, rho * v1, rho * v2, 0.5 * p11 + 0.5 * rho * v1 * v1,
                  0.5 * p12 + 0.5 * rho * v1 * v2, 0.5 * p22 + 0.5 * rho * v2 * v2}};
  }

  State flux(const State& u, const Point&, int dir) const {
    const double rho = u[0], v1 = u[1] / rho, v2 = u[2] / rho;
    const auto p = pressure(u);
    if (dir == 0) {
      return State{{u[1], p.p11 + rho * v1 * v1, p.p12 + rho * v1 * v2, (u[3] + p.p11) * v1,
                    u[4] * v1 + 0.5 * (p.p11 * v2 + p.p12 * v1), u[5] * v1 + p.p12 * v2}};
    }
    return State{{u[2], p.p12 + rho * v1 * v2, p.p22 + rho * v2 * v2, u[3] * v2 + p.p12 * v1,
                  u[4] * v2 + 0.5 * (p.p12 * v2 + p.p22 * v1), (u[5] + p.p22) * v2}};
  }
  double speed(const State& u, const Point&, int dir) const {
    const auto p = pressure(u);
    const double pnn = dir == 0 ? p.p11 : p.p22;
    return std::abs(u[1 + dir] / u[0]) + std::sqrt(std::max(3.0 * pnn / u[0], 0.0));
  }
  double constraint(int k, const State& u) const {
    if (k == 0) return u[0];
    const auto p = pressure(u);
    if (k == 1) return p.p11;
    const double det = p.p11 * p.p22 - p.p12 * p.p12;
    return det >= 0.0 ? std::sqrt(det) : -std::sqrt(-det);
  }
  static constexpr bool constraint_linear(int k) { return k == 0; }
  bool in_domain(const State& u) const { return all_finite(u) && u[0] > 0.0; }
  bool has_source() const { return source_on; }
  State source(const State& u, const Point& pt, double) const {
    return tenmoment_sources(u, potential.dwdx(pt), Dim == 2 ? potential.dwdy(pt) : 0.0,
                             potential.value(pt), nu_t, Dim == 2 && y_source);
  }
  State reflect(const State& u, int dir) const {
    State r = u;
    r[1 + dir] = -r[1 + dir];
    r[4] = -r[4];
    return r;
  }
  State reflect_flux(const State& f, int dir) const {
    State r = -f;
    r[1 + dir] = f[1 + dir];
    r[4] = f[4];
    return r;
  }
  double indicator(const State& u) const { return u[0] * pressure(u).p11; }
  std::vector<std::string> variable_names() const {
    return {"rho", "rho_v1", "rho_v2", "E11", "E12", "E22"};
  }
};

using TenMoment1D = TenMoment<1>;
using TenMoment2D = TenMoment<2>;

template <class Eq>
bool admissible(const Eq& eq, const typename Eq::State& u, double eps = kEpsPos) {
  if (!eq.in_domain(u)) return false;
  for (int k = 0; k < Eq::kConstraints; ++k)
    if (!(eq.constraint(k, u) >= eps)) return false;
  return true;
}

/// Local Lax-Friedrichs wave speed: max spectral radius over both states.
/// Throws DomainError for inadmissible input states.
template <class Eq>
double rusanov_speed(const Eq& eq, const typename Eq::State& ul, const typename Eq::State& ur,
                     const Point& at, int dir) {
  if (!admissible(eq, ul, 0.0) || !admissible(eq, ur, 0.0))
    throw DomainError("rusanov_speed: inadmissible state");
  return std::max(eq.speed(ul, at, dir), eq.speed(ur, at, dir));
}

/// Rusanov flux without admissibility checks, used on solver traces.
template <class Eq>
typename Eq::State rusanov_flux(const Eq& eq, const typename Eq::State& ul,
                                const typename Eq::State& ur, const Point& at, int dir) {
  const double lam = std::max(eq.speed(ul, at, dir), eq.speed(ur, at, dir));
  auto f = 0.5 * (eq.flux(ul, at, dir) + eq.flux(ur, at, dir));
  axpy(-0.5 * lam, ur - ul, f);
  return f;
}

}  // namespace crkfr
