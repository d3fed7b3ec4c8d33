#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "crkfr/basis.hpp"
#include "crkfr/equations.hpp"
#include "crkfr/errors.hpp"
#include "crkfr/geometry.hpp"
#include "crkfr/scheme.hpp"

namespace crkfr {

/// Subface positions x_{-1/2} .. x_{N+1/2} of the subcells of [x_left, x_left + dx].
inline std::vector<double> subcell_faces(const NodalBasis& basis, double x_left, double dx) {
  const int n = basis.size();
  std::vector<double> xf(n + 1);
  xf[0] = x_left;
  double acc = 0.0;
  for (int p = 0; p < n; ++p) {
    acc += basis.weights[p];
    xf[p + 1] = x_left + acc * dx;
  }
  xf[n] = x_left + dx;
  return xf;
}

// ---------------------------------------------------------------------------
// Smoothness indicator

/// Threshold T(N) of the modal energy indicator.
inline double indicator_threshold(int degree, const IndicatorConfig& cfg) {
  return cfg.threshold_scale * std::pow(10.0, -cfg.threshold_exponent * std::pow(degree + 1.0, 0.25));
}

/// Highest-mode energy fraction of modal coefficients (dim = 1: n values, dim = 2: n*n
/// values with index i + n*j).
inline double modal_energy(const std::vector<double>& modal, int n, int dim) {
  const int N = n - 1;
  if (N == 0) return 0.0;
  double total = 0.0, clip1 = 0.0, clip2 = 0.0;
  const int nj = dim == 2 ? n : 1;
  for (int j = 0; j < nj; ++j) {
    for (int i = 0; i < n; ++i) {
      const double m2 = modal[i + n * j] * modal[i + n * j];
      total += m2;
      if (i <= N - 1 && (dim == 1 || j <= N - 1)) clip1 += m2;
      if (i <= N - 2 && (dim == 1 || j <= N - 2)) clip2 += m2;
    }
  }
  double e = total > 0.0 ? (total - clip1) / total : 0.0;
  if (N >= 2 && clip1 > 0.0) e = std::max(e, (clip1 - clip2) / clip1);
  return e;
}

/// Blending coefficient of one element from the nodal indicator variable q.
/// `n2m` is the row-major nodal-to-modal matrix of the basis.
inline double indicator_alpha(const double* q, const NodalBasis& basis, const std::vector<double>& n2m,
                              int dim, const IndicatorConfig& cfg) {
  const int n = basis.size();
  const int npe = dim == 2 ? n * n : n;
  for (int i = 0; i < npe; ++i)
    if (!std::isfinite(q[i])) throw DomainError("smoothness indicator: non-finite input");
  if (basis.degree == 0) return 0.0;
  std::vector<double> modal(npe, 0.0);
  if (dim == 1) {
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < n; ++p) modal[i] += n2m[i * n + p] * q[p];
  } else {
    std::vector<double> tmp(npe, 0.0);  // transform along x, then y
    for (int qq = 0; qq < n; ++qq)
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p) tmp[i + n * qq] += n2m[i * n + p] * q[p + n * qq];
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (int qq = 0; qq < n; ++qq) modal[i + n * j] += n2m[j * n + qq] * tmp[i + n * qq];
  }
  const double e = modal_energy(modal, n, dim);
  const double t = indicator_threshold(basis.degree, cfg);
  double alpha = 1.0 / (1.0 + std::exp(-cfg.sharpness / t * (e - t)));
  if (alpha < cfg.alpha_min) alpha = 0.0;
  return std::min(alpha, cfg.alpha_max);
}

/// One smoothing pass alpha_e <- max(alpha_e, alpha_neighbour / 2).
inline std::vector<double> smooth_alpha(const std::vector<double>& raw, const Mesh& mesh,
                                        bool periodic_x, bool periodic_y) {
  std::vector<double> out(raw);
  auto nb = [&](int ix, int iy) -> double {
    if (ix < 0 || ix >= mesh.nx) {
      if (!periodic_x) return 0.0;
      ix = (ix + mesh.nx) % mesh.nx;
    }
    if (iy < 0 || iy >= mesh.ny) {
      if (!periodic_y) return 0.0;
      iy = (iy + mesh.ny) % mesh.ny;
    }
    return raw[mesh.element(ix, iy)];
  };
  for (int iy = 0; iy < mesh.ny; ++iy) {
    for (int ix = 0; ix < mesh.nx; ++ix) {
      double m = std::max(nb(ix - 1, iy), nb(ix + 1, iy));
      if (mesh.dim == 2) m = std::max({m, nb(ix, iy - 1), nb(ix, iy + 1)});
      double& a = out[mesh.element(ix, iy)];
      a = std::max(a, 0.5 * m);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blending

template <class State>
State blend(const State& u_high, const State& u_low, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("blend: alpha outside [0,1]");
  if (alpha == 0.0) return u_high;
  if (alpha == 1.0) return u_low;
  return (1.0 - alpha) * u_high + alpha * u_low;
}

template <class State>
State blend_interface_flux(const State& f_high, const State& f_low, double alpha) {
  return blend(f_high, f_low, alpha);
}

// ---------------------------------------------------------------------------
// Admissibility limiters

/// Largest theta in [0, theta_max] such that low + theta (cand - low) satisfies every
/// constraint >= eps. Linear constraints are solved in closed form; nonlinear
/// (concave) ones by halving followed by bisection. Throws AdmissibilityError if
/// `low` itself is inadmissible.
template <class Eq>
double limit_theta(const Eq& eq, const typename Eq::State& low, const typename Eq::State& cand,
                   double theta_max = 1.0, double eps = kEpsPos) {
  using State = typename Eq::State;
  if constexpr (Eq::kConstraints == 0) {
    (void)eq, (void)low, (void)cand, (void)eps;
    return theta_max;
  } else {
    if (!admissible(eq, low, eps))
      throw AdmissibilityError("flux limiter: low-order subcell update is inadmissible", -1, -1);
    auto at = [&](double t) -> State { return low + t * (cand - low); };
    auto ok_upto = [&](const State& u, int k) {
      if (!eq.in_domain(u)) return false;
      for (int j = 0; j <= k; ++j)
        if (!(eq.constraint(j, u) >= eps)) return false;
      return true;
    };
    double theta = theta_max;
    for (int k = 0; k < Eq::kConstraints; ++k) {
      if (ok_upto(at(theta), k)) continue;
      if (Eq::constraint_linear(k)) {
        const double p0 = eq.constraint(k, low);
        const double p1 = eq.constraint(k, cand);
        double t = std::clamp((p0 - eps) / (p0 - p1), 0.0, theta);
        for (int it = 0; it < 60 && t > 0.0 && !ok_upto(at(t), k); ++it) t *= 1.0 - 1e-15 * (1 << std::min(it, 30));
        theta = ok_upto(at(t), k) ? t : 0.0;
      } else {
        double hi = theta, lo = 0.0;
        double t = theta;
        for (int it = 0; it < 60; ++it) {
          t *= 0.5;
          if (ok_upto(at(t), k)) {
            lo = t;
            break;
          }
          hi = t;
        }
        if (lo > 0.0) {
          for (int it = 0; it < 12; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (ok_upto(at(mid), k)) lo = mid;
            else hi = mid;
          }
        }
        theta = lo;
      }
    }
    return theta;
  }
}

/// Zhang-Shu scaling towards the element mean, constraint by constraint.
/// `w` holds the quadrature weight of each node. Returns the smallest theta used.
/// Throws AdmissibilityError if the mean is inadmissible.
template <class Eq>
double scaling_limit(const Eq& eq, typename Eq::State* u, const double* w, int count,
                     long element = -1, long step = -1, double eps = kEpsPos) {
  using State = typename Eq::State;
  State mean{};
  for (int i = 0; i < count; ++i) axpy(w[i], u[i], mean);
  if (!admissible(eq, mean, eps))
    throw AdmissibilityError("element mean left the admissible set", element, step);
  if constexpr (Eq::kConstraints == 0) {
    return 1.0;
  } else {
    auto ok_upto = [&](const State& v, int k) {
      if (!eq.in_domain(v)) return false;
      for (int j = 0; j <= k; ++j)
        if (!(eq.constraint(j, v) >= eps)) return false;
      return true;
    };
    double theta_min = 1.0;
    for (int k = 0; k < Eq::kConstraints; ++k) {
      double theta = 1.0;
      for (int i = 0; i < count; ++i) {
        if (ok_upto(u[i], k)) continue;
        double t;
        auto at = [&](double s) -> State { return mean + s * (u[i] - mean); };
        if (Eq::constraint_linear(k)) {
          const double pm = eq.constraint(k, mean);
          t = std::clamp((pm - eps) / (pm - eq.constraint(k, u[i])), 0.0, 1.0);
          for (int it = 0; it < 60 && t > 0.0 && !ok_upto(at(t), k); ++it)
            t *= 1.0 - 1e-15 * (1 << std::min(it, 30));
          if (!ok_upto(at(t), k)) t = 0.0;
        } else {
          double lo = 0.0, hi = 1.0;
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (ok_upto(at(mid), k)) lo = mid;
            else hi = mid;
          }
          t = lo;
        }
        theta = std::min(theta, t);
      }
      if (theta < 1.0) {
        for (int i = 0; i < count; ++i) u[i] = mean + theta * (u[i] - mean);
        theta_min = std::min(theta_min, theta);
      }
    }
    return theta_min;
  }
}

// ---------------------------------------------------------------------------
// Low-order subcell schemes

inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

template <class State>
State minmod(const State& a, const State& b) {
  State r;
  for (int i = 0; i < State::size(); ++i) r[i] = minmod(a[i], b[i]);
  return r;
}

/// MUSCL-Hancock reconstruction and half-step prediction at one solution point.
/// face[2d] / face[2d+1] are the predicted states at the lower / upper subface in
/// direction d. Slopes are halved until all states are admissible; after
/// max_halvings failures the prediction falls back to the first-order states.
template <class Eq>
struct MhPrediction {
  std::array<typename Eq::State, 2 * Eq::kDim> face;
  bool fallback = false;
};

template <class Eq>
MhPrediction<Eq> mh_predict(const Eq& eq, const typename Eq::State& u,
                            const std::array<typename Eq::State, Eq::kDim>& slope,
                            const std::array<double, Eq::kDim>& dist_lo,
                            const std::array<double, Eq::kDim>& dist_hi,
                            const std::array<double, Eq::kDim>& width, const Point& at, double dt,
                            int max_halvings) {
  using State = typename Eq::State;
  constexpr int D = Eq::kDim;
  MhPrediction<Eq> r;
  double scale = 1.0;
  for (int h = 0; h <= max_halvings; ++h, scale *= 0.5) {
    std::array<State, 2 * D> rec;
    State delta{};
    bool ok = true;
    for (int d = 0; d < D && ok; ++d) {
      rec[2 * d] = u - (scale * dist_lo[d]) * slope[d];
      rec[2 * d + 1] = u + (scale * dist_hi[d]) * slope[d];
      ok = admissible(eq, rec[2 * d]) && admissible(eq, rec[2 * d + 1]);
      if (!ok) break;
      Point plo = at, phi = at;
      (d == 0 ? plo.x : plo.y) -= dist_lo[d];
      (d == 0 ? phi.x : phi.y) += dist_hi[d];
      axpy(-0.5 * dt / width[d], eq.flux(rec[2 * d + 1], phi, d) - eq.flux(rec[2 * d], plo, d), delta);
    }
    if (!ok) continue;
    for (int i = 0; i < 2 * D && ok; ++i) {
      r.face[i] = rec[i] + delta;
      ok = admissible(eq, r.face[i]);
    }
    if (ok) return r;
  }
  r.face.fill(u);
  r.fallback = true;
  return r;
}

/// First-order (Rusanov) fluxes at the N interior subfaces of a 1-D element.
template <class Eq>
std::vector<typename Eq::State> fo_interior_fluxes(const Eq& eq,
                                                   const std::vector<typename Eq::State>& un,
                                                   const NodalBasis& basis, double x_left, double dx) {
  const auto xf = subcell_faces(basis, x_left, dx);
  std::vector<typename Eq::State> f;
  for (int p = 1; p < basis.size(); ++p)
    f.push_back(rusanov_flux(eq, un[p - 1], un[p], Point{xf[p], 0.0}, 0));
  return f;
}

/// Subcell finite-volume update of a 1-D element from its interface fluxes and the
/// N interior subface fluxes.
template <class State>
std::vector<State> low_order_update(const std::vector<State>& un, const State& flux_left,
                                    const State& flux_right, const std::vector<State>& interior,
                                    const NodalBasis& basis, double dx, double dt) {
  const int n = basis.size();
  if (static_cast<int>(interior.size()) != n - 1)
    throw std::invalid_argument("low_order_update: expected N interior fluxes");
  std::vector<State> out(un);
  for (int p = 0; p < n; ++p) {
    const State& fl = p == 0 ? flux_left : interior[p - 1];
    const State& fr = p == n - 1 ? flux_right : interior[p];
    axpy(-dt / (basis.weights[p] * dx), fr - fl, out[p]);
  }
  return out;
}

}  // namespace crkfr
