#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <climits>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crkfr/basis.hpp"
#include "crkfr/boundary.hpp"
#include "crkfr/cfl.hpp"
#include "crkfr/crk_core.hpp"
#include "crkfr/equations.hpp"
#include "crkfr/errors.hpp"
#include "crkfr/field.hpp"
#include "crkfr/limiters.hpp"
#include "crkfr/problem.hpp"
#include "crkfr/scheme.hpp"
#include "crkfr/tableau.hpp"

namespace crkfr {

struct StepDiagnostics {
  long limited_face_points = 0;
  long mh_fallbacks = 0;
  long stage_failures = 0;
  long scaled_elements = 0;
  double alpha_mean = 0.0;
  double alpha_max = 0.0;
};

/// Values written to element-boundary trace buffers, i.e. data that crosses
/// element boundaries, accumulated over steps.
struct CommCounters {
  long long solution_trace = 0;
  long long time_average = 0;
  long long stage_trace = 0;
  long long face_sides = 0;
};

struct PhaseTimes {
  double indicator = 0.0;
  double stages = 0.0;
  double low_order = 0.0;
  double fluxes = 0.0;
  double update = 0.0;
  double total = 0.0;
};

inline int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

/// Static-schedule parallel loop. Exceptions are collected and the one thrown
/// by the lowest index is rethrown, so failures are reported deterministically.
template <class F>
void parallel_for(int n, F&& body) {
  std::exception_ptr first;
  int first_index = INT_MAX;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(crkfr_parallel_exception)
      {
        if (i < first_index) {
          first_index = i;
          first = std::current_exception();
        }
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

template <class Eq>
class CrkSolver {
 public:
  using State = typename Eq::State;
  using Field = SolutionField<Eq::kVars>;
  static constexpr int kDim = Eq::kDim;
  static constexpr int kLocalFaces = 2 * kDim;

  CrkSolver(ProblemSetup<Eq> problem, const SchemeOptions& scheme, const LimiterOptions& limiter)
      : problem_(std::move(problem)),
        eq_(problem_.eq),
        mesh_(problem_.mesh),
        opt_(scheme),
        lim_(limiter),
        basis_(build_basis(scheme.degree, scheme.points)),
        tab_(scheme.tableau.empty() ? default_tableau(scheme.degree) : tableau_by_name(scheme.tableau)) {
    if (mesh_.dim != kDim) throw ConfigError("mesh dimension does not match the equation");
    n_ = basis_.size();
    npe_ = kDim == 2 ? n_ * n_ : n_;
    nfp_ = kDim == 2 ? n_ : 1;
    ne_ = mesh_.num_elements();
    gll_ = basis_.kind == PointSet::GLL;
    periodic_[0] = problem_.boundary.kinds[0] == BoundaryKind::Periodic;
    periodic_[1] = kDim == 2 && problem_.boundary.kinds[2] == BoundaryKind::Periodic;
    if ((problem_.boundary.kinds[0] == BoundaryKind::Periodic) !=
            (problem_.boundary.kinds[1] == BoundaryKind::Periodic) ||
        (kDim == 2 && (problem_.boundary.kinds[2] == BoundaryKind::Periodic) !=
                          (problem_.boundary.kinds[3] == BoundaryKind::Periodic)))
      throw ConfigError("periodic boundaries must be declared on both matching sides");
    ghost_elements_ = problem_.boundary.treatment == BoundaryTreatment::GhostElement;
    if (ghost_elements_ && kDim != 1)
      throw ConfigError("the ghost-element boundary treatment is available for 1-D meshes only");
    outflow_ghosts_ = kDim == 1 && !ghost_elements_ &&
                      (problem_.boundary.kinds[0] == BoundaryKind::Outflow ||
                       problem_.boundary.kinds[1] == BoundaryKind::Outflow);
    for (int s = 0; s < kLocalFaces; ++s) {
      const auto k = problem_.boundary.kinds[s];
      if (k == BoundaryKind::MixedHllc) uses_hllc_ = true;
      if (k == BoundaryKind::Problem) uses_hllc_ = true;  // per-point kinds may include mixed
      if ((k == BoundaryKind::Inflow || k == BoundaryKind::MixedHllc) && !problem_.boundary_state)
        throw ConfigError("inflow boundary on side " + std::to_string(s) + " without boundary data");
      if (k == BoundaryKind::Problem && !problem_.boundary_kind)
        throw ConfigError("problem-defined boundary kind without a kind callback");
      if (k == BoundaryKind::Wall && !Eq::kHasWall)
        throw ConfigError(std::string("wall boundaries are not defined for ") + Eq::kName);
    }
    need_u_trace_ = opt_.dissipation != Dissipation::DCSX || uses_hllc_;
    need_U_trace_ = opt_.dissipation == Dissipation::D2 || uses_hllc_;
    need_stage_trace_ = opt_.dissipation == Dissipation::DCSX;
    blend_ = basis_.degree > 0 ? lim_.blend : BlendKind::None;
    flux_limiter_ = lim_.flux_limiter && basis_.degree > 0 && Eq::kConstraints > 0;
    low_order_ = blend_ != BlendKind::None || flux_limiter_;
    if (basis_.degree > 0) n2m_ = basis_.nodal_to_modal();

    xf_rel_.assign(n_ + 1, 0.0);
    for (int p = 0; p < n_; ++p) xf_rel_[p + 1] = xf_rel_[p] + basis_.weights[p];
    xf_rel_[n_] = 1.0;
    later_use_.assign(tab_.stages, false);
    for (int i = 0; i < tab_.stages; ++i)
      for (int k = i + 1; k < tab_.stages; ++k)
        if (tab_.coeff(k, i) != 0.0) later_use_[i] = true;
    node_weights_.resize(npe_);
    for (int q = 0; q < (kDim == 2 ? n_ : 1); ++q)
      for (int p = 0; p < n_; ++p)
        node_weights_[p + n_ * q] = basis_.weights[p] * (kDim == 2 ? basis_.weights[q] : 1.0);

    const std::size_t nn = static_cast<std::size_t>(ne_) * npe_;
    Fn_.assign(nn, State{});
    if (kDim == 2) Gn_.assign(nn, State{});
    if (eq_.has_source()) Sn_.assign(nn, State{});
    const int slots = ne_ + (ghost_elements_ || outflow_ghosts_ ? 2 : 0);
    const std::size_t nt = static_cast<std::size_t>(slots) * kLocalFaces * nfp_;
    tr_F_.assign(nt, State{});
    if (need_u_trace_) tr_u_.assign(nt, State{});
    if (need_U_trace_) tr_U_.assign(nt, State{});
    if (need_stage_trace_) tr_stage_.assign(nt * tab_.stages, State{});
    alpha_.assign(ne_, 0.0);
    failed_.assign(ne_, 0);
    mu_.assign(ne_, 1.0);
    if (low_order_) {
      lo_flux_.assign(static_cast<std::size_t>(ne_) * kDim * nfp_ * (n_ + 1), State{});
      lo_state_.assign(static_cast<std::size_t>(ne_) * kLocalFaces * nfp_, State{});
      mh_fallback_.assign(ne_, 0);
    }
    fx_.assign(static_cast<std::size_t>(mesh_.nx + 1) * mesh_.ny * nfp_, State{});
    limited_x_.assign(static_cast<std::size_t>(mesh_.nx + 1) * mesh_.ny, 0);
    if (kDim == 2) {
      fy_.assign(static_cast<std::size_t>(mesh_.nx) * (mesh_.ny + 1) * nfp_, State{});
      limited_y_.assign(static_cast<std::size_t>(mesh_.nx) * (mesh_.ny + 1), 0);
    }
  }

  const Eq& equation() const { return eq_; }
  const NodalBasis& basis() const { return basis_; }
  const ButcherTableau& tableau() const { return tab_; }
  const Mesh& mesh() const { return mesh_; }
  const ProblemSetup<Eq>& problem() const { return problem_; }
  const SchemeOptions& scheme() const { return opt_; }
  const LimiterOptions& limiter() const { return lim_; }
  const StepDiagnostics& diagnostics() const { return diag_; }
  const std::vector<double>& alpha() const { return alpha_; }
  long steps_taken() const { return step_; }
  /// Interface fluxes of the last step: x-face i (0..nx), row j, face point k.
  const State& x_face_flux(int i, int j = 0, int k = 0) const { return fx_[fxi(i, j, k)]; }
  /// y-face j (0..ny), column i, face point k.
  const State& y_face_flux(int i, int j, int k = 0) const { return fy_[fyi(i, j, k)]; }

  CommCounters counters;
  PhaseTimes times;

  /// Collocation projection of the initial condition.
  Field initial_field() const {
    Field u(mesh_, basis_);
    for (int e = 0; e < ne_; ++e)
      for (int i = 0; i < npe_; ++i) u.values[idx(e, i)] = problem_.initial(u.node(e, i % n_, i / n_));
    u.time = 0.0;
    return u;
  }

  /// Spectral radii (sigma_x, sigma_y) used for the time step of element e.
  std::array<double, 2> element_speeds(const Field& u, int e) const {
    std::array<double, 2> s{0.0, 0.0};
    if (opt_.dt_speed == DtSpeed::NodalMax) {
      for (int i = 0; i < npe_; ++i) {
        const auto pt = u.node(e, i % n_, i / n_);
        for (int d = 0; d < kDim; ++d) s[d] = std::max(s[d], eq_.speed(u.values[idx(e, i)], pt, d));
      }
      return s;
    }
    const State m = u.mean(e);
    const Point c = centre(e);
    for (int d = 0; d < kDim; ++d) s[d] = eq_.speed(m, c, d);
    return s;
  }

  double cfl() const {
    return opt_.cfl_override > 0.0 ? opt_.cfl_override
                                   : cfl_number(basis_.degree, basis_.kind, opt_.dissipation);
  }

  /// dt = C_s CFL(N) / max_e (sigma_x/dx + sigma_y/dy). Returns +inf for a
  /// vanishing wave speed.
  double compute_dt(const Field& u) const {
    const double c = cfl();
    double rate = 0.0;
    for (int e = 0; e < ne_; ++e) {
      const auto s = element_speeds(u, e);
      const double r = s[0] / mesh_.dx() + (kDim == 2 ? s[1] / mesh_.dy() : 0.0);
      if (!std::isfinite(r)) throw DomainError("non-finite wave speed in element " + std::to_string(e));
      rate = std::max(rate, r);
    }
    if (opt_.dt_include_ghost && problem_.boundary_state) rate = std::max(rate, ghost_rate(u.time));
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return opt_.cfl_safety * c / rate;
  }

  /// Advances u by one step of size dt.
  void step(Field& u, double dt) {
    using clock = std::chrono::steady_clock;
    auto secs = [](clock::time_point a, clock::time_point b) {
      return std::chrono::duration<double>(b - a).count();
    };
    diag_ = StepDiagnostics{};
    const auto t0 = clock::now();
    compute_alpha(u);
    const auto t1 = clock::now();
    std::fill(failed_.begin(), failed_.end(), 0);
    parallel_for(ne_, [&](int e) {
      const int ix = e % mesh_.nx, iy = e / mesh_.nx;
      process_element(u.element(e), mesh_.x_left(ix), mesh_.y_bottom(iy), e, e, u.time, dt);
    });
    if (ghost_elements_ || outflow_ghosts_) build_ghost_elements(u, dt);
    count_traces();
    const auto t2 = clock::now();
    if (low_order_) {
      compute_mu(u);
      std::fill(mh_fallback_.begin(), mh_fallback_.end(), 0);
      parallel_for(ne_, [&](int e) { low_order_element(u, e, dt); });
    }
    const auto t3 = clock::now();
    std::fill(limited_x_.begin(), limited_x_.end(), 0);
    const int nfx = periodic_[0] ? mesh_.nx * mesh_.ny : (mesh_.nx + 1) * mesh_.ny;
    parallel_for(nfx, [&](int f) {
      const int rowlen = periodic_[0] ? mesh_.nx : mesh_.nx + 1;
      face_flux(u, 0, f % rowlen, f / rowlen, dt);
    });
    if (periodic_[0])
      for (int j = 0; j < mesh_.ny; ++j)
        for (int k = 0; k < nfp_; ++k) fx_[fxi(mesh_.nx, j, k)] = fx_[fxi(0, j, k)];
    if constexpr (kDim == 2) {
      std::fill(limited_y_.begin(), limited_y_.end(), 0);
      const int nfy = periodic_[1] ? mesh_.nx * mesh_.ny : mesh_.nx * (mesh_.ny + 1);
      parallel_for(nfy, [&](int f) { face_flux(u, 1, f % mesh_.nx, f / mesh_.nx, dt); });
      if (periodic_[1])
        for (int i = 0; i < mesh_.nx; ++i)
          for (int k = 0; k < nfp_; ++k) fy_[fyi(i, mesh_.ny, k)] = fy_[fyi(i, 0, k)];
    }
    const auto t4 = clock::now();
    scaled_.assign(ne_, 0);
    parallel_for(ne_, [&](int e) { update_element(u, e, dt); });
    u.time += dt;
    ++step_;
    const auto t5 = clock::now();

    for (int e = 0; e < ne_; ++e) {
      diag_.stage_failures += failed_[e];
      diag_.scaled_elements += scaled_[e];
      if (low_order_) diag_.mh_fallbacks += mh_fallback_[e];
      diag_.alpha_mean += alpha_[e];
      diag_.alpha_max = std::max(diag_.alpha_max, alpha_[e]);
    }
    diag_.alpha_mean /= ne_;
    for (auto v : limited_x_) diag_.limited_face_points += v;
    for (auto v : limited_y_) diag_.limited_face_points += v;
    times.indicator += secs(t0, t1);
    times.stages += secs(t1, t2);
    times.low_order += secs(t2, t3);
    times.fluxes += secs(t3, t4);
    times.update += secs(t4, t5);
    times.total += secs(t0, clock::now());
  }

 private:
  struct Scratch {
    std::vector<State> ui, f, g, src, F, G, U, S, trF, node_pred;
    std::vector<std::vector<State>> rhs;
    std::vector<MhPrediction<Eq>> pred;
  };

  ProblemSetup<Eq> problem_;
  Eq eq_;
  Mesh mesh_;
  SchemeOptions opt_;
  LimiterOptions lim_;
  NodalBasis basis_;
  ButcherTableau tab_;
  int n_ = 0, npe_ = 0, nfp_ = 0, ne_ = 0;
  bool gll_ = false;
  bool periodic_[2] = {false, false};
  bool ghost_elements_ = false;
  bool outflow_ghosts_ = false;  // 1-D outflow faces with incoming characteristics
  bool uses_hllc_ = false;
  bool need_u_trace_ = false, need_U_trace_ = false, need_stage_trace_ = false;
  BlendKind blend_ = BlendKind::None;
  bool flux_limiter_ = false;
  bool low_order_ = false;
  std::vector<double> n2m_;
  std::vector<double> xf_rel_;
  std::vector<bool> later_use_;
  std::vector<double> node_weights_;

  std::vector<State> Fn_, Gn_, Sn_;
  std::vector<State> tr_u_, tr_F_, tr_U_, tr_stage_;
  std::vector<double> alpha_;
  std::vector<char> failed_;
  std::vector<double> mu_;
  std::vector<State> lo_flux_, lo_state_;
  std::vector<char> mh_fallback_;
  std::vector<char> scaled_;
  std::vector<State> fx_, fy_;
  std::vector<int> limited_x_, limited_y_;
  std::vector<Scratch> scratch_;
  StepDiagnostics diag_;
  long step_ = 0;

  std::size_t idx(int e, int i) const { return static_cast<std::size_t>(e) * npe_ + i; }
  std::size_t tidx(int slot, int lf, int k) const {
    return (static_cast<std::size_t>(slot) * kLocalFaces + lf) * nfp_ + k;
  }
  std::size_t fxi(int i, int j, int k) const {
    return (static_cast<std::size_t>(j) * (mesh_.nx + 1) + i) * nfp_ + k;
  }
  std::size_t fyi(int i, int j, int k) const {
    return (static_cast<std::size_t>(j) * mesh_.nx + i) * nfp_ + k;
  }
  std::size_t lofi(int e, int d, int line, int j) const {
    return ((static_cast<std::size_t>(e) * kDim + d) * nfp_ + line) * (n_ + 1) + j;
  }
  Point centre(int e) const {
    const int ix = e % mesh_.nx, iy = e / mesh_.nx;
    Point c{mesh_.x_left(ix) + 0.5 * mesh_.dx(), 0.0};
    if (kDim == 2) c.y = mesh_.y_bottom(iy) + 0.5 * mesh_.dy();
    return c;
  }
  Point node_point(double x0, double y0, int i) const {
    Point p{x0 + basis_.points[i % n_] * mesh_.dx(), 0.0};
    if (kDim == 2) p.y = y0 + basis_.points[i / n_] * mesh_.dy();
    return p;
  }
  Point face_point(double x0, double y0, int lf, int k) const {
    const double dx = mesh_.dx(), dy = mesh_.dy();
    switch (lf) {
      case 0: return {x0, kDim == 2 ? y0 + basis_.points[k] * dy : 0.0};
      case 1: return {x0 + dx, kDim == 2 ? y0 + basis_.points[k] * dy : 0.0};
      case 2: return {x0 + basis_.points[k] * dx, y0};
      default: return {x0 + basis_.points[k] * dx, y0 + dy};
    }
  }
  /// Node index adjacent to local face lf at face point k, at distance `layer`.
  int face_node(int lf, int k, int layer = 0) const {
    const int N = n_ - 1;
    switch (lf) {
      case 0: return layer + n_ * k;
      case 1: return (N - layer) + n_ * k;
      case 2: return k + n_ * layer;
      default: return k + n_ * (N - layer);
    }
  }
  /// Interpolated value of nodal data v at face point k of local face lf.
  State trace_of(const State* v, int lf, int k) const {
    if (gll_) return v[face_node(lf, k)];
    const auto& l = (lf % 2 == 0) ? basis_.l_at_0 : basis_.l_at_1;
    State r{};
    if (lf < 2) {
      for (int p = 0; p < n_; ++p) axpy(l[p], v[p + n_ * k], r);
    } else {
      for (int q = 0; q < n_; ++q) axpy(l[q], v[k + n_ * q], r);
    }
    return r;
  }

  Scratch& scratch() {
    return scratch_[static_cast<std::size_t>(thread_id())];
  }
  void ensure_scratch() {
    const std::size_t nt = static_cast<std::size_t>(max_threads());
    if (scratch_.size() >= nt) return;
    scratch_.resize(nt);
    for (auto& s : scratch_) {
      for (auto* v : {&s.ui, &s.f, &s.g, &s.src, &s.F, &s.G, &s.U, &s.S}) v->assign(npe_, State{});
      s.trF.assign(static_cast<std::size_t>(kLocalFaces) * nfp_, State{});
      s.rhs.assign(tab_.stages, std::vector<State>(npe_));
      s.pred.resize(npe_);
    }
  }

  // ---- indicator -----------------------------------------------------------
  void compute_alpha(const Field& u) {
    ensure_scratch();
    if (blend_ == BlendKind::None) {
      std::fill(alpha_.begin(), alpha_.end(), 0.0);
      return;
    }
    std::vector<double> raw(ne_, 0.0);
    parallel_for(ne_, [&](int e) {
      std::vector<double> q(npe_);
      for (int i = 0; i < npe_; ++i) q[i] = eq_.indicator(u.values[idx(e, i)]);
      raw[e] = indicator_alpha(q.data(), basis_, n2m_, kDim, lim_.indicator);
    });
    alpha_ = lim_.indicator.smooth ? smooth_alpha(raw, mesh_, periodic_[0], periodic_[1]) : raw;
  }

  // ---- local cRK stages and traces ----------------------------------------
  void process_element(const State* un, double x0, double y0, int slot, int e, double t, double dt) {
    Scratch& sc = scratch();
    const int s = tab_.stages;
    const double dx = mesh_.dx(), dy = mesh_.dy();
    const bool real = e >= 0;
    const bool ea = opt_.trace == TraceMode::EA;
    const bool src_on = eq_.has_source();
    std::fill(sc.F.begin(), sc.F.end(), State{});
    if (kDim == 2) std::fill(sc.G.begin(), sc.G.end(), State{});
    if (need_U_trace_) std::fill(sc.U.begin(), sc.U.end(), State{});
    if (src_on) std::fill(sc.S.begin(), sc.S.end(), State{});
    if (ea) std::fill(sc.trF.begin(), sc.trF.end(), State{});

    for (int i = 0; i < s; ++i) {
      auto& ui = sc.ui;
      std::copy(un, un + npe_, ui.begin());
      for (int j = 0; j < i; ++j) {
        const double a = tab_.coeff(i, j);
        if (a == 0.0) continue;
        const auto& r = sc.rhs[j];
        for (int n = 0; n < npe_; ++n) axpy(dt * a, r[n], ui[n]);
      }
      for (int n = 0; n < npe_; ++n) {
        if (!eq_.in_domain(ui[n])) {
          if (real && blend_ != BlendKind::None) {
            failed_[e] = 1;
            alpha_[e] = 1.0;
            return;
          }
          throw StageFailure("local cRK stage " + std::to_string(i + 1) +
                                 " left the flux domain in element " + std::to_string(e),
                             e);
        }
      }
      const double bi = tab_.b[i];
      const bool later = later_use_[i];
      if (bi != 0.0 || later) {
        for (int n = 0; n < npe_; ++n) {
          const Point pt = node_point(x0, y0, n);
          sc.f[n] = eq_.flux(ui[n], pt, 0);
          if constexpr (kDim == 2) sc.g[n] = eq_.flux(ui[n], pt, 1);
          if (src_on) sc.src[n] = eq_.source(ui[n], pt, t + tab_.c[i] * dt);
        }
      }
      if (bi != 0.0) {
        for (int n = 0; n < npe_; ++n) {
          axpy(bi, sc.f[n], sc.F[n]);
          if constexpr (kDim == 2) axpy(bi, sc.g[n], sc.G[n]);
          if (need_U_trace_) axpy(bi, ui[n], sc.U[n]);
          if (src_on) axpy(bi, sc.src[n], sc.S[n]);
        }
      }
      if (later) {
        auto& r = sc.rhs[i];
        const int nq = kDim == 2 ? n_ : 1;
        for (int q = 0; q < nq; ++q) {
          for (int p = 0; p < n_; ++p) {
            State d{};
            for (int j = 0; j < n_; ++j) axpy(basis_.d(p, j), sc.f[j + n_ * q], d);
            r[p + n_ * q] = (-1.0 / dx) * d;
          }
        }
        if constexpr (kDim == 2) {
          for (int q = 0; q < n_; ++q) {
            for (int p = 0; p < n_; ++p) {
              State d{};
              for (int j = 0; j < n_; ++j) axpy(basis_.d(q, j), sc.g[p + n_ * j], d);
              axpy(-1.0 / dy, d, r[p + n_ * q]);
            }
          }
        }
        if (src_on)
          for (int n = 0; n < npe_; ++n) r[n] += sc.src[n];
      }
      if (ea && bi != 0.0) {
        for (int lf = 0; lf < kLocalFaces; ++lf)
          for (int k = 0; k < nfp_; ++k) {
            const State uf = trace_of(ui.data(), lf, k);
            axpy(bi, eq_.flux(uf, face_point(x0, y0, lf, k), lf / 2), sc.trF[lf * nfp_ + k]);
          }
      }
      if (need_stage_trace_) {
        for (int lf = 0; lf < kLocalFaces; ++lf)
          for (int k = 0; k < nfp_; ++k) tr_stage_[tidx(slot, lf, k) * s + i] = trace_of(ui.data(), lf, k);
      }
    }

    for (int lf = 0; lf < kLocalFaces; ++lf) {
      for (int k = 0; k < nfp_; ++k) {
        const std::size_t ti = tidx(slot, lf, k);
        if (ea) tr_F_[ti] = sc.trF[lf * nfp_ + k];
        else tr_F_[ti] = trace_of(lf < 2 ? sc.F.data() : sc.G.data(), lf, k);
        if (need_u_trace_) tr_u_[ti] = trace_of(un, lf, k);
        if (need_U_trace_) tr_U_[ti] = trace_of(sc.U.data(), lf, k);
      }
    }
    if (real) {
      std::copy(sc.F.begin(), sc.F.end(), Fn_.begin() + static_cast<std::ptrdiff_t>(idx(e, 0)));
      if constexpr (kDim == 2)
        std::copy(sc.G.begin(), sc.G.end(), Gn_.begin() + static_cast<std::ptrdiff_t>(idx(e, 0)));
      if (src_on) std::copy(sc.S.begin(), sc.S.end(), Sn_.begin() + static_cast<std::ptrdiff_t>(idx(e, 0)));
    }
  }

  void count_traces() {
    const long long sides = static_cast<long long>(ne_ + (ghost_elements_ ? 2 : 0)) * kLocalFaces * nfp_;
    const long long m = Eq::kVars;
    counters.face_sides += sides;
    if (need_u_trace_) counters.solution_trace += sides * m;
    counters.time_average += sides * m * (need_U_trace_ ? 2 : 1);
    if (need_stage_trace_) counters.stage_trace += sides * m * tab_.stages;
  }

  FaceSide<State> side_data(int slot, int lf, int k) const {
    FaceSide<State> s;
    const std::size_t ti = tidx(slot, lf, k);
    s.F = tr_F_[ti];
    if (need_stage_trace_) {
      s.stages.assign(tr_stage_.begin() + static_cast<std::ptrdiff_t>(ti * tab_.stages),
                      tr_stage_.begin() + static_cast<std::ptrdiff_t>((ti + 1) * tab_.stages));
    }
    s.u = need_u_trace_ ? tr_u_[ti] : s.stages.front();
    if (need_U_trace_) s.U = tr_U_[ti];
    return s;
  }

  // ---- ghost elements (1-D) ------------------------------------------------
  void build_ghost_elements(const Field& u, double dt) {
    const int N = n_ - 1;
    const double dx = mesh_.dx();
    for (int side = 0; side < 2; ++side) {
      const int interior = side == 0 ? 0 : ne_ - 1;
      const double x0 = side == 0 ? mesh_.xmin - dx : mesh_.xmax;
      std::vector<State> g(n_);
      BoundaryKind kind = problem_.boundary.kinds[side];
      if (kind == BoundaryKind::Problem)
        kind = problem_.boundary_kind(side, Point{side == 0 ? mesh_.xmin : mesh_.xmax, 0.0});
      for (int p = 0; p < n_; ++p) {
        switch (kind) {
          case BoundaryKind::Periodic:
            g[p] = u.values[idx(side == 0 ? ne_ - 1 : 0, p)];
            break;
          case BoundaryKind::Inflow:
          case BoundaryKind::MixedHllc:
            g[p] = problem_.boundary_state(side, Point{x0 + basis_.points[p] * dx, 0.0}, u.time);
            break;
          case BoundaryKind::Outflow:
            g[p] = u.values[idx(interior, N - p)];
            break;
          case BoundaryKind::Wall:
            g[p] = eq_.reflect(u.values[idx(interior, N - p)], 0);
            break;
          case BoundaryKind::Problem:
            throw ConfigError("unresolved boundary kind");
        }
      }
      process_element(g.data(), x0, 0.0, ne_ + side, -1, u.time, dt);
    }
  }

  // ---- low-order subcell data ---------------------------------------------
  void compute_mu(const Field& u) {
    if constexpr (kDim == 1) {
      (void)u;
    } else {
      parallel_for(ne_, [&](int e) {
        const State m = u.mean(e);
        const Point c = centre(e);
        const double rx = eq_.speed(m, c, 0) / mesh_.dx();
        const double ry = eq_.speed(m, c, 1) / mesh_.dy();
        const double w = rx + ry > 0.0 ? rx / (rx + ry) : 0.5;
        mu_[e] = std::clamp(w, 0.1, 0.9);
      });
    }
  }
  double mu(int e, int d) const { return kDim == 1 ? 1.0 : (d == 0 ? mu_[e] : 1.0 - mu_[e]); }

  /// Neighbour node value and its distance for the MH slope across an element face.
  bool neighbour_node(const Field& u, int e, int d, bool upper, int line, State& val, double& dist) const {
    const int ix = e % mesh_.nx, iy = e / mesh_.nx;
    int jx = ix, jy = iy;
    const int nlim = d == 0 ? mesh_.nx : mesh_.ny;
    int& jc = d == 0 ? jx : jy;
    jc += upper ? 1 : -1;
    if (jc < 0 || jc >= nlim) {
      if (!periodic_[d]) return false;
      jc = (jc + nlim) % nlim;
    }
    const int en = mesh_.element(jx, jy);
    const int N = n_ - 1;
    const int p = upper ? 0 : N;
    const int node = d == 0 ? p + n_ * line : line + n_ * p;
    val = u.values[idx(en, node)];
    const double h = d == 0 ? mesh_.dx() : mesh_.dy();
    dist = upper ? (1.0 - basis_.points[N] + basis_.points[0]) * h
                 : (basis_.points[0] + 1.0 - basis_.points[N]) * h;
    return true;
  }

  void low_order_element(const Field& u, int e, double dt) {
    Scratch& sc = scratch();
    const State* un = u.element(e);
    const int ix = e % mesh_.nx, iy = e / mesh_.nx;
    const double x0 = mesh_.x_left(ix), y0 = mesh_.y_bottom(iy);
    const double h[2] = {mesh_.dx(), mesh_.dy()};
    const int N = n_ - 1;
    bool mh = blend_ == BlendKind::MH;
    for (int attempt = 0; attempt < 2; ++attempt) {
      for (int i = 0; i < npe_; ++i) {
        const int pi[2] = {i % n_, i / n_};
        if (!mh) {
          sc.pred[i].face.fill(un[i]);
          sc.pred[i].fallback = false;
          continue;
        }
        std::array<State, kDim> slope;
        std::array<double, kDim> dlo, dhi, width;
        for (int d = 0; d < kDim; ++d) {
          const int p = pi[d];
          const int line = pi[1 - d];
          const int stride = d == 0 ? 1 : n_;
          State lo_val, hi_val;
          double lo_dist = 0.0, hi_dist = 0.0;
          bool has_lo = true, has_hi = true;
          if (p > 0) {
            lo_val = un[i - stride];
            lo_dist = (basis_.points[p] - basis_.points[p - 1]) * h[d];
          } else {
            has_lo = neighbour_node(u, e, d, false, line, lo_val, lo_dist);
          }
          if (p < N) {
            hi_val = un[i + stride];
            hi_dist = (basis_.points[p + 1] - basis_.points[p]) * h[d];
          } else {
            has_hi = neighbour_node(u, e, d, true, line, hi_val, hi_dist);
          }
          if (has_lo && has_hi)
            slope[d] = minmod((1.0 / hi_dist) * (hi_val - un[i]), (1.0 / lo_dist) * (un[i] - lo_val));
          else
            slope[d] = State{};
          dlo[d] = (basis_.points[p] - xf_rel_[p]) * h[d];
          dhi[d] = (xf_rel_[p + 1] - basis_.points[p]) * h[d];
          width[d] = basis_.weights[p] * h[d];
        }
        sc.pred[i] = mh_predict(eq_, un[i], slope, dlo, dhi, width, node_point(x0, y0, i), dt,
                                lim_.mh_max_halvings);
      }
      // interior subface fluxes
      for (int d = 0; d < kDim; ++d) {
        for (int line = 0; line < nfp_; ++line) {
          for (int j = 1; j <= N; ++j) {
            const int a = d == 0 ? (j - 1) + n_ * line : line + n_ * (j - 1);
            const int b = d == 0 ? j + n_ * line : line + n_ * j;
            Point at = node_point(x0, y0, a);
            (d == 0 ? at.x : at.y) = (d == 0 ? x0 : y0) + xf_rel_[j] * h[d];
            lo_flux_[lofi(e, d, line, j)] =
                rusanov_flux(eq_, sc.pred[a].face[2 * d + 1], sc.pred[b].face[2 * d], at, d);
          }
        }
      }
      if (!mh) break;
      // admissibility of the interior subcell updates, direction by direction
      bool ok = true;
      for (int i = 0; i < npe_ && ok; ++i) {
        const int pi[2] = {i % n_, i / n_};
        for (int d = 0; d < kDim && ok; ++d) {
          const int p = pi[d];
          if (p == 0 || p == N) continue;
          const int line = pi[1 - d];
          const State& fl = lo_flux_[lofi(e, d, line, p)];
          const State& fr = lo_flux_[lofi(e, d, line, p + 1)];
          const State ut = un[i] - (dt / (mu(e, d) * basis_.weights[p] * h[d])) * (fr - fl);
          ok = admissible(eq_, ut);
        }
      }
      if (ok) break;
      mh = false;
      mh_fallback_[e] = 1;
    }
    for (int lf = 0; lf < kLocalFaces; ++lf)
      for (int k = 0; k < nfp_; ++k)
        lo_state_[(static_cast<std::size_t>(e) * kLocalFaces + lf) * nfp_ + k] =
            sc.pred[face_node(lf, k)].face[lf];
  }

  // ---- interface fluxes -----------------------------------------------------
  BoundaryKind resolve_kind(int side, const Point& at) const {
    BoundaryKind k = problem_.boundary.kinds[side];
    if (k == BoundaryKind::Problem) k = problem_.boundary_kind(side, at);
    return k;
  }

  /// Computes the flux at all points of face (i, j) in direction d. For x-faces
  /// i is the face column (0..nx) and j the row; for y-faces i is the column and
  /// j the face row (0..ny).
  void face_flux(const Field& u, int d, int i, int j, double dt) {
    const int nlim = d == 0 ? mesh_.nx : mesh_.ny;
    const int fidx = d == 0 ? i : j;
    int eL = -1, eR = -1;
    auto elem = [&](int c) { return d == 0 ? mesh_.element(c, j) : mesh_.element(i, c); };
    if (periodic_[d]) {
      eL = elem((fidx - 1 + nlim) % nlim);
      eR = elem(fidx % nlim);
    } else {
      if (fidx > 0) eL = elem(fidx - 1);
      if (fidx < nlim) eR = elem(fidx);
    }
    const int lfL = 2 * d + 1, lfR = 2 * d;
    const int boundary_side = eL < 0 ? 2 * d : (eR < 0 ? 2 * d + 1 : -1);
    const double alpha_face =
        std::max(eL >= 0 ? alpha_[eL] : 0.0, eR >= 0 ? alpha_[eR] : 0.0);
    const int N = n_ - 1;
    int limited = 0;
    for (int k = 0; k < nfp_; ++k) {
      Point at;
      if (d == 0) at = {mesh_.xmin + i * mesh_.dx(), kDim == 2 ? mesh_.y_bottom(j) + basis_.points[k] * mesh_.dy() : 0.0};
      else at = {mesh_.x_left(i) + basis_.points[k] * mesh_.dx(), mesh_.ymin + j * mesh_.dy()};

      // high-order candidate
      State f_ho{}, f_low{};
      const bool need_ho = alpha_face < 1.0;
      BoundaryKind kind = BoundaryKind::Periodic;
      std::function<State(double)> g;
      if (boundary_side >= 0) {
        kind = resolve_kind(boundary_side, at);
        if (kind == BoundaryKind::Inflow || kind == BoundaryKind::MixedHllc)
          g = [&, side = boundary_side](double t) { return problem_.boundary_state(side, at, t); };
      }
      if (need_ho) {
        if (boundary_side < 0) {
          const auto fd = make_face_data(side_data(eL, lfL, k), side_data(eR, lfR, k));
          f_ho = numerical_flux(eq_, fd, opt_.dissipation, tab_, at, d);
        } else if (ghost_elements_ ||
                   (outflow_ghosts_ && kind == BoundaryKind::Outflow &&
                    !fully_outgoing(eq_, u.values[idx(eL < 0 ? eR : eL, eL < 0 ? 0 : N)], at, d, eR < 0))) {
          const int gslot = ne_ + (eL < 0 ? 0 : 1);
          const auto fd = eL < 0 ? make_face_data(side_data(gslot, lfL, k), side_data(eR, lfR, k))
                                 : make_face_data(side_data(eL, lfL, k), side_data(gslot, lfR, k));
          f_ho = numerical_flux(eq_, fd, opt_.dissipation, tab_, at, d);
        } else {
          const bool interior_is_minus = eR < 0;
          const auto in = interior_is_minus ? side_data(eL, lfL, k) : side_data(eR, lfR, k);
          const auto gh = interface_ghost_values(eq_, kind, in, d, g, u.time, dt, tab_, at);
          f_ho = boundary_flux(eq_, kind, in, gh, interior_is_minus, opt_.dissipation, tab_, at, d);
        }
      }
      if (alpha_face > 0.0 || flux_limiter_) {
        const std::size_t ls = static_cast<std::size_t>(kLocalFaces) * nfp_;
        if (boundary_side < 0) {
          f_low = rusanov_flux(eq_, lo_state_[eL * ls + lfL * nfp_ + k], lo_state_[eR * ls + lfR * nfp_ + k], at, d);
        } else {
          const bool interior_is_minus = eR < 0;
          const State& ui = interior_is_minus ? lo_state_[eL * ls + lfL * nfp_ + k]
                                              : lo_state_[eR * ls + lfR * nfp_ + k];
          switch (kind) {
            case BoundaryKind::Inflow: f_low = eq_.flux(g(u.time), at, d); break;
            case BoundaryKind::Outflow: f_low = eq_.flux(ui, at, d); break;
            case BoundaryKind::Wall: {
              const State r = eq_.reflect(ui, d);
              f_low = interior_is_minus ? rusanov_flux(eq_, ui, r, at, d) : rusanov_flux(eq_, r, ui, at, d);
              break;
            }
            case BoundaryKind::MixedHllc: {
              const State gb = g(u.time);
              f_low = interior_is_minus ? rusanov_flux(eq_, ui, gb, at, d) : rusanov_flux(eq_, gb, ui, at, d);
              break;
            }
            default: f_low = eq_.flux(ui, at, d); break;
          }
        }
      }
      State f_cand = alpha_face == 0.0 ? f_ho : (alpha_face == 1.0 ? f_low : blend_interface_flux(f_ho, f_low, alpha_face));
      State f = f_cand;
      if (flux_limiter_) {
        double theta = 1.0;
        const double h = d == 0 ? mesh_.dx() : mesh_.dy();
        if (eL >= 0) {
          const State& un = u.values[idx(eL, face_node(lfL, k))];
          const State& fin = lo_flux_[lofi(eL, d, k, N)];
          const double c = dt / (mu(eL, d) * basis_.weights[N] * h);
          const State lo = un - c * (f_low - fin);
          const State ca = un - c * (f_cand - fin);
          try {
            theta = limit_theta(eq_, lo, ca, theta);
          } catch (const AdmissibilityError& ex) {
            throw AdmissibilityError(ex.what(), eL, step_);
          }
        }
        if (eR >= 0) {
          const State& un = u.values[idx(eR, face_node(lfR, k))];
          const State& fin = lo_flux_[lofi(eR, d, k, 1)];
          const double c = dt / (mu(eR, d) * basis_.weights[0] * h);
          const State lo = un - c * (fin - f_low);
          const State ca = un - c * (fin - f_cand);
          try {
            theta = limit_theta(eq_, lo, ca, theta);
          } catch (const AdmissibilityError& ex) {
            throw AdmissibilityError(ex.what(), eR, step_);
          }
        }
        if (theta < 1.0) {
          f = f_low + theta * (f_cand - f_low);
          ++limited;
        }
      }
      if (d == 0) fx_[fxi(i, j, k)] = f;
      else fy_[fyi(i, j, k)] = f;
    }
    if (d == 0) limited_x_[static_cast<std::size_t>(j) * (mesh_.nx + 1) + i] = limited;
    else limited_y_[static_cast<std::size_t>(j) * mesh_.nx + i] = limited;
  }

  // ---- element update -------------------------------------------------------
  void update_element(Field& u, int e, double dt) {
    Scratch& sc = scratch();
    State* un = u.element(e);
    const int ix = e % mesh_.nx, iy = e / mesh_.nx;
    const double dx = mesh_.dx(), dy = mesh_.dy();
    const double a = alpha_[e];
    const int N = n_ - 1;
    const int nq = kDim == 2 ? n_ : 1;
    const State* F = Fn_.data() + idx(e, 0);
    const State* S = eq_.has_source() ? Sn_.data() + idx(e, 0) : nullptr;
    auto& uh = sc.ui;
    auto& ul = sc.f;
    if (a < 1.0) {
      for (int q = 0; q < nq; ++q) {
        const State fl = fx_[fxi(ix, iy, q)];
        const State fr = fx_[fxi(ix + 1, iy, q)];
        State pl{}, pr{};
        for (int p = 0; p < n_; ++p) {
          axpy(basis_.l_at_0[p], F[p + n_ * q], pl);
          axpy(basis_.l_at_1[p], F[p + n_ * q], pr);
        }
        for (int p = 0; p < n_; ++p) {
          State r{};
          for (int jj = 0; jj < n_; ++jj) axpy(basis_.d(p, jj), F[jj + n_ * q], r);
          axpy(basis_.gr_prime[p], fr - pr, r);
          axpy(basis_.gl_prime[p], fl - pl, r);
          uh[p + n_ * q] = un[p + n_ * q] - (dt / dx) * r;
        }
      }
      if constexpr (kDim == 2) {
        const State* G = Gn_.data() + idx(e, 0);
        for (int p = 0; p < n_; ++p) {
          const State gb = fy_[fyi(ix, iy, p)];
          const State gt = fy_[fyi(ix, iy + 1, p)];
          State pb{}, pt{};
          for (int q = 0; q < n_; ++q) {
            axpy(basis_.l_at_0[q], G[p + n_ * q], pb);
            axpy(basis_.l_at_1[q], G[p + n_ * q], pt);
          }
          for (int q = 0; q < n_; ++q) {
            State r{};
            for (int jj = 0; jj < n_; ++jj) axpy(basis_.d(q, jj), G[p + n_ * jj], r);
            axpy(basis_.gr_prime[q], gt - pt, r);
            axpy(basis_.gl_prime[q], gb - pb, r);
            axpy(-dt / dy, r, uh[p + n_ * q]);
          }
        }
      }
      if (S)
        for (int i = 0; i < npe_; ++i) axpy(dt, S[i], uh[i]);
    }
    if (a > 0.0) {
      for (int i = 0; i < npe_; ++i) {
        const int p = i % n_, q = i / n_;
        State v = un[i];
        const State& fl = p == 0 ? fx_[fxi(ix, iy, q)] : lo_flux_[lofi(e, 0, q, p)];
        const State& fr = p == N ? fx_[fxi(ix + 1, iy, q)] : lo_flux_[lofi(e, 0, q, p + 1)];
        axpy(-dt / (basis_.weights[p] * dx), fr - fl, v);
        if constexpr (kDim == 2) {
          const State& gb = q == 0 ? fy_[fyi(ix, iy, p)] : lo_flux_[lofi(e, 1, p, q)];
          const State& gt = q == N ? fy_[fyi(ix, iy + 1, p)] : lo_flux_[lofi(e, 1, p, q + 1)];
          axpy(-dt / (basis_.weights[q] * dy), gt - gb, v);
        }
        if (S) axpy(dt, S[i], v);
        ul[i] = v;
      }
    }
    for (int i = 0; i < npe_; ++i) un[i] = a == 0.0 ? uh[i] : (a == 1.0 ? ul[i] : (1.0 - a) * uh[i] + a * ul[i]);

    for (int i = 0; i < npe_; ++i)
      if (!all_finite(un[i]))
        throw AdmissibilityError("non-finite value in element " + std::to_string(e), e, step_);
    if constexpr (Eq::kConstraints > 0) {
      if (lim_.scaling_limiter) {
        const double th = scaling_limit(eq_, un, node_weights_.data(), npe_, e, step_);
        scaled_[e] = th < 1.0 ? 1 : 0;
      } else {
        State m{};
        for (int i = 0; i < npe_; ++i) axpy(node_weights_[i], un[i], m);
        if (!admissible(eq_, m))
          throw AdmissibilityError("element mean left the admissible set in element " + std::to_string(e), e, step_);
      }
    }
  }

  double ghost_rate(double t) const {
    double rate = 0.0;
    for (int side = 0; side < kLocalFaces; ++side) {
      const auto k = problem_.boundary.kinds[side];
      if (k != BoundaryKind::Inflow && k != BoundaryKind::MixedHllc && k != BoundaryKind::Problem) continue;
      const int d = side / 2;
      const int count = d == 0 ? mesh_.ny : mesh_.nx;
      for (int c = 0; c < count; ++c) {
        Point at;
        if (d == 0) at = {side == 0 ? mesh_.xmin : mesh_.xmax, kDim == 2 ? mesh_.y_bottom(c) + 0.5 * mesh_.dy() : 0.0};
        else at = {mesh_.x_left(c) + 0.5 * mesh_.dx(), side == 2 ? mesh_.ymin : mesh_.ymax};
        if (k == BoundaryKind::Problem) {
          const auto pk = problem_.boundary_kind(side, at);
          if (pk != BoundaryKind::Inflow && pk != BoundaryKind::MixedHllc) continue;
        }
        const State g = problem_.boundary_state(side, at, t);
        double r = eq_.speed(g, at, 0) / mesh_.dx();
        if (kDim == 2) r += eq_.speed(g, at, 1) / mesh_.dy();
        rate = std::max(rate, r);
      }
    }
    return rate;
  }
};

}  // namespace crkfr
