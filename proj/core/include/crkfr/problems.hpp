#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crkfr/equations.hpp"
#include "crkfr/errors.hpp"
#include "crkfr/problem.hpp"

namespace crkfr {

/// Physical knobs that a run configuration may change for a catalog problem.
struct ProblemParams {
  int nx = 0;  // 0 keeps the catalog default
  int ny = 0;
  std::optional<double> gamma;
  bool source = true;      // ten-moment quiver source on/off
  double nu_t = 0.0;       // ten-moment absorption coefficient
  double velocity = 1.0;   // linear advection speed
};

struct ProblemInfo {
  std::string id;
  std::string equation;
  int dim = 1;
  int default_nx = 0;
  int default_ny = 1;
  double final_time = 0.0;
  bool has_exact = false;
  std::string description;
};

const std::vector<ProblemInfo>& problem_catalog();
/// Throws ConfigError for unknown ids.
const ProblemInfo& problem_info(std::string_view id);

ProblemSetup<LinearAdvection1D> make_linear_advection(const ProblemParams& p);
ProblemSetup<VariableAdvection1D> make_varadv_x2(const ProblemParams& p);
ProblemSetup<Burgers1D> make_burgers_sine(const ProblemParams& p);
ProblemSetup<Euler1D> make_blast(const ProblemParams& p);
ProblemSetup<Euler1D> make_titarev_toro(const ProblemParams& p);
ProblemSetup<Euler1D> make_sedov1d(const ProblemParams& p);
ProblemSetup<TenMoment1D> make_tenmoment_two_rarefaction(const ProblemParams& p);
ProblemSetup<Advection2D> make_composite_signal(const ProblemParams& p);
ProblemSetup<Euler2D> make_isentropic_vortex(const ProblemParams& p);
ProblemSetup<Euler2D> make_riemann2d_c12(const ProblemParams& p);
ProblemSetup<Euler2D> make_sedov2d(const ProblemParams& p);
ProblemSetup<Euler2D> make_double_mach(const ProblemParams& p);
ProblemSetup<Euler2D> make_astro_jet(const ProblemParams& p);
ProblemSetup<Euler2D> make_rayleigh_taylor(const ProblemParams& p);
ProblemSetup<TenMoment2D> make_tenmoment_realistic(const ProblemParams& p);

/// Exact solution of the smooth catalog problems as a plain vector of conserved
/// variables. Throws ConfigError for problems without one and DomainError when
/// the Burgers characteristic equation cannot be solved.
std::vector<double> exact_solution(std::string_view problem_id, const Point& x, double t);

/// Solves u = 0.2 sin(x - u t) by Newton iteration to 1e-13.
double burgers_sine_exact(double x, double t);

/// Builds the setup for `id` and passes it to `f`, returning f's result.
template <class F>
decltype(auto) with_problem(std::string_view id, const ProblemParams& p, F&& f) {
  if (id == "linear_advection") return f(make_linear_advection(p));
  if (id == "varadv_x2") return f(make_varadv_x2(p));
  if (id == "burgers_sine") return f(make_burgers_sine(p));
  if (id == "blast") return f(make_blast(p));
  if (id == "titarev_toro") return f(make_titarev_toro(p));
  if (id == "sedov1d") return f(make_sedov1d(p));
  if (id == "tenmoment_two_rarefaction") return f(make_tenmoment_two_rarefaction(p));
  if (id == "composite_signal") return f(make_composite_signal(p));
  if (id == "isentropic_vortex") return f(make_isentropic_vortex(p));
  if (id == "riemann2d_c12") return f(make_riemann2d_c12(p));
  if (id == "sedov2d") return f(make_sedov2d(p));
  if (id == "double_mach") return f(make_double_mach(p));
  if (id == "astro_jet") return f(make_astro_jet(p));
  if (id == "rayleigh_taylor") return f(make_rayleigh_taylor(p));
  if (id == "tenmoment_realistic") return f(make_tenmoment_realistic(p));
  throw ConfigError("unknown problem '" + std::string(id) + "'");
}

}  // namespace crkfr
