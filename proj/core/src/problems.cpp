#include "crkfr/problems.hpp"

#include <cmath>
#include <numbers>

namespace crkfr {

namespace {

constexpr double kPi = std::numbers::pi;

int pick(int requested, int fallback) { return requested > 0 ? requested : fallback; }

BoundarySpec all_sides(BoundaryKind k) {
  BoundarySpec b;
  for (auto& s : b.kinds) s = k;
  return b;
}

template <class State>
std::vector<double> to_vector(const State& u) {
  return std::vector<double>(u.v.begin(), u.v.end());
}

double varadv_u0(double x) { return std::cos(0.5 * kPi * x); }

double varadv_exact(double x, double t) {
  const double s = 1.0 + t * x;
  return varadv_u0(x / s) / (s * s);
}

struct Vortex {
  double beta = 5.0;
  double mach = 0.5;
  double angle = kPi / 4.0;
  double lo = -10.0, hi = 10.0;

  Euler2D::State at(const Euler2D& eq, double x, double y) const {
    const double r2 = x * x + y * y;
    const double g = eq.gamma;
    const double rho =
        std::pow(1.0 - beta * beta * (g - 1.0) / (8.0 * g * kPi * kPi) * std::exp(1.0 - r2), 1.0 / (g - 1.0));
    const double e = beta / (2.0 * kPi) * std::exp(0.5 * (1.0 - r2));
    const double v1 = mach * std::cos(angle) - e * y;
    const double v2 = mach * std::sin(angle) + e * x;
    return eq.from_primitive(rho, v1, v2, std::pow(rho, g));
  }
  double wrap(double s) const {
    const double len = hi - lo;
    return s - len * std::floor((s - lo) / len);
  }
  Euler2D::State exact(const Euler2D& eq, const Point& p, double t) const {
    return at(eq, wrap(p.x - mach * std::cos(angle) * t), wrap(p.y - mach * std::sin(angle) * t));
  }
};

double composite_initial(double x, double y) {
  const double r0 = 0.15;
  double u = 0.0;
  {
    const double q = std::min(std::hypot(x - 0.25, y - 0.5), r0) / r0;
    u += 0.25 * (1.0 + std::cos(kPi * q));
  }
  {
    const double r = std::hypot(x - 0.5, y - 0.25);
    if (r <= r0) u += 1.0 - r / r0;
  }
  {
    const double r = std::hypot(x - 0.5, y - 0.75);
    const bool slot = std::abs(x - 0.5) < 0.25 * r0 && y < 0.75 + 0.7 * r0;
    if (r <= r0 && !slot) u += 1.0;
  }
  return u;
}

}  // namespace

const std::vector<ProblemInfo>& problem_catalog() {
  static const std::vector<ProblemInfo> catalog = {
      {"linear_advection", "linear_advection", 1, 64, 1, 2.0, true, "sin(2 pi x), periodic [0,1]"},
      {"varadv_x2", "variable_advection", 1, 64, 1, 1.0, true, "a(x)=x^2 on [0.1,1], inflow/outflow"},
      {"burgers_sine", "burgers", 1, 64, 1, 2.0, true, "0.2 sin(x), periodic [0,2 pi]"},
      {"blast", "euler1d", 1, 400, 1, 0.038, false, "interacting blast waves, reflecting walls"},
      {"titarev_toro", "euler1d", 1, 800, 1, 5.0, false, "shock hitting high-frequency density waves"},
      {"sedov1d", "euler1d", 1, 201, 1, 0.001, false, "point energy release on [-1,1], walls"},
      {"tenmoment_two_rarefaction", "tenmoment1d", 1, 500, 1, 0.1, false,
       "two rarefactions with quiver source, [1,3]"},
      {"composite_signal", "advection2d", 2, 100, 100, 2.0 * kPi, true,
       "slotted disc, cone and hump under solid-body rotation"},
      {"isentropic_vortex", "euler2d", 2, 32, 32, 1.0, true, "vortex advected diagonally, periodic"},
      {"riemann2d_c12", "euler2d", 2, 64, 64, 0.25, false, "four-state Riemann problem, configuration 12"},
      {"sedov2d", "euler2d", 2, 32, 32, 2.0, false, "Gaussian blast on a periodic domain"},
      {"double_mach", "euler2d", 2, 120, 30, 0.2, false, "Mach 10 shock reflection off a ramp"},
      {"astro_jet", "euler2d", 2, 100, 100, 0.001, false, "Mach 2000 jet, HLLC at the inlet"},
      {"rayleigh_taylor", "euler2d", 2, 16, 64, 2.5, false, "gravity-driven interface instability"},
      {"tenmoment_realistic", "tenmoment2d", 2, 30, 30, 0.5, false, "laser heating with quiver source"},
  };
  return catalog;
}

const ProblemInfo& problem_info(std::string_view id) {
  for (const auto& p : problem_catalog())
    if (p.id == id) return p;
  throw ConfigError("unknown problem '" + std::string(id) + "'");
}

double burgers_sine_exact(double x, double t) {
  double u = 0.2 * std::sin(x);
  for (int it = 0; it < 100; ++it) {
    const double arg = x - u * t;
    const double h = u - 0.2 * std::sin(arg);
    const double dh = 1.0 + 0.2 * t * std::cos(arg);
    if (std::abs(dh) < 1e-10) break;
    const double du = h / dh;
    u -= du;
    if (std::abs(du) <= 1e-13) return u;
  }
  throw DomainError("burgers_sine_exact: Newton iteration did not converge at x=" + std::to_string(x) +
                    ", t=" + std::to_string(t));
}

std::vector<double> exact_solution(std::string_view id, const Point& x, double t) {
  if (id == "linear_advection") return {std::sin(2.0 * kPi * (x.x - t))};
  if (id == "varadv_x2") return {varadv_exact(x.x, t)};
  if (id == "burgers_sine") return {burgers_sine_exact(x.x, t)};
  if (id == "isentropic_vortex") return to_vector(Vortex{}.exact(Euler2D{}, x, t));
  if (id == "composite_signal") {
    const double c = std::cos(t), s = std::sin(t);
    const double dx = x.x - 0.5, dy = x.y - 0.5;
    return {composite_initial(0.5 + c * dx + s * dy, 0.5 - s * dx + c * dy)};
  }
  throw ConfigError("no exact solution for problem '" + std::string(id) + "'");
}

ProblemSetup<LinearAdvection1D> make_linear_advection(const ProblemParams& p) {
  ProblemSetup<LinearAdvection1D> s;
  s.id = "linear_advection";
  s.eq.velocity = p.velocity;
  s.mesh = Mesh::line(pick(p.nx, 64), 0.0, 1.0);
  s.final_time = 2.0;
  s.boundary = all_sides(BoundaryKind::Periodic);
  s.initial = [](const Point& x) { return Vec<1>{{std::sin(2.0 * kPi * x.x)}}; };
  const double a = p.velocity;
  s.exact = [a](const Point& x, double t) { return Vec<1>{{std::sin(2.0 * kPi * (x.x - a * t))}}; };
  return s;
}

ProblemSetup<VariableAdvection1D> make_varadv_x2(const ProblemParams& p) {
  ProblemSetup<VariableAdvection1D> s;
  s.id = "varadv_x2";
  s.mesh = Mesh::line(pick(p.nx, 64), 0.1, 1.0);
  s.final_time = 1.0;
  s.boundary.kinds[0] = BoundaryKind::Inflow;
  s.boundary.kinds[1] = BoundaryKind::Outflow;
  s.initial = [](const Point& x) { return Vec<1>{{varadv_u0(x.x)}}; };
  s.exact = [](const Point& x, double t) { return Vec<1>{{varadv_exact(x.x, t)}}; };
  s.boundary_state = [](int, const Point& x, double t) { return Vec<1>{{varadv_exact(x.x, t)}}; };
  return s;
}

ProblemSetup<Burgers1D> make_burgers_sine(const ProblemParams& p) {
  ProblemSetup<Burgers1D> s;
  s.id = "burgers_sine";
  s.mesh = Mesh::line(pick(p.nx, 64), 0.0, 2.0 * kPi);
  s.final_time = 2.0;
  s.boundary = all_sides(BoundaryKind::Periodic);
  s.initial = [](const Point& x) { return Vec<1>{{0.2 * std::sin(x.x)}}; };
  s.exact = [](const Point& x, double t) { return Vec<1>{{burgers_sine_exact(x.x, t)}}; };
  return s;
}

ProblemSetup<Euler1D> make_blast(const ProblemParams& p) {
  ProblemSetup<Euler1D> s;
  s.id = "blast";
  s.eq.gamma = p.gamma.value_or(1.4);
  s.mesh = Mesh::line(pick(p.nx, 400), 0.0, 1.0);
  s.final_time = 0.038;
  s.boundary = all_sides(BoundaryKind::Wall);
  const Euler1D eq = s.eq;
  s.initial = [eq](const Point& x) {
    const double pr = x.x < 0.1 ? 1000.0 : (x.x < 0.9 ? 0.01 : 100.0);
    return eq.from_primitive(1.0, 0.0, pr);
  };
  return s;
}

ProblemSetup<Euler1D> make_titarev_toro(const ProblemParams& p) {
  ProblemSetup<Euler1D> s;
  s.id = "titarev_toro";
  s.eq.gamma = p.gamma.value_or(1.4);
  s.mesh = Mesh::line(pick(p.nx, 800), -5.0, 5.0);
  s.final_time = 5.0;
  s.boundary = all_sides(BoundaryKind::Outflow);
  const Euler1D eq = s.eq;
  s.initial = [eq](const Point& x) {
    if (x.x <= -4.5) return eq.from_primitive(1.515695, 0.523346, 1.805);
    return eq.from_primitive(1.0 + 0.1 * std::sin(20.0 * kPi * x.x), 0.0, 1.0);
  };
  return s;
}

ProblemSetup<Euler1D> make_sedov1d(const ProblemParams& p) {
  ProblemSetup<Euler1D> s;
  s.id = "sedov1d";
  s.eq.gamma = p.gamma.value_or(1.4);
  s.mesh = Mesh::line(pick(p.nx, 201), -1.0, 1.0);
  s.final_time = 0.001;
  s.boundary = all_sides(BoundaryKind::Wall);
  const double dx = s.mesh.dx();
  s.initial = [dx](const Point& x) {
    const double e = std::abs(x.x) <= 0.5 * dx ? 3.2e6 / dx : 1e-12;
    return Vec<3>{{1.0, 0.0, e}};
  };
  return s;
}

ProblemSetup<TenMoment1D> make_tenmoment_two_rarefaction(const ProblemParams& p) {
  ProblemSetup<TenMoment1D> s;
  s.id = "tenmoment_two_rarefaction";
  s.eq.potential = QuiverPotential{25.0, 200.0, 2.0, 0.0, false};
  s.eq.source_on = p.source;
  s.eq.nu_t = p.nu_t;
  s.mesh = Mesh::line(pick(p.nx, 500), 1.0, 3.0);
  s.final_time = 0.1;
  s.boundary = all_sides(BoundaryKind::Outflow);
  const TenMoment1D eq = s.eq;
  s.initial = [eq](const Point& x) {
    return eq.from_primitive(1.0, x.x < 2.0 ? -4.0 : 4.0, 0.0, 9.0, 7.0, 9.0);
  };
  return s;
}

ProblemSetup<Advection2D> make_composite_signal(const ProblemParams& p) {
  ProblemSetup<Advection2D> s;
  s.id = "composite_signal";
  s.eq.rotation = true;
  const int nx = pick(p.nx, 100);
  s.mesh = Mesh::rect(nx, pick(p.ny, nx), 0.0, 1.0, 0.0, 1.0);
  s.final_time = 2.0 * kPi;
  s.boundary = all_sides(BoundaryKind::MixedHllc);
  s.initial = [](const Point& x) { return Vec<1>{{composite_initial(x.x, x.y)}}; };
  s.exact = [](const Point& x, double t) { return Vec<1>{{exact_solution("composite_signal", x, t)[0]}}; };
  s.boundary_state = [](int, const Point&, double) { return Vec<1>{}; };
  return s;
}

ProblemSetup<Euler2D> make_isentropic_vortex(const ProblemParams& p) {
  ProblemSetup<Euler2D> s;
  s.id = "isentropic_vortex";
  s.eq.gamma = p.gamma.value_or(1.4);
  const int nx = pick(p.nx, 32);
  s.mesh = Mesh::rect(nx, pick(p.ny, nx), -10.0, 10.0, -10.0, 10.0);
  s.final_time = 1.0;
  s.boundary = all_sides(BoundaryKind::Periodic);
  const Euler2D eq = s.eq;
  s.initial = [eq](const Point& x) { return Vortex{}.at(eq, x.x, x.y); };
  s.exact = [eq](const Point& x, double t) { return Vortex{}.exact(eq, x, t); };
  return s;
}

ProblemSetup<Euler2D> make_riemann2d_c12(const ProblemParams& p) {
  ProblemSetup<Euler2D> s;
  s.id = "riemann2d_c12";
  s.eq.gamma = p.gamma.value_or(1.4);
  const int nx = pick(p.nx, 64);
  s.mesh = Mesh::rect(nx, pick(p.ny, nx), 0.0, 1.0, 0.0, 1.0);
  s.final_time = 0.25;
  s.boundary = all_sides(BoundaryKind::Outflow);
  const Euler2D eq = s.eq;
  s.initial = [eq](const Point& x) {
    if (x.x >= 0.5 && x.y >= 0.5) return eq.from_primitive(0.5313, 0.0, 0.0, 0.4);
    if (x.x < 0.5 && x.y >= 0.5) return eq.from_primitive(1.0, 0.7276, 0.0, 1.0);
    if (x.x < 0.5) return eq.from_primitive(0.8, 0.0, 0.0, 1.0);
    return eq.from_primitive(1.0, 0.0, 0.7276, 1.0);
  };
  return s;
}

ProblemSetup<Euler2D> make_sedov2d(const ProblemParams& p) {
  ProblemSetup<Euler2D> s;
  s.id = "sedov2d";
  s.eq.gamma = p.gamma.value_or(1.4);
  const int nx = pick(p.nx, 32);
  s.mesh = Mesh::rect(nx, pick(p.ny, nx), -1.5, 1.5, -1.5, 1.5);
  s.final_time = 2.0;
  s.boundary = all_sides(BoundaryKind::Periodic);
  const Euler2D eq = s.eq;
  s.initial = [eq](const Point& x) {
    const double r2 = x.x * x.x + x.y * x.y;
    const double sr = 0.25, sp = 0.15;
    const double rho = 1.0 + std::exp(-r2 / (2.0 * sr * sr)) / (4.0 * kPi * sr * sr);
    const double pr = 1e-5 + (eq.gamma - 1.0) * std::exp(-r2 / (2.0 * sp * sp)) / (4.0 * kPi * sp * sp);
    return eq.from_primitive(rho, 0.0, 0.0, pr);
  };
  return s;
}

ProblemSetup<Euler2D> make_double_mach(const ProblemParams& p) {
  ProblemSetup<Euler2D> s;
  s.id = "double_mach";
  s.eq.gamma = p.gamma.value_or(1.4);
  const int nx = pick(p.nx, 120);
  s.mesh = Mesh::rect(nx, pick(p.ny, nx / 4), 0.0, 4.0, 0.0, 1.0);
  s.final_time = 0.2;
  s.boundary.kinds[0] = BoundaryKind::Inflow;
  s.boundary.kinds[1] = BoundaryKind::Outflow;
  s.boundary.kinds[2] = BoundaryKind::Problem;
  s.boundary.kinds[3] = BoundaryKind::Inflow;
  const Euler2D eq = s.eq;
  auto ub = [eq](const Point& x, double t) {
    if (x.x < 1.0 / 6.0 + (x.y + 20.0 * t) / std::sqrt(3.0))
      return eq.from_primitive(8.0, 8.25 * std::cos(kPi / 6.0), -8.25 * std::sin(kPi / 6.0), 116.5);
    return eq.from_primitive(1.4, 0.0, 0.0, 1.0);
  };
  s.initial = [ub](const Point& x) { return ub(x, 0.0); };
  s.boundary_state = [ub](int, const Point& x, double t) { return ub(x, t); };
  s.boundary_kind = [](int side, const Point& x) {
    if (side == 2) return x.x < 1.0 / 6.0 ? BoundaryKind::Outflow : BoundaryKind::Wall;
    return BoundaryKind::Outflow;
  };
  return s;
}

ProblemSetup<Euler2D> make_astro_jet(const ProblemParams& p) {
  ProblemSetup<Euler2D> s;
  s.id = "astro_jet";
  s.eq.gamma = p.gamma.value_or(5.0 / 3.0);
  const int nx = pick(p.nx, 100);
  s.mesh = Mesh::rect(nx, pick(p.ny, nx), 0.0, 1.0, -0.5, 0.5);
  s.final_time = 0.001;
  s.boundary = all_sides(BoundaryKind::Outflow);
  s.boundary.kinds[0] = BoundaryKind::MixedHllc;
  const Euler2D eq = s.eq;
  const auto ambient = eq.from_primitive(0.5, 0.0, 0.0, 0.4127);
  const auto jet = eq.from_primitive(5.0, 800.0, 0.0, 0.4127);
  s.initial = [ambient](const Point&) { return ambient; };
  s.boundary_state = [ambient, jet](int, const Point& x, double) {
    return std::abs(x.y) <= 0.05 ? jet : ambient;
  };
  return s;
}

ProblemSetup<Euler2D> make_rayleigh_taylor(const ProblemParams& p) {
  ProblemSetup<Euler2D> s;
  s.id = "rayleigh_taylor";
  s.eq.gamma = p.gamma.value_or(5.0 / 3.0);
  s.eq.gravity = 1.0;
  const int nx = pick(p.nx, 16);
  s.mesh = Mesh::rect(nx, pick(p.ny, 4 * nx), 0.0, 0.25, 0.0, 1.0);
  s.final_time = 2.5;
  s.boundary.kinds[0] = BoundaryKind::Wall;
  s.boundary.kinds[1] = BoundaryKind::Wall;
  s.boundary.kinds[2] = BoundaryKind::MixedHllc;
  s.boundary.kinds[3] = BoundaryKind::MixedHllc;
  const Euler2D eq = s.eq;
  s.initial = [eq](const Point& x) {
    const double rho = x.y <= 0.5 ? 2.0 : 1.0;
    const double pr = x.y <= 0.5 ? 2.0 * x.y + 1.0 : x.y + 1.5;
    const double c = std::sqrt(eq.gamma * pr / rho);
    return eq.from_primitive(rho, 0.0, -0.025 * c * std::cos(8.0 * kPi * x.x), pr);
  };
  s.boundary_state = [eq](int side, const Point&, double) {
    return side == 3 ? eq.from_primitive(1.0, 0.0, 0.0, 2.5) : eq.from_primitive(2.0, 0.0, 0.0, 1.0);
  };
  return s;
}

ProblemSetup<TenMoment2D> make_tenmoment_realistic(const ProblemParams& p) {
  ProblemSetup<TenMoment2D> s;
  s.id = "tenmoment_realistic";
  s.eq.potential = QuiverPotential{1.0, 0.01, 50.0, 50.0, true};
  s.eq.source_on = p.source;
  s.eq.y_source = false;
  s.eq.nu_t = p.nu_t;
  const int nx = pick(p.nx, 30);
  s.mesh = Mesh::rect(nx, pick(p.ny, nx), 0.0, 100.0, 0.0, 100.0);
  s.final_time = 0.5;
  s.boundary = all_sides(BoundaryKind::Outflow);
  const TenMoment2D eq = s.eq;
  s.initial = [eq](const Point&) { return eq.from_primitive(0.109885, 0.0, 0.0, 1.0, 0.0, 1.0); };
  return s;
}

}  // namespace crkfr
