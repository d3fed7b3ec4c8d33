#include "crkfr/cfl.hpp"

#include <fstream>
#include <sstream>

#include "crkfr/errors.hpp"

namespace crkfr {

namespace {

Dissipation column(Dissipation d) { return d == Dissipation::DCSX ? Dissipation::D2 : d; }

std::tuple<int, int, int> key(PointSet p, Dissipation d, int degree) {
  return {static_cast<int>(p), static_cast<int>(column(d)), degree};
}

}  // namespace

const CflTable& CflTable::builtin() {
  static const CflTable table = [] {
    CflTable t;
    const double gl_d1[] = {1.0, 0.226590, 0.117192, 0.072632};
    const double gl_d2[] = {1.0, 0.333333, 0.170820, 0.103929};
    const double gll_d1[] = {0.465574, 0.206079, 0.117163};
    const double gll_d2[] = {1.0, 0.333333, 0.170820};
    for (int n = 0; n <= 3; ++n) {
      t.set(PointSet::GL, Dissipation::D1, n, gl_d1[n]);
      t.set(PointSet::GL, Dissipation::D2, n, gl_d2[n]);
    }
    for (int n = 1; n <= 3; ++n) {
      t.set(PointSet::GLL, Dissipation::D1, n, gll_d1[n - 1]);
      t.set(PointSet::GLL, Dissipation::D2, n, gll_d2[n - 1]);
    }
    return t;
  }();
  return table;
}

CflTable CflTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CFL table " + path);
  CflTable t;
  std::string line;
  std::getline(in, line);
  if (line.rfind("points,dissipation,degree,cfl", 0) != 0)
    throw ConfigError("unexpected CFL table header in " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string pts, dis, deg, cfl;
    if (!std::getline(ss, pts, ',') || !std::getline(ss, dis, ',') || !std::getline(ss, deg, ',') ||
        !std::getline(ss, cfl))
      throw ConfigError("malformed CFL table row: " + line);
    t.set(parse_point_set(pts), parse_dissipation(dis), std::stoi(deg), std::stod(cfl));
  }
  return t;
}

void CflTable::set(PointSet points, Dissipation d, int degree, double cfl) {
  if (!(cfl > 0.0)) throw ConfigError("CFL numbers must be positive");
  values_[key(points, d, degree)] = cfl;
}

bool CflTable::has(PointSet points, Dissipation d, int degree) const {
  return values_.count(key(points, d, degree)) > 0;
}

double CflTable::at(PointSet points, Dissipation d, int degree) const {
  const auto it = values_.find(key(points, d, degree));
  if (it == values_.end())
    throw ConfigError("no CFL number for degree " + std::to_string(degree) + " with " +
                      std::string(to_string(points)) + " points and " + std::string(to_string(d)) +
                      "; set cfl explicitly");
  return it->second;
}

}  // namespace crkfr
