#pragma once

#include <map>
#include <string>
#include <tuple>

#include "crkfr/basis.hpp"
#include "crkfr/scheme.hpp"

namespace crkfr {

/// Stable Courant numbers of the 1-D scheme for linear advection, per point set,
/// dissipation model and degree. D-CSX shares the D2 column.
class CflTable {
 public:
  /// Values generated by tools/cfl_scan.py (mirrored in data/cfl_table.csv).
  static const CflTable& builtin();
  /// Reads a CSV with header points,dissipation,degree,cfl.
  static CflTable from_csv(const std::string& path);

  void set(PointSet points, Dissipation d, int degree, double cfl);
  bool has(PointSet points, Dissipation d, int degree) const;
  /// Throws ConfigError when the entry is missing.
  double at(PointSet points, Dissipation d, int degree) const;
  std::size_t size() const { return values_.size(); }

 private:
  std::map<std::tuple<int, int, int>, double> values_;
};

inline double cfl_number(int degree, PointSet points, Dissipation d) {
  return CflTable::builtin().at(points, d, degree);
}

}  // namespace crkfr
