#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace crkfr {

/// Explicit Butcher tableau driving the local cRK stages.
struct ButcherTableau {
  std::string name;
  int stages = 0;
  int order = 0;
  std::vector<double> a;  // row-major s x s, strictly lower triangular
  std::vector<double> b;
  std::vector<double> c;

  double coeff(int i, int j) const { return a[static_cast<std::size_t>(i * stages + j)]; }
};

ButcherTableau crk11();
ButcherTableau crk22();
ButcherTableau crk33();
ButcherTableau crk44();

/// "crk11", "crk22", "crk33" or "crk44".
ButcherTableau tableau_by_name(std::string_view name);
/// Built-in tableau of order degree+1 (degree 0..3).
ButcherTableau default_tableau(int degree);

}  // namespace crkfr
