#include "crkfr/tableau.hpp"

#include "crkfr/errors.hpp"

namespace crkfr {
namespace {

ButcherTableau make(std::string name, int order, std::vector<double> a, std::vector<double> b) {
  ButcherTableau t;
  t.name = std::move(name);
  t.stages = static_cast<int>(b.size());
  t.order = order;
  t.a = std::move(a);
  t.b = std::move(b);
  t.c.assign(t.stages, 0.0);
  for (int i = 0; i < t.stages; ++i)
    for (int j = 0; j < t.stages; ++j) t.c[i] += t.coeff(i, j);
  return t;
}

}  // namespace

ButcherTableau crk11() { return make("crk11", 1, {0.0}, {1.0}); }

ButcherTableau crk22() { return make("crk22", 2, {0.0, 0.0, 0.5, 0.0}, {0.0, 1.0}); }

ButcherTableau crk33() {
  return make("crk33", 3,
              {0.0, 0.0, 0.0,  //
               1.0 / 3.0, 0.0, 0.0,  //
               0.0, 2.0 / 3.0, 0.0},
              {0.25, 0.0, 0.75});
}

ButcherTableau crk44() {
  return make("crk44", 4,
              {0.0, 0.0, 0.0, 0.0,  //
               0.5, 0.0, 0.0, 0.0,  //
               0.0, 0.5, 0.0, 0.0,  //
               0.0, 0.0, 1.0, 0.0},
              {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0});
}

ButcherTableau tableau_by_name(std::string_view name) {
  if (name == "crk11") return crk11();
  if (name == "crk22") return crk22();
  if (name == "crk33") return crk33();
  if (name == "crk44") return crk44();
  throw ConfigError("unknown tableau '" + std::string(name) + "' (expected crk11|crk22|crk33|crk44)");
}

ButcherTableau default_tableau(int degree) {
  switch (degree) {
    case 0: return crk11();
    case 1: return crk22();
    case 2: return crk33();
    case 3: return crk44();
    default:
      throw ConfigError("no built-in tableau of order " + std::to_string(degree + 1) +
                        "; set scheme.tableau explicitly");
  }
}

}  // namespace crkfr
