#pragma once

#include <functional>
#include <string>

#include "crkfr/geometry.hpp"
#include "crkfr/scheme.hpp"

namespace crkfr {

/// Everything the solver needs to know about one test case.
template <class Eq>
struct ProblemSetup {
  using State = typename Eq::State;

  std::string id;
  Eq eq{};
  Mesh mesh{};
  double final_time = 0.0;
  BoundarySpec boundary{};
  std::function<State(const Point&)> initial;
  std::function<State(const Point&, double)> exact;  // empty when unknown
  /// Inflow data g(x, t) on side s (0 x-left, 1 x-right, 2 y-bottom, 3 y-top).
  std::function<State(int, const Point&, double)> boundary_state;
  /// Per-point kind for sides declared BoundaryKind::Problem.
  std::function<BoundaryKind(int, const Point&)> boundary_kind;
};

}  // namespace crkfr
