#pragma once

#include <cstddef>
#include <vector>

#include "crkfr/basis.hpp"
#include "crkfr/geometry.hpp"
#include "crkfr/vec.hpp"

namespace crkfr {

/// Nodal solution u_h: values indexed by (element, node p [, node q], variable).
/// In 2-D the node index is p + (N+1) * q with p along x.
template <int M>
struct SolutionField {
  using State = Vec<M>;

  Mesh mesh;
  NodalBasis basis;
  std::vector<State> values;
  double time = 0.0;

  SolutionField() = default;
  SolutionField(Mesh m, NodalBasis b) : mesh(m), basis(std::move(b)) {
    values.assign(static_cast<std::size_t>(mesh.num_elements() * nodes_per_element()), State{});
  }

  int n() const { return basis.size(); }
  int nodes_per_element() const { return mesh.dim == 2 ? n() * n() : n(); }
  std::size_t index(int e, int p, int q = 0) const {
    return static_cast<std::size_t>(e) * nodes_per_element() + p + n() * q;
  }
  State& at(int e, int p, int q = 0) { return values[index(e, p, q)]; }
  const State& at(int e, int p, int q = 0) const { return values[index(e, p, q)]; }
  State* element(int e) { return values.data() + static_cast<std::size_t>(e) * nodes_per_element(); }
  const State* element(int e) const {
    return values.data() + static_cast<std::size_t>(e) * nodes_per_element();
  }

  Point node(int e, int p, int q = 0) const {
    const int ix = e % mesh.nx, iy = e / mesh.nx;
    Point pt{mesh.x_left(ix) + basis.points[p] * mesh.dx(), 0.0};
    if (mesh.dim == 2) pt.y = mesh.y_bottom(iy) + basis.points[q] * mesh.dy();
    return pt;
  }

  /// Element mean by the quadrature of the solution points.
  State mean(int e) const {
    State m{};
    const State* u = element(e);
    if (mesh.dim == 1) {
      for (int p = 0; p < n(); ++p) axpy(basis.weights[p], u[p], m);
    } else {
      for (int q = 0; q < n(); ++q)
        for (int p = 0; p < n(); ++p) axpy(basis.weights[p] * basis.weights[q], u[p + n() * q], m);
    }
    return m;
  }

  /// Sum over elements of mean * element volume.
  State total() const {
    State t{};
    for (int e = 0; e < mesh.num_elements(); ++e) axpy(mesh.cell_volume(), mean(e), t);
    return t;
  }
};

}  // namespace crkfr
