#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "crkfr/basis.hpp"
#include "crkfr/field.hpp"

namespace crkfr {

/// Text dump of a nodal field. Rows are ordered by element, then node
/// (p fastest in 2-D); each row holds the node coordinates followed by the
/// conserved variables, printed with 17 significant digits.
struct FieldDump {
  std::string equation;
  int dim = 1;
  int degree = 0;
  PointSet points = PointSet::GL;
  int nx = 0, ny = 1;
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  double time = 0.0;
  std::vector<std::string> variables;
  std::vector<double> x;       // one per node
  std::vector<double> y;       // one per node, 2-D only
  std::vector<double> values;  // (element, node, variable)

  int num_vars() const { return static_cast<int>(variables.size()); }
  int nodes_per_element() const { return dim == 2 ? (degree + 1) * (degree + 1) : degree + 1; }
  int num_elements() const { return nx * ny; }
  std::size_t num_nodes() const { return x.size(); }
  double value(std::size_t node, int var) const { return values[node * variables.size() + var]; }

  /// Throws std::runtime_error when sizes or coordinates are inconsistent.
  void validate() const;
  bool operator==(const FieldDump&) const = default;
};

template <int M>
FieldDump make_dump(const SolutionField<M>& u, const std::string& equation,
                    const std::vector<std::string>& variables) {
  FieldDump d;
  d.equation = equation;
  d.dim = u.mesh.dim;
  d.degree = u.basis.degree;
  d.points = u.basis.kind;
  d.nx = u.mesh.nx;
  d.ny = u.mesh.ny;
  d.xmin = u.mesh.xmin;
  d.xmax = u.mesh.xmax;
  d.ymin = u.mesh.ymin;
  d.ymax = u.mesh.ymax;
  d.time = u.time;
  d.variables = variables;
  const int npe = u.nodes_per_element();
  const int n = u.n();
  d.x.reserve(u.values.size());
  if (d.dim == 2) d.y.reserve(u.values.size());
  d.values.reserve(u.values.size() * M);
  for (int e = 0; e < u.mesh.num_elements(); ++e) {
    for (int i = 0; i < npe; ++i) {
      const Point p = u.node(e, i % n, i / n);
      d.x.push_back(p.x);
      if (d.dim == 2) d.y.push_back(p.y);
      for (int k = 0; k < M; ++k) d.values.push_back(u.values[u.index(e, i % n, i / n)][k]);
    }
  }
  return d;
}

void write_field(std::ostream& out, const FieldDump& d);
void write_field(const std::string& path, const FieldDump& d);
/// Throws std::runtime_error on malformed input.
FieldDump read_field(std::istream& in);
FieldDump read_field(const std::string& path);

}  // namespace crkfr
