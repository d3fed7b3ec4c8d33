#pragma once

#include <stdexcept>

namespace crkfr {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform Cartesian mesh. One-dimensional meshes use ny = 1.
struct Mesh {
  int dim = 1;
  int nx = 1;
  int ny = 1;
  double xmin = 0.0, xmax = 1.0;
  double ymin = 0.0, ymax = 1.0;

  static Mesh line(int nx, double xmin, double xmax) {
    if (nx < 1) throw std::invalid_argument("mesh needs at least one element");
    if (!(xmax > xmin)) throw std::invalid_argument("mesh bounds must satisfy xmin < xmax");
    return Mesh{1, nx, 1, xmin, xmax, 0.0, 1.0};
  }
  static Mesh rect(int nx, int ny, double xmin, double xmax, double ymin, double ymax) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("mesh needs at least one element per direction");
    if (!(xmax > xmin) || !(ymax > ymin)) throw std::invalid_argument("mesh bounds must be increasing");
    return Mesh{2, nx, ny, xmin, xmax, ymin, ymax};
  }

  int num_elements() const { return nx * ny; }
  double dx() const { return (xmax - xmin) / nx; }
  double dy() const { return dim == 2 ? (ymax - ymin) / ny : 1.0; }
  int element(int ix, int iy) const { return ix + nx * iy; }
  double x_left(int ix) const { return xmin + ix * dx(); }
  double y_bottom(int iy) const { return dim == 2 ? ymin + iy * dy() : 0.0; }
  double cell_volume() const { return dx() * (dim == 2 ? dy() : 1.0); }
};

}  // namespace crkfr
