#pragma once

#include <string_view>
#include <vector>

namespace crkfr {

enum class PointSet { GL, GLL };

std::string_view to_string(PointSet kind);
PointSet parse_point_set(std::string_view name);

inline constexpr int kMaxDegree = 7;

/// Nodal Lagrange basis on the reference element [0,1].
///
/// Correction functions are fixed by the point set (Radau for GL, g2 for GLL)
/// and only their derivatives at the solution points are stored, through
///   gR'(xi_p) = l_p(1) / w_p,   gL'(xi_p) = -l_p(0) / w_p.
struct NodalBasis {
  int degree = 0;
  PointSet kind = PointSet::GL;
  std::vector<double> points;
  std::vector<double> weights;
  std::vector<double> bary;          // barycentric weights of the nodes
  std::vector<double> diff;          // D(i,j) = l_j'(xi_i), row-major
  std::vector<double> l_at_0;
  std::vector<double> l_at_1;
  std::vector<double> gl_prime;
  std::vector<double> gr_prime;

  int size() const { return degree + 1; }
  double d(int i, int j) const { return diff[static_cast<std::size_t>(i * size() + j)]; }

  /// Values l_0(xi), ..., l_N(xi).
  std::vector<double> lagrange_at(double xi) const;
  /// Row-major (xs.size() x N+1) interpolation matrix onto arbitrary points.
  std::vector<double> interpolation_matrix(const std::vector<double>& xs) const;
  /// Row-major (N+1)x(N+1) map from nodal values to coefficients of the
  /// orthonormal Legendre basis on [0,1].
  std::vector<double> nodal_to_modal() const;
};

/// Builds nodes, weights and derived operators for 0 <= degree <= 7.
/// Throws std::invalid_argument for unsupported degrees or GLL with degree 0.
NodalBasis build_basis(int degree, PointSet kind);

struct CorrectionDerivatives {
  std::vector<double> gl_prime;
  std::vector<double> gr_prime;
};

CorrectionDerivatives correction_derivatives(const NodalBasis& basis);

}  // namespace crkfr
