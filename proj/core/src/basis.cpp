#include "crkfr/basis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace crkfr {
namespace {

struct LegendreValue {
  double p;   // P_n(x)
  double dp;  // P_n'(x)
  double pm1; // P_{n-1}(x)
};

LegendreValue legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0, 0.0};
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  // P_n' from the three-term identity; valid in the interior and at +-1 via limit.
  double dp;
  if (std::abs(std::abs(x) - 1.0) < 1e-15) {
    dp = 0.5 * n * (n + 1.0) * std::pow(x, n + 1);
  } else {
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  }
  return {p1, dp, p0};
}

// Gauss-Legendre nodes/weights on [-1,1], ascending.
void gauss_legendre(int npts, std::vector<double>& x, std::vector<double>& w) {
  x.assign(npts, 0.0);
  w.assign(npts, 0.0);
  const int half = (npts + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double r = std::cos(std::numbers::pi * (4.0 * i + 3.0) / (4.0 * npts + 2.0));
    for (int it = 0; it < 100; ++it) {
      const auto lv = legendre(npts, r);
      const double delta = lv.p / lv.dp;
      r -= delta;
      if (std::abs(delta) <= 1e-15 * std::max(1.0, std::abs(r))) break;
    }
    const auto lv = legendre(npts, r);
    const double wi = 2.0 / ((1.0 - r * r) * lv.dp * lv.dp);
    // r is the i-th largest root
    x[npts - 1 - i] = r;
    x[i] = -r;
    w[npts - 1 - i] = wi;
    w[i] = wi;
  }
  if (npts % 2 == 1) x[npts / 2] = 0.0;
}

// Gauss-Legendre-Lobatto nodes/weights on [-1,1] with n+1 points, ascending.
void gauss_lobatto(int n, std::vector<double>& x, std::vector<double>& w) {
  const int npts = n + 1;
  x.assign(npts, 0.0);
  w.assign(npts, 0.0);
  x.front() = -1.0;
  x.back() = 1.0;
  const double wend = 2.0 / (n * (n + 1.0));
  w.front() = wend;
  w.back() = wend;
  const int half = (npts + 1) / 2;
  for (int i = 1; i < half; ++i) {
    // interior roots of P_n' are roots of q = P_{n+1} - P_{n-1}, q' = (2n+1) P_n
    double r = std::cos(std::numbers::pi * i / n);
    for (int it = 0; it < 100; ++it) {
      const auto ln1 = legendre(n + 1, r);
      const auto ln = legendre(n, r);
      const double q = ln1.p - ln.pm1;
      const double dq = (2.0 * n + 1.0) * ln.p;
      const double delta = q / dq;
      r -= delta;
      if (std::abs(delta) <= 1e-15 * std::max(1.0, std::abs(r))) break;
    }
    const double pn = legendre(n, r).p;
    const double wi = 2.0 / (n * (n + 1.0) * pn * pn);
    x[npts - 1 - i] = r;
    x[i] = -r;
    w[npts - 1 - i] = wi;
    w[i] = wi;
  }
  if (npts % 2 == 1) x[npts / 2] = 0.0;
}

}  // namespace

std::string_view to_string(PointSet kind) { return kind == PointSet::GL ? "gl" : "gll"; }

PointSet parse_point_set(std::string_view name) {
  if (name == "gl") return PointSet::GL;
  if (name == "gll") return PointSet::GLL;
  throw std::invalid_argument("unknown point set '" + std::string(name) + "' (expected gl|gll)");
}

NodalBasis build_basis(int degree, PointSet kind) {
  if (degree < 0 || degree > kMaxDegree)
    throw std::invalid_argument("unsupported degree " + std::to_string(degree) + " (supported 0.." +
                                std::to_string(kMaxDegree) + ")");
  if (kind == PointSet::GLL && degree == 0)
    throw std::invalid_argument("GLL points need degree >= 1");

  NodalBasis b;
  b.degree = degree;
  b.kind = kind;
  std::vector<double> x, w;
  if (kind == PointSet::GL)
    gauss_legendre(degree + 1, x, w);
  else
    gauss_lobatto(degree, x, w);

  const int n = degree + 1;
  b.points.resize(n);
  b.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    b.points[i] = 0.5 * (x[i] + 1.0);
    b.weights[i] = 0.5 * w[i];
  }
  if (kind == PointSet::GLL) {
    b.points.front() = 0.0;
    b.points.back() = 1.0;
  }

  b.bary.assign(n, 1.0);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (k != j) b.bary[j] /= (b.points[j] - b.points[k]);

  b.diff.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dij = (b.bary[j] / b.bary[i]) / (b.points[i] - b.points[j]);
      b.diff[static_cast<std::size_t>(i * n + j)] = dij;
      row += dij;
    }
    b.diff[static_cast<std::size_t>(i * n + i)] = -row;
  }

  b.l_at_0 = b.lagrange_at(0.0);
  b.l_at_1 = b.lagrange_at(1.0);
  const auto corr = correction_derivatives(b);
  b.gl_prime = corr.gl_prime;
  b.gr_prime = corr.gr_prime;
  return b;
}

std::vector<double> NodalBasis::lagrange_at(double xi) const {
  const int n = size();
  std::vector<double> l(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (xi == points[j]) {
      l[j] = 1.0;
      return l;
    }
  }
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != j) prod *= (xi - points[k]) / (points[j] - points[k]);
    l[j] = prod;
  }
  return l;
}

std::vector<double> NodalBasis::interpolation_matrix(const std::vector<double>& xs) const {
  const int n = size();
  std::vector<double> m(xs.size() * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto l = lagrange_at(xs[i]);
    for (int j = 0; j < n; ++j) m[i * n + j] = l[j];
  }
  return m;
}

std::vector<double> NodalBasis::nodal_to_modal() const {
  const int n = size();
  Eigen::MatrixXd v(n, n);
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      v(p, j) = std::sqrt(2.0 * j + 1.0) * legendre(j, 2.0 * points[p] - 1.0).p;
  const Eigen::MatrixXd inv = v.partialPivLu().inverse();
  std::vector<double> out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = inv(i, j);
  return out;
}

CorrectionDerivatives correction_derivatives(const NodalBasis& basis) {
  const int n = basis.size();
  const auto l0 = basis.l_at_0.empty() ? basis.lagrange_at(0.0) : basis.l_at_0;
  const auto l1 = basis.l_at_1.empty() ? basis.lagrange_at(1.0) : basis.l_at_1;
  CorrectionDerivatives c;
  c.gl_prime.resize(n);
  c.gr_prime.resize(n);
  for (int p = 0; p < n; ++p) {
    c.gr_prime[p] = l1[p] / basis.weights[p];
    c.gl_prime[p] = -l0[p] / basis.weights[p];
  }
  return c;
}

}  // namespace crkfr
