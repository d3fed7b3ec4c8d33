#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace crkfr {

/// Fixed-size vector of conserved variables.
template <int M>
struct Vec {
  std::array<double, M> v{};

  static constexpr int size() { return M; }
  constexpr double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  constexpr const double& operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

  static constexpr Vec filled(double value) {
    Vec r;
    r.v.fill(value);
    return r;
  }

  constexpr Vec& operator+=(const Vec& o) {
    for (int i = 0; i < M; ++i) (*this)[i] += o[i];
    return *this;
  }
  constexpr Vec& operator-=(const Vec& o) {
    for (int i = 0; i < M; ++i) (*this)[i] -= o[i];
    return *this;
  }
  constexpr Vec& operator*=(double s) {
    for (int i = 0; i < M; ++i) (*this)[i] *= s;
    return *this;
  }
  friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
  friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
  friend constexpr Vec operator-(Vec a) { return a *= -1.0; }
  friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

/// y += a * x
template <int M>
constexpr void axpy(double a, const Vec<M>& x, Vec<M>& y) {
  for (int i = 0; i < M; ++i) y[i] += a * x[i];
}

template <int M>
bool all_finite(const Vec<M>& u) {
  for (int i = 0; i < M; ++i)
    if (!std::isfinite(u[i])) return false;
  return true;
}

template <int M>
double max_abs(const Vec<M>& u) {
  double m = 0.0;
  for (int i = 0; i < M; ++i) m = std::max(m, std::abs(u[i]));
  return m;
}

}  // namespace crkfr
