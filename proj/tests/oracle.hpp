// Test-only reference arithmetic on plain arrays. Deliberately shares no
// code with the library so expected values are computed along a separate path.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using C = std::complex<double>;
using M = std::array<C, 4>;  // row-major a, b; c, d
using K = std::array<C, 2>;

inline constexpr double pi = std::numbers::pi;

inline M mul(const M& x, const M& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}
inline K apply(const M& x, const K& v) { return {x[0] * v[0] + x[1] * v[1], x[2] * v[0] + x[3] * v[1]}; }
inline M add(const M& x, const M& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]}; }
inline M sub(const M& x, const M& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]}; }
inline M scale(C s, const M& x) { return {s * x[0], s * x[1], s * x[2], s * x[3]}; }
inline M adj(const M& x) { return {std::conj(x[0]), std::conj(x[2]), std::conj(x[1]), std::conj(x[3])}; }
inline M transpose(const M& x) { return {x[0], x[2], x[1], x[3]}; }
inline C trace(const M& x) { return x[0] + x[3]; }
inline double norm2(const K& v) { return std::norm(v[0]) + std::norm(v[1]); }

inline const M I{1, 0, 0, 1};
inline const M X{0, 1, 1, 0};
inline const M Y{0, C(0, -1), C(0, 1), 0};
inline const M Z{1, 0, 0, -1};

/// exp(-i t sigma / 2) evaluated from the power series, not the closed form.
inline M expm_rotation(const M& sigma, double t) {
  const M a = scale(C(0, -t / 2), sigma);
  M term = I;
  M sum = I;
  for (int n = 1; n < 60; ++n) {
    term = scale(1.0 / n, mul(term, a));
    sum = add(sum, term);
  }
  return sum;
}

inline M Ry(double t) { return expm_rotation(Y, t); }
inline M Rz(double t) { return expm_rotation(Z, t); }
inline M Rx(double t) { return expm_rotation(X, t); }
inline M Q(double t) { return mul(mul(Ry(2 * t), Rz(pi / 2)), Ry(-2 * t)); }
inline M H(double t) { return mul(mul(Ry(2 * t), Rz(pi)), Ry(-2 * t)); }
inline M F(double t) { return Ry(t); }

inline double max_abs_diff(const M& x, const M& y) {
  double m = 0;
  for (int k = 0; k < 4; ++k) m = std::max(m, std::abs(x[k] - y[k]));
  return m;
}

/// Largest singular value of a 2x2 matrix from the eigenvalues of A^dagger A.
inline double op_norm(const M& x) {
  const M g = mul(adj(x), x);
  const double tr = trace(g).real();
  const double det = (g[0] * g[3] - g[1] * g[2]).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
  return std::sqrt(tr / 2 + disc);
}

}  // namespace oracle
