// Complex 2x2 algebra for polarization qubits.
//
// Basis: |H> = (1,0), |V> = (0,1), |+> = (1,1)/sqrt2, |L> = (1,i)/sqrt2.
// Stokes parameters map as (S1, S2, S3) <-> (X, Y, Z).
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>

#include "qswitch/errors.hpp"

namespace qswitch {

template <typename Scalar>
using Matrix2T = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Ket2T = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

using Matrix2 = Matrix2T<double>;
using Ket2 = Ket2T<double>;
using Complex = std::complex<double>;

enum class Axis { X, Y, Z };
enum class Pauli { I, X, Y, Z };

/// Unit rotation axis n and angle theta for exp(-i theta/2 n.sigma).
struct AxisAngle {
  Eigen::Vector3d axis;
  double angle;
};

template <typename Scalar = double>
Matrix2T<Scalar> pauli(Pauli k) {
  using C = std::complex<Scalar>;
  const C i1(0, 1);
  Matrix2T<Scalar> m;
  switch (k) {
    case Pauli::I: m << C(1), C(0), C(0), C(1); break;
    case Pauli::X: m << C(0), C(1), C(1), C(0); break;
    case Pauli::Y: m << C(0), -i1, i1, C(0); break;
    case Pauli::Z: m << C(1), C(0), C(0), C(-1); break;
  }
  return m;
}

template <typename Scalar = double>
Matrix2T<Scalar> pauli(Axis k) {
  switch (k) {
    case Axis::X: return pauli<Scalar>(Pauli::X);
    case Axis::Y: return pauli<Scalar>(Pauli::Y);
    case Axis::Z: break;
  }
  return pauli<Scalar>(Pauli::Z);
}

/// R_k(theta) = exp(-i theta sigma_k / 2) = cos(theta/2) 1 - i sin(theta/2) sigma_k.
template <typename Scalar = double>
Matrix2T<Scalar> rotation(Axis k, Scalar theta) {
  if (!std::isfinite(theta)) throw InputError("rotation: angle must be finite");
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(theta / 2);
  const Scalar s = std::sin(theta / 2);
  return c * Matrix2T<Scalar>::Identity() - C(0, s) * pauli<Scalar>(k);
}

template <typename Scalar = double>
Matrix2T<Scalar> rotation(const AxisAngle& r) {
  if (!std::isfinite(r.angle)) throw InputError("rotation: angle must be finite");
  using C = std::complex<Scalar>;
  const Eigen::Vector3d n = r.axis.normalized();
  const Matrix2T<Scalar> ns = Scalar(n.x()) * pauli<Scalar>(Pauli::X) +
                              Scalar(n.y()) * pauli<Scalar>(Pauli::Y) +
                              Scalar(n.z()) * pauli<Scalar>(Pauli::Z);
  return Scalar(std::cos(r.angle / 2)) * Matrix2T<Scalar>::Identity() -
         C(0, std::sin(r.angle / 2)) * ns;
}

template <typename Derived, typename Other>
auto commutator(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Other>& b) {
  return (a * b - b * a).eval();
}

template <typename Derived, typename Other>
auto anticommutator(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Other>& b) {
  return (a * b + b * a).eval();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = 1e-12) {
  using Plain = typename Derived::PlainObject;
  const Plain prod = m.adjoint() * m;
  return (prod - Plain::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(m);
  return static_cast<double>(svd.singularValues()(0));
}

/// |tr(A^dagger B)|^2 / 4, the phase-insensitive overlap of two 2x2 unitaries.
template <typename Scalar>
Scalar unitary_fidelity(const Matrix2T<Scalar>& a, const Matrix2T<Scalar>& b) {
  return std::norm((a.adjoint() * b).trace() / Scalar(2));
}

/// Equality up to a global phase: |tr(A^dagger B)|/2 >= 1 - tol.
template <typename Scalar>
bool phase_equal(const Matrix2T<Scalar>& a, const Matrix2T<Scalar>& b, Scalar tol) {
  // Unitarity only needs to hold well enough for the overlap to be meaningful.
  if (!is_unitary(a, 1e-9) || !is_unitary(b, 1e-9))
    throw InputError("phase_equal: arguments must be unitary");
  return std::abs((a.adjoint() * b).trace()) / Scalar(2) >= Scalar(1) - tol;
}

/// Lift a unitary into SU(2). The two square roots of det are told apart by
/// requiring the first entry with |z| > 1e-12 (row-major) to have argument in
/// [-pi/2, pi/2).
template <typename Scalar>
Matrix2T<Scalar> su2_canonicalize(const Matrix2T<Scalar>& u) {
  if (!is_unitary(u, 1e-9)) throw InputError("su2_canonicalize: matrix is not unitary");
  Matrix2T<Scalar> out = u / std::sqrt(u.determinant());
  for (Eigen::Index r = 0; r < 2; ++r) {
    for (Eigen::Index c = 0; c < 2; ++c) {
      const auto z = out(r, c);
      if (std::abs(z) <= Scalar(1e-12)) continue;
      const Scalar arg = std::arg(z);
      const Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
      if (!(arg >= -half_pi && arg < half_pi)) out = -out;
      return out;
    }
  }
  return out;
}

// Named polarization states.
namespace kets {
inline Ket2 H() { return Ket2(1, 0); }
inline Ket2 V() { return Ket2(0, 1); }
inline Ket2 plus() { return Ket2(1, 1) / std::sqrt(2.0); }
inline Ket2 minus() { return Ket2(1, -1) / std::sqrt(2.0); }
inline Ket2 L() { return Ket2(Complex(1, 0), Complex(0, 1)) / std::sqrt(2.0); }
inline Ket2 R() { return Ket2(Complex(1, 0), Complex(0, -1)) / std::sqrt(2.0); }
}  // namespace kets

inline Matrix2 projector(const Ket2& psi) { return psi * psi.adjoint(); }

/// Validates a density matrix (Hermitian, unit trace within 1e-9, eigenvalues
/// >= -1e-9) and returns it with negative eigenvalues clipped to zero.
Matrix2 checked_density(const Matrix2& rho);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double state_fidelity(const Matrix2& rho, const Matrix2& sigma);
double state_fidelity(const Ket2& psi, const Ket2& phi);

/// (tr[X rho], tr[Y rho], tr[Z rho]).
Eigen::Vector3d bloch_expectations(const Matrix2& rho);

/// Axis-angle form of an SU(2) element, angle in (-2pi, 2pi].
AxisAngle to_axis_angle(const Matrix2& u);

/// Wraps into (-period/2, period/2].
double wrap_angle(double x, double period);

}  // namespace qswitch
