#include "qswitch/su2.hpp"

#include <algorithm>
#include <numbers>

namespace qswitch {

namespace {

constexpr double kTraceTol = 1e-9;
constexpr double kPsdTol = 1e-9;

}  // namespace

Matrix2 checked_density(const Matrix2& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTraceTol)
    throw InputError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1)) > kTraceTol)
    throw InputError("density matrix does not have unit trace");
  const Matrix2 herm = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix2> es(herm);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw InputError("density matrix is not positive semidefinite");
  const Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double state_fidelity(const Matrix2& rho, const Matrix2& sigma) {
  const Matrix2 r = checked_density(rho);
  const Matrix2 s = checked_density(sigma);
  // Round-off leaves pure states with det ~ 1e-17; snap that to zero so the
  // square root below does not turn it into a 1e-9 error.
  auto det = [](const Matrix2& m) {
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Matrix2>(m, Eigen::EigenvaluesOnly).eigenvalues();
    return (ev(0) < 1e-13 ? 0.0 : ev(0)) * (ev(1) < 1e-13 ? 0.0 : ev(1));
  };
  // For qubits (tr sqrt(sqrt(r) s sqrt(r)))^2 = tr(r s) + 2 sqrt(det r det s),
  // which stays accurate for rank-deficient arguments.
  const double overlap = (r * s).trace().real();
  const double dets = det(r) * det(s);
  return std::clamp(overlap + 2.0 * std::sqrt(dets), 0.0, 1.0);
}

double state_fidelity(const Ket2& psi, const Ket2& phi) {
  if (std::abs(psi.norm() - 1.0) > kTraceTol || std::abs(phi.norm() - 1.0) > kTraceTol)
    throw InputError("state_fidelity: kets must be normalized");
  return std::clamp(std::norm(psi.dot(phi)), 0.0, 1.0);
}

Eigen::Vector3d bloch_expectations(const Matrix2& rho) {
  return {(pauli(Pauli::X) * rho).trace().real(), (pauli(Pauli::Y) * rho).trace().real(),
          (pauli(Pauli::Z) * rho).trace().real()};
}

double wrap_angle(double x, double period) {
  const double half = period / 2;
  double r = std::fmod(x + half, period);
  if (r <= 0) r += period;
  return r - half;
}

AxisAngle to_axis_angle(const Matrix2& u) {
  const Matrix2 s = su2_canonicalize(u);
  // s = cos(t/2) 1 - i sin(t/2) n.sigma
  const double c = s.trace().real() / 2;
  const Eigen::Vector3d v(-(pauli(Pauli::X) * s).trace().imag() / 2,
                          -(pauli(Pauli::Y) * s).trace().imag() / 2,
                          -(pauli(Pauli::Z) * s).trace().imag() / 2);
  const double sn = v.norm();
  if (sn < 1e-15) return {Eigen::Vector3d::UnitZ(), c > 0 ? 0.0 : 2 * std::numbers::pi};
  const double theta = 2 * std::atan2(sn, c);
  return {v / sn, wrap_angle(theta, 4 * std::numbers::pi)};
}

}  // namespace qswitch
