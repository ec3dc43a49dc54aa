#include "qswitch/gadget.hpp"

#include <array>
#include <numbers>

namespace qswitch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVerifyTol = 1e-10;

// atan2 that returns 0 when the point sits at the pole.
double pole_safe_atan2(double y, double x) {
  if (std::abs(y) < 1e-12 && std::abs(x) < 1e-12) return 0.0;
  return std::atan2(y, x);
}

double expectation(Pauli p, const Ket2& psi) {
  return (psi.adjoint() * pauli(p) * psi)(0).real();
}

GadgetAngles angles_for_branch(const Complex eigenvalue, const Ket2& eigenvector) {
  const Ket2 v = eigenvector.normalized();
  const double lambda = -2.0 * std::arg(eigenvalue);

  // gamma, delta rotate |v+> onto the x axis of the Bloch sphere.
  const double gamma = pole_safe_atan2(expectation(Pauli::Z, v), expectation(Pauli::X, v));
  const Ket2 vg = rotation(Axis::Y, gamma) * v;
  const double delta = -pole_safe_atan2(expectation(Pauli::Y, vg), expectation(Pauli::X, vg));
  const double psi = wrap_angle(lambda - kPi, 4 * kPi);

  // (Q(theta) H(phi))^-1 = R_x(-pi/2) R_z(-delta) R_y(-gamma)
  const Matrix2 inverse_pair =
      rotation(Axis::X, -kPi / 2) * rotation(Axis::Z, -delta) * rotation(Axis::Y, -gamma);

  const Ket2 l_prime = inverse_pair * kets::L();
  const double theta_p =
      0.5 * pole_safe_atan2(expectation(Pauli::X, l_prime), expectation(Pauli::Z, l_prime)) +
      kPi / 4;
  const Ket2 h_prime = jones(Element::qwp(theta_p)) * inverse_pair * kets::H();
  const double phi_p =
      0.25 * pole_safe_atan2(expectation(Pauli::X, h_prime), expectation(Pauli::Z, h_prime));

  // H(a) Q(b) = Q(2a - b) H(a) turns H(phi')Q(theta') into Q(theta)H(phi).
  const double phi = phi_p;
  const double theta = 2 * phi - theta_p;
  const double alpha = psi / 4 + kPi / 2;

  GadgetAngles out = reduce_angles(theta, phi, alpha);
  out.psi = psi;
  out.gamma = gamma;
  out.delta = delta;
  out.lambda = lambda;
  return out;
}

bool reconstructs(const GadgetReport& r) {
  return r.fw_fidelity >= 1 - kVerifyTol && r.bw_fidelity >= 1 - kVerifyTol;
}

}  // namespace

ElementSequence gx_sequence(double theta) {
  const std::array product{Element::hwp(kPi / 8),
                           Element::faraday_minus(),
                           Element::qwp(kPi / 2),
                           Element::hwp((theta + 2 * kPi) / 4),
                           Element::qwp(kPi / 2),
                           Element::faraday_plus(),
                           Element::hwp(kPi / 8)};
  return from_operator_order(product);
}

ElementSequence full_gadget_sequence(const GadgetAngles& a) {
  const std::array product{Element::qwp(a.theta),
                           Element::hwp(a.phi),
                           Element::hwp(kPi / 8),
                           Element::faraday_minus(),
                           Element::qwp(kPi / 2),
                           Element::hwp(a.alpha),
                           Element::qwp(kPi / 2),
                           Element::faraday_plus(),
                           Element::hwp(kPi / 8),
                           Element::hwp(-a.phi),
                           Element::qwp(-a.theta)};
  return from_operator_order(product);
}

ElementSequence reciprocal_gadget_sequence(const GadgetAngles& a) {
  const std::array product{Element::qwp(a.theta1),
                           Element::hwp(a.phi1),
                           Element::faraday_minus(),
                           Element::qwp(kPi / 2),
                           Element::hwp(a.alpha),
                           Element::qwp(kPi / 2),
                           Element::faraday_plus(),
                           Element::hwp(a.phi2),
                           Element::qwp(a.theta2)};
  return from_operator_order(product);
}

GadgetAngles reduce_angles(double theta, double phi, double alpha) {
  GadgetAngles a;
  a.theta = wrap_angle(theta, kPi);
  a.phi = wrap_angle(phi, kPi);
  a.alpha = wrap_angle(alpha, kPi);
  // Q(a)H(b)H(c) = Q(a + pi/2) H(a - b + c - pi/2), H(a)H(b)Q(c) = H(a - b + c - pi/2) Q(c + pi/2)
  a.theta1 = a.theta + kPi / 2;
  a.phi1 = a.theta - a.phi + kPi / 8 - kPi / 2;
  a.theta2 = -a.theta + kPi / 2;
  a.phi2 = kPi / 8 + a.phi - a.theta - kPi / 2;
  return a;
}

GadgetReport verify_gadget(const GadgetAngles& a, const Matrix2& u) {
  if (!is_unitary(u, 1e-9)) throw InputError("verify_gadget: target is not unitary");
  const auto seq = reciprocal_gadget_sequence(a);
  const Matrix2 fw = sequence_matrix(seq, Direction::Forward);
  const Matrix2 bw = sequence_matrix(seq, Direction::Backward);
  return {unitary_fidelity(fw, u), unitary_fidelity(bw, u), unitary_fidelity(fw, bw)};
}

GadgetAngles synthesize(const Matrix2& u) {
  const Matrix2 target = su2_canonicalize(u);
  const Matrix2 v = rotation(Axis::X, kPi) * target;
  Eigen::ComplexEigenSolver<Matrix2> es(v);
  if (es.info() != Eigen::Success) throw ConsistencyError("synthesize: eigendecomposition failed");

  for (Eigen::Index branch = 0; branch < 2; ++branch) {
    GadgetAngles a = angles_for_branch(es.eigenvalues()(branch), es.eigenvectors().col(branch));
    if (reconstructs(verify_gadget(a, target))) return a;
  }
  throw ConsistencyError("synthesize: no eigenbranch reconstructs the target");
}

}  // namespace qswitch
