// Reciprocal polarization gadgets.
//
// G_x(t) = H(pi/8) F- Q(pi/2) H((t + 2pi)/4) Q(pi/2) F+ H(pi/8)
// implements R_x(t) in both propagation directions. Wrapping it in a
// palindromic QWP/HWP pair,
//
//   G_R = Q(theta) H(phi) G_x(psi) H(-phi) Q(-theta),
//
// gives a gadget that is reciprocal and universal for SU(2). Merging the
// outer waveplates with G_x's H(pi/8) plates removes two elements:
//
//   G_R = Q(theta1) H(phi1) F- Q(pi/2) H(alpha) Q(pi/2) F+ H(phi2) Q(theta2).
//
// All products above are operator products (rightmost factor acts first).
#pragma once

#include "qswitch/optics.hpp"

namespace qswitch {

struct GadgetAngles {
  // Outer QWP/HWP pair and middle HWP of G_x, orientations in (-pi/2, pi/2].
  double theta = 0;
  double phi = 0;
  double alpha = 0;

  // Reduced nine-element form, derived from (theta, phi); not wrapped.
  double theta1 = 0;
  double phi1 = 0;
  double theta2 = 0;
  double phi2 = 0;

  // Synthesis intermediates (zero unless produced by synthesize).
  double psi = 0;
  double gamma = 0;
  double delta = 0;
  double lambda = 0;
};

/// Seven-element train of G_x(theta), physical order.
ElementSequence gx_sequence(double theta);

/// Eleven-element train Q(theta) H(phi) G_x H(-phi) Q(-theta) with the
/// middle half-wave plate at alpha.
ElementSequence full_gadget_sequence(const GadgetAngles& a);

/// Reduced nine-element train, physical order.
ElementSequence reciprocal_gadget_sequence(const GadgetAngles& a);

/// Fills theta1, phi1, theta2, phi2 from theta and phi.
GadgetAngles reduce_angles(double theta, double phi, double alpha);

/// Waveplate angles whose gadget equals u up to global phase in both
/// directions. Non-SU(2) unitaries are lifted first.
GadgetAngles synthesize(const Matrix2& u);

struct GadgetReport {
  double fw_fidelity;
  double bw_fidelity;
  double reciprocity_fidelity;
};

GadgetReport verify_gadget(const GadgetAngles& a, const Matrix2& u);

}  // namespace qswitch
