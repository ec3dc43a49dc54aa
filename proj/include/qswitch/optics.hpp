// Retarders, Faraday rotators and element trains with direction-aware
// Jones matrices.
//
//   Q(t) = R_y(2t) R_z(pi/2) R_y(-2t)
//   H(t) = R_y(2t) R_z(pi)   R_y(-2t)
//   F(t) = R_y(t),  F+- = F(+-pi/2)
//
// Waveplate orientation is measured from the vertical axis. Reversing the
// propagation direction maps a linear retarder at t to one at -t, and a
// Faraday rotator's circular retardance t to -t.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qswitch/rng.hpp"
#include "qswitch/su2.hpp"

namespace qswitch {

enum class ElementKind { QWP, HWP, Faraday };
enum class Direction { Forward, Backward };

class Element {
 public:
  /// Waveplate orientations are wrapped into (-pi/2, pi/2].
  Element(ElementKind kind, double angle);

  static Element qwp(double angle) { return {ElementKind::QWP, angle}; }
  static Element hwp(double angle) { return {ElementKind::HWP, angle}; }
  static Element faraday(double retardance) { return {ElementKind::Faraday, retardance}; }
  static Element faraday_plus();
  static Element faraday_minus();

  ElementKind kind() const { return kind_; }
  double angle() const { return angle_; }
  bool is_waveplate() const { return kind_ != ElementKind::Faraday; }

  bool operator==(const Element&) const = default;

 private:
  ElementKind kind_;
  double angle_;
};

/// Elements in the order a forward-travelling photon meets them.
using ElementSequence = std::vector<Element>;

Matrix2 jones(const Element& e);
Element reverse_element(const Element& e);

/// Forward: J(e_n)...J(e_1). Backward: J(rev e_1)...J(rev e_n).
Matrix2 sequence_matrix(std::span<const Element> seq, Direction dir);

enum class ReciprocityMode { Exact, UpToPhase };
bool is_reciprocal(std::span<const Element> seq, double tol, ReciprocityMode mode);

/// Train given as an operator product, leftmost factor acting last.
ElementSequence from_operator_order(std::span<const Element> product);

/// Copy of a train with every waveplate orientation perturbed by N(0, sigma).
ElementSequence jitter_waveplates(const ElementSequence& seq, double sigma, Rng& rng);

// Plain-text train format: whitespace-separated tokens `QWP:<deg>`,
// `HWP:<deg>`, `F:+`, `F:-` (or `F:<deg>`), in physical order.
ElementSequence parse_train(std::string_view text);
std::string format_train(std::span<const Element> seq);

}  // namespace qswitch
