#include "qswitch/gate_set.hpp"

#include <string>

namespace qswitch {

const std::array<Matrix2, kGateCount>& gate_set() {
  static const std::array<Matrix2, kGateCount> gates = [] {
    const Matrix2 x = pauli(Pauli::X);
    const Matrix2 y = pauli(Pauli::Y);
    const Matrix2 z = pauli(Pauli::Z);
    const double s = 1.0 / std::sqrt(2.0);
    return std::array<Matrix2, kGateCount>{
        Matrix2::Identity(), x, y, z, s * (x + y), s * (x - y), s * (x + z), s * (x - z),
        s * (y + z), s * (y - z)};
  }();
  return gates;
}

const Matrix2& gate(int index) {
  if (index < 0 || index >= kGateCount)
    throw InputError("gate index out of range 0..9: " + std::to_string(index));
  return gate_set()[static_cast<std::size_t>(index)];
}

const char* gate_name(int index) {
  static constexpr std::array<const char*, kGateCount> names{
      "1", "X", "Y", "Z", "(X+Y)/sqrt2", "(X-Y)/sqrt2", "(X+Z)/sqrt2", "(X-Z)/sqrt2",
      "(Y+Z)/sqrt2", "(Y-Z)/sqrt2"};
  if (index < 0 || index >= kGateCount) return "?";
  return names[static_cast<std::size_t>(index)];
}

}  // namespace qswitch
