#pragma once

#include <array>

#include "qswitch/su2.hpp"

namespace qswitch {

inline constexpr int kGateCount = 10;

/// 1, X, Y, Z, (X+Y)/sqrt2, (X-Y)/sqrt2, (X+Z)/sqrt2, (X-Z)/sqrt2,
/// (Y+Z)/sqrt2, (Y-Z)/sqrt2, indexed 0..9.
const std::array<Matrix2, kGateCount>& gate_set();

/// Throws InputError for indices outside 0..9.
const Matrix2& gate(int index);

const char* gate_name(int index);

}  // namespace qswitch
