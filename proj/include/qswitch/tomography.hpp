// Simulated single-qubit state tomography and the two-probe-state gadget
// characterization: gate fidelity against the target and fidelity between
// the two propagation directions, each averaged over |H> and |+>.
#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "qswitch/gadget.hpp"
#include "qswitch/rng.hpp"

namespace qswitch {

/// Outcome counts for projective X, Y, Z measurements, in that order.
struct BasisCounts {
  std::array<double, 3> up{};     // +1 outcomes
  std::array<double, 3> shots{};  // trials per basis
};

/// Binomial sampling of each basis; infinite_shots returns exact expected
/// fractions with shots = 1.
BasisCounts simulate_measurements(const Matrix2& rho, std::int64_t shots, Rng& rng,
                                  bool infinite_shots = false);
BasisCounts simulate_measurements(const Ket2& psi, std::int64_t shots, Rng& rng,
                                  bool infinite_shots = false);

Eigen::Vector3d empirical_expectations(const BasisCounts& counts);

/// Linear inversion (1 + xX + yY + zZ)/2, eigenvalues clipped at 0 and
/// renormalized.
Matrix2 reconstruct_state(const BasisCounts& counts);

struct TomographyResult {
  Matrix2 rho;
  BasisCounts counts;
  double fidelity;
};

TomographyResult state_tomography(const Ket2& actual, const Ket2& expected, std::int64_t shots,
                                  Rng& rng, bool infinite_shots = false);

struct TomographySettings {
  double jitter_sigma = 0.0;  // rad, per waveplate, drawn anew per direction
  std::int64_t shots = 10000;
  bool infinite_shots = false;
};

/// Probe states |H>, |+>.
const std::array<Ket2, 2>& probe_states();

double gate_fidelity(const GadgetAngles& a, Direction dir, const Matrix2& target,
                     const TomographySettings& settings, Rng& rng);
double reciprocity(const GadgetAngles& a, const Matrix2& target, const TomographySettings& settings,
                   Rng& rng);

struct GadgetCharacterization {
  double fw_fidelity;
  double bw_fidelity;
  double reciprocity;
};

/// Both directions implemented independently and measured once; the same
/// reconstructions feed the gate fidelities and the reciprocity.
GadgetCharacterization characterize_gadget(const GadgetAngles& a, const Matrix2& target,
                                           const TomographySettings& settings, Rng& rng);

/// Haar-random SU(2) element (uniform unit quaternion).
Matrix2 random_unitary(Rng& rng);
Ket2 random_state(Rng& rng);

struct SampleStats {
  double mean;
  double stddev;  // sample standard deviation (n - 1)
};

SampleStats sample_stats(std::span<const double> xs);

}  // namespace qswitch
