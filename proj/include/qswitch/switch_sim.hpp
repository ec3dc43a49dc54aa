// Quantum SWITCH on a path (control) and polarization (target) qubit.
//
// Ideal action with the control prepared in |+>:
//   (UV (x) |0><0| + VU (x) |1><1|) |psi>|+>
//     -> 1/2 {U,V}|psi> (x) |0> + 1/2 [U,V]|psi> (x) |1>
// after the second Hadamard, so the "+" (commute) port collects
// 1/4 ||{U,V} psi||^2 and the "-" (anticommute) port 1/4 ||[U,V] psi||^2.
//
// The Sagnac model: the photon enters the coupler through the input port,
// the clockwise path meets gadget U forwards then gadget V forwards, the
// counter-clockwise path meets V backwards then U backwards, and both return
// to the coupler. The commute port is the input port, where a circulator
// picks the photon off.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qswitch/gadget.hpp"
#include "qswitch/gate_set.hpp"
#include "qswitch/rng.hpp"

namespace qswitch {

enum PortIndex : int { kPlus = 0, kMinus = 1 };
enum PolIndex : int { kPolH = 0, kPolV = 1 };

using PortPolTable = std::array<std::array<double, 2>, 2>;

struct PortProbabilities {
  double commute;
  double anticommute;
};

/// Joint target (x) control vector, index 2*target + control.
Eigen::Vector4cd ideal_output(const Matrix2& u, const Matrix2& v, const Ket2& psi);
PortProbabilities port_probabilities(const Matrix2& u, const Matrix2& v, const Ket2& psi);

struct NoiseModel {
  double waveplate_angle_jitter_sigma = 0.0;  // rad, per waveplate, per run
  double tdc_splitting = 0.5;                 // power fraction coupled across
  double interferometric_visibility = 1.0;
  double circulator_loss_db_per_pass = 0.0;   // applied to the commute port only
  PortPolTable detector_efficiency{{{1.0, 1.0}, {1.0, 1.0}}};  // [port][pol]
  double mean_photon_rate = 1e4;              // photons/s entering the SWITCH
  double integration_time = 60.0;             // s
  std::uint64_t rng_seed = 0;
  bool infinite_statistics = false;           // expected counts, no Poisson draw

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  static NoiseModel ideal();
  /// Jitter 0.1 deg, balanced coupler, visibility 0.9995, 1 dB/pass, detector
  /// efficiencies {0.95, 0.90} / {0.90, 0.95}, 1e4 /s for 60 s.
  static NoiseModel calibrated();
};

NoiseModel parse_noise_model(const std::string& toml_text);
NoiseModel load_noise_model(const std::filesystem::path& path);
std::string to_toml(const NoiseModel& m);

struct SwitchSetting {
  int u_index = 0;
  int v_index = 0;
  Ket2 target_state = kets::H();
};

struct CountsRecord {
  int run = 0;
  int u_index = 0;
  int v_index = 0;
  PortPolTable counts{};  // [port][pol]; integral unless infinite statistics

  double port_total(int port) const { return counts[port][kPolH] + counts[port][kPolV]; }
  double total() const { return port_total(kPlus) + port_total(kMinus); }
};

/// Detection probabilities per [port][pol] before loss and efficiency, for
/// explicit gadget Jones matrices.
PortPolTable sagnac_probabilities(const Matrix2& u_fw, const Matrix2& u_bw, const Matrix2& v_fw,
                                  const Matrix2& v_bw, const Ket2& psi, double splitting,
                                  double visibility);

/// One recorded setting. The RNG stream is keyed on (seed, run, u, v).
CountsRecord simulate_counts(const SwitchSetting& setting, const NoiseModel& noise, int run = 0);

struct EfficiencyFit {
  double slope;        // n_plus = intercept + slope * n_minus
  double intercept;
  double eta_plus;     // relative, max(eta_plus, eta_minus) = 1
  double eta_minus;
};

struct CorrectedProbability {
  int run;
  int u_index;
  int v_index;
  double raw_commute;        // n+ / (n+ + n-)
  double corrected_commute;  // (n+/eta+) / (n+/eta+ + n-/eta-)
};

struct EfficiencyCorrection {
  EfficiencyFit fit;
  std::vector<CorrectedProbability> probabilities;
};

/// Photon-number conservation makes n+/eta+ + n-/eta- constant across
/// settings; a straight-line fit of n+ against n- gives eta+/eta- = -slope.
/// Throws FitError when fewer than two distinct commute fractions are present.
EfficiencyCorrection efficiency_correction(std::span<const CountsRecord> records);

}  // namespace qswitch
