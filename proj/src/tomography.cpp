#include "qswitch/tomography.hpp"

#include <algorithm>
#include <numeric>

namespace qswitch {

namespace {

constexpr std::array<Pauli, 3> kBases{Pauli::X, Pauli::Y, Pauli::Z};

}  // namespace

BasisCounts simulate_measurements(const Matrix2& rho, std::int64_t shots, Rng& rng,
                                  bool infinite_shots) {
  if (!infinite_shots && shots <= 0) throw InputError("simulate_measurements: shots must be positive");
  BasisCounts out;
  for (std::size_t b = 0; b < kBases.size(); ++b) {
    const double expectation = (pauli(kBases[b]) * rho).trace().real();
    const double p_up = std::clamp((1.0 + expectation) / 2.0, 0.0, 1.0);
    if (infinite_shots) {
      out.up[b] = p_up;
      out.shots[b] = 1.0;
    } else {
      std::binomial_distribution<std::int64_t> draw(shots, p_up);
      out.up[b] = static_cast<double>(draw(rng));
      out.shots[b] = static_cast<double>(shots);
    }
  }
  return out;
}

BasisCounts simulate_measurements(const Ket2& psi, std::int64_t shots, Rng& rng,
                                  bool infinite_shots) {
  return simulate_measurements(projector(psi.normalized()), shots, rng, infinite_shots);
}

Eigen::Vector3d empirical_expectations(const BasisCounts& counts) {
  Eigen::Vector3d r;
  for (std::size_t b = 0; b < 3; ++b) {
    if (counts.shots[b] <= 0) throw InputError("reconstruct_state: basis without shots");
    r(static_cast<Eigen::Index>(b)) = 2.0 * counts.up[b] / counts.shots[b] - 1.0;
  }
  return r;
}

Matrix2 reconstruct_state(const BasisCounts& counts) {
  const Eigen::Vector3d r = empirical_expectations(counts);
  const Matrix2 linear = (Matrix2::Identity() + r.x() * pauli(Pauli::X) +
                          r.y() * pauli(Pauli::Y) + r.z() * pauli(Pauli::Z)) /
                         2.0;
  Eigen::SelfAdjointEigenSolver<Matrix2> es(linear);
  Eigen::Vector2d ev = es.eigenvalues().cwiseMax(0.0);
  ev /= ev.sum();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

TomographyResult state_tomography(const Ket2& actual, const Ket2& expected, std::int64_t shots,
                                  Rng& rng, bool infinite_shots) {
  TomographyResult out;
  out.counts = simulate_measurements(actual, shots, rng, infinite_shots);
  out.rho = reconstruct_state(out.counts);
  out.fidelity = state_fidelity(out.rho, projector(expected.normalized()));
  return out;
}

const std::array<Ket2, 2>& probe_states() {
  static const std::array<Ket2, 2> probes{kets::H(), kets::plus()};
  return probes;
}

GadgetCharacterization characterize_gadget(const GadgetAngles& a, const Matrix2& target,
                                           const TomographySettings& settings, Rng& rng) {
  const ElementSequence train = reciprocal_gadget_sequence(a);
  // Each direction is set up separately, so motor repeatability enters twice.
  const Matrix2 fw = sequence_matrix(jitter_waveplates(train, settings.jitter_sigma, rng), Direction::Forward);
  const Matrix2 bw = sequence_matrix(jitter_waveplates(train, settings.jitter_sigma, rng), Direction::Backward);

  GadgetCharacterization out{0, 0, 0};
  for (const Ket2& psi : probe_states()) {
    const Matrix2 expected = projector(target * psi);
    const Matrix2 rho_fw = reconstruct_state(
        simulate_measurements(Ket2(fw * psi), settings.shots, rng, settings.infinite_shots));
    const Matrix2 rho_bw = reconstruct_state(
        simulate_measurements(Ket2(bw * psi), settings.shots, rng, settings.infinite_shots));
    out.fw_fidelity += state_fidelity(rho_fw, expected);
    out.bw_fidelity += state_fidelity(rho_bw, expected);
    out.reciprocity += state_fidelity(rho_fw, rho_bw);
  }
  const double n = static_cast<double>(probe_states().size());
  out.fw_fidelity /= n;
  out.bw_fidelity /= n;
  out.reciprocity /= n;
  return out;
}

double gate_fidelity(const GadgetAngles& a, Direction dir, const Matrix2& target,
                     const TomographySettings& settings, Rng& rng) {
  const Matrix2 m = sequence_matrix(
      jitter_waveplates(reciprocal_gadget_sequence(a), settings.jitter_sigma, rng), dir);
  double sum = 0;
  for (const Ket2& psi : probe_states()) {
    const Matrix2 rho =
        reconstruct_state(simulate_measurements(Ket2(m * psi), settings.shots, rng, settings.infinite_shots));
    sum += state_fidelity(rho, projector(target * psi));
  }
  return sum / static_cast<double>(probe_states().size());
}

double reciprocity(const GadgetAngles& a, const Matrix2& target, const TomographySettings& settings,
                   Rng& rng) {
  return characterize_gadget(a, target, settings, rng).reciprocity;
}

Matrix2 random_unitary(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector4d q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  // q0 1 - i (q1 X + q2 Y + q3 Z)
  Matrix2 u;
  u << Complex(q(0), -q(3)), Complex(-q(2), -q(1)), Complex(q(2), -q(1)), Complex(q(0), q(3));
  return u;
}

Ket2 random_state(Rng& rng) { return random_unitary(rng).col(0); }

SampleStats sample_stats(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1))};
}

}  // namespace qswitch
