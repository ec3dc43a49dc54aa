#include "qswitch/discrimination.hpp"

#include <algorithm>
#include <numeric>

namespace qswitch {

namespace {

constexpr double kProcessSelfTestTol = 1e-9;

// Index into A_I A_O B_I B_O C.
int process_index(int ai, int ao, int bi, int bo, int c) {
  return (((ai * 2 + ao) * 2 + bi) * 2 + bo) * 2 + c;
}

Eigen::Vector2cd control_ket(int sign) {
  const double s = 1.0 / std::sqrt(2.0);
  return sign > 0 ? Eigen::Vector2cd(s, s) : Eigen::Vector2cd(s, -s);
}

// Pure branch vectors with the target future F traced out: W = sum_f w_f w_f^dagger.
// Control 0 carries V-then-U (output UV psi), control 1 carries U-then-V.
std::array<Eigen::VectorXcd, 2> branch_vectors(const Ket2& psi, double amp_b_first,
                                               double amp_a_first, const Eigen::Vector2cd& control_b_first,
                                               const Eigen::Vector2cd& control_a_first) {
  std::array<Eigen::VectorXcd, 2> out{Eigen::VectorXcd::Zero(kProcessDim),
                                      Eigen::VectorXcd::Zero(kProcessDim)};
  for (int f = 0; f < 2; ++f) {
    for (int ai = 0; ai < 2; ++ai)
      for (int ao = 0; ao < 2; ++ao)
        for (int bi = 0; bi < 2; ++bi)
          for (int bo = 0; bo < 2; ++bo)
            for (int c = 0; c < 2; ++c) {
              Complex amp = 0;
              if (bo == ai && ao == f) amp += amp_b_first * psi(bi) * control_b_first(c);
              if (ao == bi && bo == f) amp += amp_a_first * psi(ai) * control_a_first(c);
              out[f](process_index(ai, ao, bi, bo, c)) += amp;
            }
  }
  return out;
}

ProcessMatrix from_branches(const std::array<Eigen::VectorXcd, 2>& w, const Ket2& psi) {
  Eigen::MatrixXcd m = w[0] * w[0].adjoint() + w[1] * w[1].adjoint();
  return {m.conjugate(), psi, CjConvention::ConjugatedBranch};
}

}  // namespace

std::string_view to_string(PairClass c) {
  switch (c) {
    case PairClass::Commute: return "commute";
    case PairClass::Anticommute: return "anticommute";
    case PairClass::Neither: break;
  }
  return "neither";
}

PairClass classify(const Matrix2& u, const Matrix2& v, double tol) {
  if (operator_norm(commutator(u, v)) < tol) return PairClass::Commute;
  if (operator_norm(anticommutator(u, v)) < tol) return PairClass::Anticommute;
  return PairClass::Neither;
}

PairClass classify(int i, int j) { return classify(gate(i), gate(j)); }

PairSets enumerate_pairs() {
  PairSets sets;
  for (int i = 0; i < kGateCount; ++i) {
    for (int j = 0; j < kGateCount; ++j) {
      switch (classify(i, j)) {
        case PairClass::Commute: sets.commuting.emplace_back(i, j); break;
        case PairClass::Anticommute: sets.anticommuting.emplace_back(i, j); break;
        case PairClass::Neither: break;
      }
    }
  }
  return sets;
}

std::vector<IndexPair> task_pairs() {
  std::vector<IndexPair> out;
  for (int i = 0; i < kGateCount; ++i)
    for (int j = 0; j < kGateCount; ++j)
      if (classify(i, j) != PairClass::Neither) out.emplace_back(i, j);
  return out;
}

ProbabilitySource ideal_source(Ket2 psi) {
  return [psi](int i, int j) { return port_probabilities(gate(i), gate(j), psi); };
}

ProbabilitySource fixed_order_source(FixedOrder) {
  return [](int, int) { return PortProbabilities{1.0, 0.0}; };
}

double success_probability(int i, int j, const ProbabilitySource& source) {
  const PairClass cls = classify(i, j);
  if (cls == PairClass::Neither)
    throw InputError("success_probability: pair (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") neither commutes nor anticommutes");
  const PortProbabilities p = source(i, j);
  return cls == PairClass::Commute ? p.commute : p.anticommute;
}

TaskReport task_report(const ProbabilitySource& source) {
  TaskReport r;
  for (const auto& [i, j] : task_pairs())
    r.scores.push_back({i, j, classify(i, j), success_probability(i, j, source)});
  r.min = std::min_element(r.scores.begin(), r.scores.end(),
                           [](const auto& a, const auto& b) { return a.p_s < b.p_s; })
              ->p_s;
  r.mean = std::accumulate(r.scores.begin(), r.scores.end(), 0.0,
                           [](double acc, const auto& s) { return acc + s.p_s; }) /
           static_cast<double>(r.scores.size());
  r.beats_min_bound = r.min > kCausalBoundMin;
  r.beats_mean_bound = r.mean > kCausalBoundMean;
  return r;
}

std::vector<PairScore> fixed_order_success(FixedOrder order) {
  return task_report(fixed_order_source(order)).scores;
}

Eigen::Vector4cd double_ket(const Matrix2& u) {
  Eigen::Vector4cd out;
  for (int in = 0; in < 2; ++in)
    for (int o = 0; o < 2; ++o) out(2 * in + o) = u(o, in);
  return out;
}

Eigen::MatrixXcd instrument_operator(const Matrix2& u, const Matrix2& v, int sign) {
  const Eigen::Vector4cd a = double_ket(u);
  const Eigen::Vector4cd b = double_ket(v);
  const Eigen::Vector2cd c = control_ket(sign);
  Eigen::VectorXcd k(kProcessDim);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 2; ++z) k((x * 4 + y) * 2 + z) = a(x) * b(y) * c(z);
  return k * k.adjoint();
}

WitnessOperator build_witness() {
  WitnessOperator out{Eigen::MatrixXcd::Zero(kProcessDim, kProcessDim), 0};
  for (int i = 0; i < kGateCount; ++i) {
    for (int j = 0; j < kGateCount; ++j) {
      const PairClass cls = classify(i, j);
      if (cls == PairClass::Neither) continue;
      out.s += instrument_operator(gate(i), gate(j), cls == PairClass::Commute ? +1 : -1);
      ++out.terms;
    }
  }
  out.s /= static_cast<double>(out.terms);
  return out;
}

double probability(const ProcessMatrix& w, const Matrix2& u, const Matrix2& v, int sign) {
  return (instrument_operator(u, v, sign) * w.w).trace().real();
}

double witness_value(const WitnessOperator& s, const ProcessMatrix& w) {
  return (s.s * w.w).trace().real();
}

double oracle_residual(const ProcessMatrix& w) {
  double worst = 0;
  for (int i = 0; i < kGateCount; ++i) {
    for (int j = 0; j < kGateCount; ++j) {
      const PortProbabilities p = port_probabilities(gate(i), gate(j), w.target);
      worst = std::max(worst, std::abs(probability(w, gate(i), gate(j), +1) - p.commute));
      worst = std::max(worst, std::abs(probability(w, gate(i), gate(j), -1) - p.anticommute));
    }
  }
  return worst;
}

ProcessMatrix build_switch_process_matrix(const Ket2& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw InputError("process matrix: target must be normalized");
  const double h = 1.0 / std::sqrt(2.0);
  ProcessMatrix w = from_branches(
      branch_vectors(psi, h, h, Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)), psi);
  if (oracle_residual(w) > kProcessSelfTestTol)
    throw ConsistencyError("SWITCH process matrix does not reproduce circuit probabilities");
  return w;
}

ProcessMatrix build_fixed_order_process_matrix(FixedOrder order, const Ket2& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw InputError("process matrix: target must be normalized");
  const Eigen::Vector2cd plus = control_ket(+1);
  const Eigen::Vector2cd none = Eigen::Vector2cd::Zero();
  // BThenA: V acts first.
  const bool b_first = order == FixedOrder::BThenA;
  return from_branches(branch_vectors(psi, b_first ? 1.0 : 0.0, b_first ? 0.0 : 1.0,
                                      b_first ? plus : none, b_first ? none : plus),
                       psi);
}

}  // namespace qswitch
