// Commute / anticommute discrimination over the ten-gate set, its causal
// witness, and the SWITCH process matrix.
#pragma once

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "qswitch/switch_sim.hpp"

namespace qswitch {

/// Best causally ordered strategies satisfy min p_s <= 0.841 and mean p_s
/// <= 0.904 (SDP-certified values, not recomputed here).
inline constexpr double kCausalBoundMin = 0.841;
inline constexpr double kCausalBoundMean = 0.904;

enum class PairClass { Commute, Anticommute, Neither };

std::string_view to_string(PairClass c);

inline constexpr double kClassifyTol = 1e-10;

PairClass classify(int i, int j);
PairClass classify(const Matrix2& u, const Matrix2& v, double tol = kClassifyTol);

using IndexPair = std::pair<int, int>;

struct PairSets {
  std::vector<IndexPair> commuting;
  std::vector<IndexPair> anticommuting;
  std::size_t size() const { return commuting.size() + anticommuting.size(); }
};

/// Both subsets in row-major (i, j) order.
PairSets enumerate_pairs();

/// The 52 task pairs in row-major order, commuting and anticommuting mixed.
std::vector<IndexPair> task_pairs();

using ProbabilitySource = std::function<PortProbabilities(int i, int j)>;

/// Port probabilities of the ideal SWITCH with the given target input.
ProbabilitySource ideal_source(Ket2 psi = kets::plus());

/// Definite-order single use: apply both gates in a fixed order and always
/// announce "commute". The output is ignored, so both orders score alike.
enum class FixedOrder { AThenB, BThenA };
ProbabilitySource fixed_order_source(FixedOrder order);

double success_probability(int i, int j, const ProbabilitySource& source);

struct PairScore {
  int i;
  int j;
  PairClass cls;
  double p_s;
};

struct TaskReport {
  std::vector<PairScore> scores;
  double min;
  double mean;
  bool beats_min_bound;   // min > 0.841
  bool beats_mean_bound;  // mean > 0.904
};

TaskReport task_report(const ProbabilitySource& source);
std::vector<PairScore> fixed_order_success(FixedOrder order);

// Process-matrix side. Spaces are ordered A_I (x) A_O (x) B_I (x) B_O (x) C,
// each a qubit, with A_I the most significant bit of the 32-dim index.

inline constexpr int kProcessDim = 32;

/// |U>> = (1 (x) U) sum_k |k>|k>, index 2*in + out.
Eigen::Vector4cd double_ket(const Matrix2& u);

/// |U>><<U| (x) |V>><<V| (x) |s><s|, s = + for sign > 0, - otherwise.
Eigen::MatrixXcd instrument_operator(const Matrix2& u, const Matrix2& v, int sign);

struct WitnessOperator {
  Eigen::MatrixXcd s;
  int terms;  // number of nonzero weights, N
};

WitnessOperator build_witness();

enum class CjConvention {
  // W is stored so that p = tr[(|U>><<U| (x) |V>><<V| (x) Pi_C) W] without
  // further transposes; equals the complex conjugate of the branch form.
  ConjugatedBranch,
};

struct ProcessMatrix {
  Eigen::MatrixXcd w;
  Ket2 target;
  CjConvention convention = CjConvention::ConjugatedBranch;
};

/// W of the SWITCH with target input psi and control |+>. Self-checks that
/// it reproduces the circuit probabilities on the gate set; throws
/// ConsistencyError otherwise.
ProcessMatrix build_switch_process_matrix(const Ket2& psi = kets::plus());

/// Causally ordered process: gates in the given order, control left in |+>.
ProcessMatrix build_fixed_order_process_matrix(FixedOrder order, const Ket2& psi = kets::plus());

double probability(const ProcessMatrix& w, const Matrix2& u, const Matrix2& v, int sign);
double witness_value(const WitnessOperator& s, const ProcessMatrix& w);

/// Largest |p_W - p_circuit| over all gate-set pairs and both outcomes.
double oracle_residual(const ProcessMatrix& w);

}  // namespace qswitch
