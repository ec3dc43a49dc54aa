#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "qswitch/discrimination.hpp"
#include "test_util.hpp"

using namespace qswitch;
using oracle::pi;

namespace {

// Appendix index lists, transcribed.
std::set<IndexPair> listed_commuting() {
  std::set<IndexPair> out;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      if (i == 0 || j == 0 || i == j) out.emplace(i, j);
  return out;
}

std::set<IndexPair> listed_anticommuting() {
  const std::vector<std::pair<int, std::vector<int>>> rows{
      {1, {2, 3, 8, 9}}, {2, {1, 3, 6, 7}}, {3, {1, 2, 4, 5}}, {4, {3, 5}}, {5, {3, 4}},
      {6, {2, 7}},       {7, {2, 6}},       {8, {1, 9}},       {9, {1, 8}}};
  std::set<IndexPair> out;
  for (const auto& [i, js] : rows)
    for (int j : js) out.emplace(i, j);
  return out;
}

Matrix2 random_u2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix2cd a;
  a << Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
  return Eigen::HouseholderQR<Eigen::Matrix2cd>(a).householderQ();
}

}  // namespace

TEST_CASE("gate set elements are Hermitian involutions") {
  for (int k = 0; k < kGateCount; ++k) {
    const Matrix2 g = gate(k);
    CHECK(testing::max_diff(g, Matrix2(g.adjoint())) < 1e-12);
    CHECK(testing::max_diff(Matrix2(g * g), Matrix2::Identity()) < 1e-12);
  }
  CHECK_THROWS_AS(gate(-1), InputError);
  CHECK_THROWS_AS(gate(10), InputError);
}

TEST_CASE("classify examples") {
  for (int k = 0; k < kGateCount; ++k) {
    CHECK(classify(0, k) == PairClass::Commute);
    CHECK(classify(k, 0) == PairClass::Commute);
  }
  CHECK(classify(1, 2) == PairClass::Anticommute);
  CHECK(classify(4, 6) == PairClass::Neither);
  CHECK(to_string(PairClass::Anticommute) == "anticommute");
  CHECK_THROWS_AS(classify(0, 11), InputError);
}

TEST_CASE("classify against brute-force products") {
  for (int i = 0; i < kGateCount; ++i) {
    for (int j = 0; j < kGateCount; ++j) {
      const oracle::M u{gate(i)(0, 0), gate(i)(0, 1), gate(i)(1, 0), gate(i)(1, 1)};
      const oracle::M v{gate(j)(0, 0), gate(j)(0, 1), gate(j)(1, 0), gate(j)(1, 1)};
      const double c = oracle::op_norm(oracle::sub(oracle::mul(u, v), oracle::mul(v, u)));
      const double a = oracle::op_norm(oracle::add(oracle::mul(u, v), oracle::mul(v, u)));
      const PairClass expected = c < 1e-10 ? PairClass::Commute
                                 : a < 1e-10 ? PairClass::Anticommute
                                             : PairClass::Neither;
      CHECK(classify(i, j) == expected);
    }
  }
}

TEST_CASE("enumerated sets equal the listed sets") {
  const PairSets sets = enumerate_pairs();
  CHECK(sets.commuting.size() == 28);
  CHECK(sets.anticommuting.size() == 24);
  CHECK(sets.size() == 52);
  CHECK(std::set<IndexPair>(sets.commuting.begin(), sets.commuting.end()) == listed_commuting());
  CHECK(std::set<IndexPair>(sets.anticommuting.begin(), sets.anticommuting.end()) == listed_anticommuting());
  CHECK(std::is_sorted(sets.commuting.begin(), sets.commuting.end()));
  const auto pairs = task_pairs();
  CHECK(pairs.size() == 52);
  CHECK(std::is_sorted(pairs.begin(), pairs.end()));
  CHECK(std::count(pairs.begin(), pairs.end(), IndexPair{8, 9}) == 1);
}

TEST_CASE("classification and success are invariant under global phases") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ph(-pi, pi);
  for (int n = 0; n < 20; ++n) {
    const Complex a = std::polar(1.0, ph(rng)), b = std::polar(1.0, ph(rng));
    for (int i = 0; i < kGateCount; ++i)
      for (int j = 0; j < kGateCount; ++j)
        CHECK(classify(Matrix2(a * gate(i)), Matrix2(b * gate(j))) == classify(i, j));
    const ProbabilitySource phased = [&](int i, int j) {
      return port_probabilities(Matrix2(a * gate(i)), Matrix2(b * gate(j)), kets::plus());
    };
    for (const auto& [i, j] : task_pairs())
      CHECK(success_probability(i, j, phased) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ideal task report") {
  const TaskReport r = task_report(ideal_source());
  REQUIRE(r.scores.size() == 52);
  for (const auto& s : r.scores) CHECK(std::abs(s.p_s - 1.0) < 1e-9);
  CHECK(r.min > kCausalBoundMin);
  CHECK(r.mean > kCausalBoundMean);
  CHECK(r.beats_min_bound);
  CHECK(r.beats_mean_bound);
  CHECK_THROWS_AS(success_probability(4, 6, ideal_source()), InputError);
}

TEST_CASE("fixed-order strategies stay inside the causal bounds") {
  for (auto order : {FixedOrder::AThenB, FixedOrder::BThenA}) {
    const auto scores = fixed_order_success(order);
    REQUIRE(scores.size() == 52);
    double sum = 0, lo = 1;
    for (const auto& s : scores) {
      CHECK(s.p_s == (s.cls == PairClass::Commute ? 1.0 : 0.0));
      sum += s.p_s;
      lo = std::min(lo, s.p_s);
    }
    CHECK(std::abs(sum / 52 - 28.0 / 52.0) < 1e-12);
    CHECK(lo == 0.0);
    const TaskReport r = task_report(fixed_order_source(order));
    CHECK(r.mean <= kCausalBoundMean);
    CHECK(r.min <= kCausalBoundMin);
    CHECK_FALSE(r.beats_mean_bound);
  }
  const auto a = fixed_order_success(FixedOrder::AThenB);
  const auto b = fixed_order_success(FixedOrder::BThenA);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].p_s == b[k].p_s);
}

TEST_CASE("double ket and witness structure") {
  const Eigen::Vector4cd id = double_ket(Matrix2::Identity());
  CHECK(std::abs(id(0) - 1.0) < 1e-15);
  CHECK(std::abs(id(3) - 1.0) < 1e-15);
  CHECK(std::abs(id(1)) + std::abs(id(2)) < 1e-15);
  for (int k = 0; k < kGateCount; ++k) {
    const Eigen::Vector4cd u = double_ket(gate(k));
    CHECK(std::abs((u * u.adjoint()).trace() - 2.0) < 1e-12);
  }

  const WitnessOperator s = build_witness();
  CHECK(s.terms == 52);
  CHECK(s.s.rows() == kProcessDim);
  CHECK((s.s - s.s.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  // Each term has trace 2 * 2 * 1, so tr S = 4.
  CHECK(std::abs(s.s.trace() - 4.0) < 1e-12);

  const Eigen::MatrixXcd op = instrument_operator(gate(1), gate(2), -1);
  CHECK(op.rows() == kProcessDim);
  CHECK(std::abs(op.trace() - 4.0) < 1e-12);
  CHECK(((op * op) - 4.0 * op).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("SWITCH process matrix") {
  const ProcessMatrix w = build_switch_process_matrix();
  CHECK(w.convention == CjConvention::ConjugatedBranch);
  CHECK((w.w - w.w.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(w.w.trace() - 4.0) < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w.w);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);

  const double value = witness_value(build_witness(), w);
  CHECK(std::abs(value - 1.0) < 1e-9);
  const TaskReport ideal = task_report(ideal_source());
  CHECK(std::abs(value - ideal.mean) < 1e-9);
  CHECK(oracle_residual(w) < 1e-9);
}

TEST_CASE("process matrix reproduces the circuit on random pairs and targets") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (const Ket2& psi : {kets::plus(), kets::H(), Ket2(Ket2(Complex(0.3, 0.1), Complex(-0.5, 0.8)).normalized())}) {
    const ProcessMatrix w = build_switch_process_matrix(psi);
    double worst = 0;
    for (int n = 0; n < 100; ++n) {
      const Matrix2 u = random_u2(rng), v = random_u2(rng);
      const auto p = port_probabilities(u, v, psi);
      worst = std::max(worst, std::abs(probability(w, u, v, +1) - p.commute));
      worst = std::max(worst, std::abs(probability(w, u, v, -1) - p.anticommute));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("fixed-order process matrices") {
  const WitnessOperator s = build_witness();
  for (auto order : {FixedOrder::AThenB, FixedOrder::BThenA}) {
    const ProcessMatrix w = build_fixed_order_process_matrix(order);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w.w);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    const double value = witness_value(s, w);
    CHECK(std::abs(value - 28.0 / 52.0) < 1e-12);
    CHECK(value <= kCausalBoundMean);
    // Control stays in |+>: probabilities always land in the commute outcome.
    std::mt19937_64 rng(9);
    for (int n = 0; n < 10; ++n) {
      const Matrix2 u = random_u2(rng), v = random_u2(rng);
      CHECK(std::abs(probability(w, u, v, +1) - 1.0) < 1e-12);
      CHECK(std::abs(probability(w, u, v, -1)) < 1e-12);
    }
  }
}
