#include <doctest.h>

#include <random>

#include "qswitch/optics.hpp"
#include "test_util.hpp"

using namespace qswitch;
using oracle::pi;
using testing::max_diff;

namespace {

const Complex i1(0, 1);

ElementSequence random_retarder_train(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<int> kind(0, 1);
  std::uniform_real_distribution<double> ang(-pi, pi);
  ElementSequence out;
  const int n = len(rng);
  for (int k = 0; k < n; ++k)
    out.push_back(kind(rng) == 0 ? Element::qwp(ang(rng)) : Element::hwp(ang(rng)));
  return out;
}

}  // namespace

TEST_CASE("jones matches the oracle construction") {
  for (double t = -3.0; t <= 3.0; t += 0.3) {
    CHECK(max_diff(jones(Element::qwp(t)), oracle::Q(t)) < 1e-12);
    CHECK(max_diff(jones(Element::hwp(t)), oracle::H(t)) < 1e-12);
    CHECK(max_diff(jones(Element::faraday(t)), oracle::F(t)) < 1e-12);
  }
}

TEST_CASE("gadget identities H(+-pi/8) F- = F+ H(+-pi/8)") {
  const Matrix2 fm = jones(Element::faraday_minus());
  const Matrix2 fp = jones(Element::faraday_plus());
  const Matrix2 hp = jones(Element::hwp(pi / 8));
  const Matrix2 hm = jones(Element::hwp(-pi / 8));
  const Matrix2 mix = -i1 * pauli(Pauli::X);
  const Matrix2 miz = -i1 * pauli(Pauli::Z);
  CHECK(max_diff(Matrix2(hp * fm), mix) < 1e-12);
  CHECK(max_diff(Matrix2(fp * hp), mix) < 1e-12);
  CHECK(max_diff(Matrix2(hm * fm), miz) < 1e-12);
  CHECK(max_diff(Matrix2(fp * hm), miz) < 1e-12);
}

TEST_CASE("waveplates are pi periodic and QWP^2 = HWP") {
  for (double t = -2.0; t <= 2.0; t += 0.1) {
    CHECK(oracle::max_abs_diff(oracle::Q(t + pi), oracle::Q(t)) < 1e-12);
    CHECK(max_diff(jones(Element::qwp(t + pi)), jones(Element::qwp(t))) < 1e-12);
    CHECK(max_diff(jones(Element::hwp(t + pi)), jones(Element::hwp(t))) < 1e-12);
    const Matrix2 q = jones(Element::qwp(t));
    CHECK(max_diff(Matrix2(q * q), jones(Element::hwp(t))) < 1e-12);
  }
}

TEST_CASE("orientation is wrapped on construction") {
  CHECK(Element::qwp(pi).angle() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(Element::hwp(3 * pi / 4).angle() == doctest::Approx(-pi / 4));
  CHECK(Element::hwp(pi / 2).angle() == doctest::Approx(pi / 2));
  CHECK(Element::hwp(-pi / 2).angle() == doctest::Approx(pi / 2));
  CHECK(Element::faraday(3.0).angle() == 3.0);
  CHECK_THROWS_AS(Element::qwp(NAN), InputError);
}

TEST_CASE("reverse_element") {
  CHECK(reverse_element(Element::hwp(pi / 8)) == Element::hwp(-pi / 8));
  CHECK(reverse_element(Element::faraday_plus()) == Element::faraday_minus());
  CHECK(reverse_element(Element::qwp(0)) == Element::qwp(0));
}

TEST_CASE("sequence_matrix ordering") {
  const ElementSequence seq{Element::qwp(0.2), Element::hwp(0.7), Element::faraday_plus()};
  const oracle::M fw = oracle::mul(oracle::F(pi / 2), oracle::mul(oracle::H(0.7), oracle::Q(0.2)));
  const oracle::M bw = oracle::mul(oracle::Q(-0.2), oracle::mul(oracle::H(-0.7), oracle::F(-pi / 2)));
  CHECK(max_diff(sequence_matrix(seq, Direction::Forward), fw) < 1e-12);
  CHECK(max_diff(sequence_matrix(seq, Direction::Backward), bw) < 1e-12);
  CHECK_THROWS_AS(sequence_matrix(ElementSequence{}, Direction::Forward), InputError);
}

TEST_CASE("single HWP transforms as Z U^T Z") {
  for (double t = -1.5; t <= 1.5; t += 0.25) {
    const ElementSequence seq{Element::hwp(t)};
    const Matrix2 fw = sequence_matrix(seq, Direction::Forward);
    const Matrix2 z = pauli(Pauli::Z);
    CHECK(max_diff(sequence_matrix(seq, Direction::Backward), Matrix2(z * fw.transpose() * z)) < 1e-12);
  }
}

TEST_CASE("transpose rule on random retarder trains") {
  std::mt19937_64 rng(2024);
  const Matrix2 z = pauli(Pauli::Z);
  double worst = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto seq = random_retarder_train(rng);
    const Matrix2 fw = sequence_matrix(seq, Direction::Forward);
    const Matrix2 bw = sequence_matrix(seq, Direction::Backward);
    worst = std::max(worst, max_diff(bw, Matrix2(z * fw.transpose() * z)));
    CHECK(is_unitary(fw, 1e-12));
    CHECK(is_unitary(bw, 1e-12));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("Faraday rotators break the transpose rule") {
  const Matrix2 z = pauli(Pauli::Z);
  for (double t = -3.0; t <= 3.0; t += 0.5) {
    if (std::abs(t) < 1e-9) continue;
    const ElementSequence seq{Element::faraday(t)};
    const Matrix2 bw = sequence_matrix(seq, Direction::Backward);
    CHECK(max_diff(bw, rotation(Axis::Y, -t)) < 1e-14);
    const Matrix2 rule = z * rotation(Axis::Y, t).transpose() * z;
    CHECK(max_diff(bw, rule) > 1e-3);
  }
}

TEST_CASE("is_reciprocal") {
  // Z Q(pi/4)^T Z compared with Q(pi/4) directly.
  const oracle::M q = oracle::Q(pi / 4);
  const oracle::M zqz = oracle::mul(oracle::Z, oracle::mul(oracle::transpose(q), oracle::Z));
  const bool expected = oracle::max_abs_diff(zqz, q) <= 1e-12;
  CHECK(is_reciprocal(ElementSequence{Element::qwp(pi / 4)}, 1e-12, ReciprocityMode::Exact) == expected);
  CHECK_FALSE(expected);
  CHECK(is_reciprocal(ElementSequence{Element::hwp(0)}, 1e-12, ReciprocityMode::UpToPhase));
  CHECK(is_reciprocal(ElementSequence{Element::hwp(0)}, 1e-12, ReciprocityMode::Exact));
  CHECK_FALSE(is_reciprocal(ElementSequence{Element::faraday_plus()}, 1e-6, ReciprocityMode::UpToPhase));
}

TEST_CASE("train text format") {
  const auto seq = parse_train("QWP:45 HWP:-22.5 F:+ F:- hwp:10");
  REQUIRE(seq.size() == 5);
  CHECK(seq[0] == Element::qwp(pi / 4));
  CHECK(seq[1].kind() == ElementKind::HWP);
  CHECK(seq[1].angle() == doctest::Approx(-pi / 8));
  CHECK(seq[2] == Element::faraday_plus());
  CHECK(seq[3] == Element::faraday_minus());
  CHECK(format_train(seq) == "QWP:45.000000 HWP:-22.500000 F:+ F:- HWP:10.000000");
  const auto again = parse_train(format_train(seq));
  for (std::size_t k = 0; k < seq.size(); ++k) {
    CHECK(again[k].kind() == seq[k].kind());
    CHECK(again[k].angle() == doctest::Approx(seq[k].angle()).epsilon(1e-9));
  }
  CHECK_THROWS_AS(parse_train(""), InputError);
  CHECK_THROWS_AS(parse_train("QWP45"), InputError);
  CHECK_THROWS_AS(parse_train("XWP:4"), InputError);
  CHECK_THROWS_AS(parse_train("QWP:abc"), InputError);
}
