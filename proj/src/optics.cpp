#include "qswitch/optics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qswitch {

namespace {

constexpr double kPi = std::numbers::pi;

double to_rad(double deg) { return deg * kPi / 180.0; }
double to_deg(double rad) { return rad * 180.0 / kPi; }

double parse_number(std::string_view s, std::string_view token) {
  double v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw InputError("bad angle in train token '" + std::string(token) + "'");
  return v;
}

}  // namespace

Element::Element(ElementKind kind, double angle) : kind_(kind), angle_(angle) {
  if (!std::isfinite(angle)) throw InputError("element angle must be finite");
  if (kind_ != ElementKind::Faraday) angle_ = wrap_angle(angle_, kPi);
}

Element Element::faraday_plus() { return faraday(kPi / 2); }
Element Element::faraday_minus() { return faraday(-kPi / 2); }

Matrix2 jones(const Element& e) {
  switch (e.kind()) {
    case ElementKind::QWP:
      return rotation(Axis::Y, 2 * e.angle()) * rotation(Axis::Z, kPi / 2) *
             rotation(Axis::Y, -2 * e.angle());
    case ElementKind::HWP:
      return rotation(Axis::Y, 2 * e.angle()) * rotation(Axis::Z, kPi) *
             rotation(Axis::Y, -2 * e.angle());
    case ElementKind::Faraday:
      break;
  }
  return rotation(Axis::Y, e.angle());
}

Element reverse_element(const Element& e) { return {e.kind(), -e.angle()}; }

Matrix2 sequence_matrix(std::span<const Element> seq, Direction dir) {
  if (seq.empty()) throw InputError("sequence_matrix: empty element sequence");
  Matrix2 m = Matrix2::Identity();
  if (dir == Direction::Forward) {
    for (const auto& e : seq) m = jones(e) * m;
  } else {
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) m = jones(reverse_element(*it)) * m;
  }
  return m;
}

bool is_reciprocal(std::span<const Element> seq, double tol, ReciprocityMode mode) {
  const Matrix2 fw = sequence_matrix(seq, Direction::Forward);
  const Matrix2 bw = sequence_matrix(seq, Direction::Backward);
  if (mode == ReciprocityMode::Exact) return (fw - bw).cwiseAbs().maxCoeff() <= tol;
  return phase_equal(fw, bw, tol);
}

ElementSequence from_operator_order(std::span<const Element> product) {
  return {product.rbegin(), product.rend()};
}

ElementSequence jitter_waveplates(const ElementSequence& seq, double sigma, Rng& rng) {
  ElementSequence out;
  out.reserve(seq.size());
  std::normal_distribution<double> noise(0.0, sigma);
  for (const auto& e : seq) {
    if (e.is_waveplate() && sigma > 0) out.emplace_back(e.kind(), e.angle() + noise(rng));
    else out.push_back(e);
  }
  return out;
}

ElementSequence parse_train(std::string_view text) {
  ElementSequence out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw InputError("train token without ':': '" + token + "'");
    std::string kind = token.substr(0, colon);
    std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    const std::string_view value = std::string_view(token).substr(colon + 1);
    if (kind == "QWP") {
      out.push_back(Element::qwp(to_rad(parse_number(value, token))));
    } else if (kind == "HWP") {
      out.push_back(Element::hwp(to_rad(parse_number(value, token))));
    } else if (kind == "F") {
      if (value == "+") out.push_back(Element::faraday_plus());
      else if (value == "-") out.push_back(Element::faraday_minus());
      else out.push_back(Element::faraday(to_rad(parse_number(value, token))));
    } else {
      throw InputError("unknown element kind in token '" + token + "'");
    }
  }
  if (out.empty()) throw InputError("empty element train");
  return out;
}

std::string format_train(std::span<const Element> seq) {
  std::string out;
  char buf[64];
  for (const auto& e : seq) {
    if (!out.empty()) out += ' ';
    switch (e.kind()) {
      case ElementKind::QWP:
        std::snprintf(buf, sizeof buf, "QWP:%.6f", to_deg(e.angle()));
        break;
      case ElementKind::HWP:
        std::snprintf(buf, sizeof buf, "HWP:%.6f", to_deg(e.angle()));
        break;
      case ElementKind::Faraday:
        if (e.angle() == kPi / 2) std::snprintf(buf, sizeof buf, "F:+");
        else if (e.angle() == -kPi / 2) std::snprintf(buf, sizeof buf, "F:-");
        else std::snprintf(buf, sizeof buf, "F:%.6f", to_deg(e.angle()));
        break;
    }
    out += buf;
  }
  return out;
}

}  // namespace qswitch
