#include "qswitch/switch_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <fstream>
#include <sstream>

#include <toml.hpp>

namespace qswitch {

namespace {

bool in_unit_interval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

Eigen::Vector4cd ideal_output(const Matrix2& u, const Matrix2& v, const Ket2& psi) {
  const Ket2 sym = 0.5 * anticommutator(u, v) * psi;
  const Ket2 asym = 0.5 * commutator(u, v) * psi;
  Eigen::Vector4cd out;
  out << sym(0), asym(0), sym(1), asym(1);
  return out;
}

PortProbabilities port_probabilities(const Matrix2& u, const Matrix2& v, const Ket2& psi) {
  const Eigen::Vector4cd out = ideal_output(u, v, psi);
  const double p0 = std::norm(out(0)) + std::norm(out(2));
  const double p1 = std::norm(out(1)) + std::norm(out(3));
  return {p0, p1};
}

void NoiseModel::validate() const {
  if (!std::isfinite(waveplate_angle_jitter_sigma) || waveplate_angle_jitter_sigma < 0)
    throw ConfigError("waveplate_angle_jitter_sigma must be a nonnegative number");
  if (!in_unit_interval(tdc_splitting)) throw ConfigError("tdc_splitting must lie in [0, 1]");
  if (!in_unit_interval(interferometric_visibility))
    throw ConfigError("interferometric_visibility must lie in [0, 1]");
  if (!std::isfinite(circulator_loss_db_per_pass) || circulator_loss_db_per_pass < 0)
    throw ConfigError("circulator_loss_db_per_pass must be nonnegative");
  for (const auto& port : detector_efficiency)
    for (const double eta : port)
      if (!in_unit_interval(eta)) throw ConfigError("detector_efficiency entries must lie in [0, 1]");
  if (!std::isfinite(mean_photon_rate) || mean_photon_rate < 0)
    throw ConfigError("mean_photon_rate must be nonnegative");
  if (!std::isfinite(integration_time) || integration_time < 0)
    throw ConfigError("integration_time must be nonnegative");
}

NoiseModel NoiseModel::ideal() { return NoiseModel{}; }

NoiseModel NoiseModel::calibrated() {
  NoiseModel m;
  m.waveplate_angle_jitter_sigma = 0.1 * std::numbers::pi / 180.0;
  m.tdc_splitting = 0.5;
  m.interferometric_visibility = 0.9995;
  m.circulator_loss_db_per_pass = 1.0;
  m.detector_efficiency = {{{0.95, 0.90}, {0.90, 0.95}}};
  m.mean_photon_rate = 1e4;
  m.integration_time = 60.0;
  return m;
}

NoiseModel parse_noise_model(const std::string& toml_text) {
  toml::table tbl;
  try {
    tbl = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    throw ConfigError(std::string("noise model: ") + std::string(e.description()));
  }

  NoiseModel m;
  auto read_real = [&](const char* key, double& field) {
    const auto node = tbl[key];
    if (!node) return;
    const auto v = node.value<double>();
    if (!v) throw ConfigError(std::string("noise model: '") + key + "' must be a number");
    field = *v;
  };
  read_real("waveplate_angle_jitter_sigma", m.waveplate_angle_jitter_sigma);
  read_real("tdc_splitting", m.tdc_splitting);
  read_real("interferometric_visibility", m.interferometric_visibility);
  read_real("circulator_loss_db_per_pass", m.circulator_loss_db_per_pass);
  read_real("mean_photon_rate", m.mean_photon_rate);
  read_real("integration_time", m.integration_time);

  if (const auto node = tbl["rng_seed"]) {
    const auto v = node.value<std::int64_t>();
    if (!v || *v < 0) throw ConfigError("noise model: 'rng_seed' must be a nonnegative integer");
    m.rng_seed = static_cast<std::uint64_t>(*v);
  }
  if (const auto node = tbl["infinite_statistics"]) {
    const auto v = node.value<bool>();
    if (!v) throw ConfigError("noise model: 'infinite_statistics' must be a boolean");
    m.infinite_statistics = *v;
  }
  if (const auto node = tbl["detector_efficiency"]) {
    const auto* rows = node.as_array();
    if (!rows || rows->size() != 2)
      throw ConfigError("noise model: 'detector_efficiency' must be [[plus_H, plus_V], [minus_H, minus_V]]");
    for (std::size_t port = 0; port < 2; ++port) {
      const auto* row = (*rows)[port].as_array();
      if (!row || row->size() != 2)
        throw ConfigError("noise model: 'detector_efficiency' rows must have two entries");
      for (std::size_t pol = 0; pol < 2; ++pol) {
        const auto v = (*row)[pol].value<double>();
        if (!v) throw ConfigError("noise model: 'detector_efficiency' entries must be numbers");
        m.detector_efficiency[port][pol] = *v;
      }
    }
  }

  for (const auto& [key, _] : tbl) {
    static constexpr std::array known{"waveplate_angle_jitter_sigma", "tdc_splitting",
                                      "interferometric_visibility", "circulator_loss_db_per_pass",
                                      "detector_efficiency", "mean_photon_rate",
                                      "integration_time", "rng_seed", "infinite_statistics"};
    if (std::find(known.begin(), known.end(), key.str()) == known.end())
      throw ConfigError("noise model: unknown key '" + std::string(key.str()) + "'");
  }

  m.validate();
  return m;
}

NoiseModel load_noise_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open noise model '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_noise_model(ss.str());
}

std::string to_toml(const NoiseModel& m) {
  // Shortest representation that parses back to the same double.
  auto num = [](double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    std::string s(buf.data(), res.ptr);
    if (s.find_first_of(".en") == std::string::npos) s += ".0";
    return s;
  };
  const auto& eta = m.detector_efficiency;
  std::ostringstream out;
  out << "waveplate_angle_jitter_sigma = " << num(m.waveplate_angle_jitter_sigma) << "\n"
      << "tdc_splitting = " << num(m.tdc_splitting) << "\n"
      << "interferometric_visibility = " << num(m.interferometric_visibility) << "\n"
      << "circulator_loss_db_per_pass = " << num(m.circulator_loss_db_per_pass) << "\n"
      << "detector_efficiency = [[" << num(eta[0][0]) << ", " << num(eta[0][1]) << "], [" << num(eta[1][0])
      << ", " << num(eta[1][1]) << "]]\n"
      << "mean_photon_rate = " << num(m.mean_photon_rate) << "\n"
      << "integration_time = " << num(m.integration_time) << "\n"
      << "rng_seed = " << m.rng_seed << "\n"
      << "infinite_statistics = " << (m.infinite_statistics ? "true" : "false") << "\n";
  return out.str();
}

PortPolTable sagnac_probabilities(const Matrix2& u_fw, const Matrix2& u_bw, const Matrix2& v_fw,
                                  const Matrix2& v_bw, const Ket2& psi, double splitting,
                                  double visibility) {
  using Matrix4 = Eigen::Matrix4cd;
  const double t = std::sqrt(1.0 - splitting);
  const double r = std::sqrt(splitting);
  Eigen::Matrix2cd bs;
  bs << t, Complex(0, r), Complex(0, r), t;
  // Coupler on path (x) polarization; path 0 is the input/commute port on the
  // outside and the clockwise launch port on the inside.
  Matrix4 coupler = Matrix4::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) coupler.block<2, 2>(2 * a, 2 * b) = bs(a, b) * Matrix2::Identity();

  Eigen::Vector4cd in = Eigen::Vector4cd::Zero();
  in.head<2>() = psi;
  const Eigen::Vector4cd launched = coupler * in;

  const Matrix2 clockwise = v_fw * u_fw;
  const Matrix2 counter = u_bw * v_bw;
  // Light launched from inner port 0 returns at inner port 1 and vice versa.
  Eigen::Vector4cd cw = Eigen::Vector4cd::Zero();
  Eigen::Vector4cd ccw = Eigen::Vector4cd::Zero();
  cw.tail<2>() = clockwise * launched.head<2>();
  ccw.head<2>() = counter * launched.tail<2>();

  const Eigen::Vector4cd a = coupler * cw;
  const Eigen::Vector4cd b = coupler * ccw;
  const Matrix4 rho = a * a.adjoint() + b * b.adjoint() +
                      visibility * (a * b.adjoint() + b * a.adjoint());

  PortPolTable p{};
  for (int port = 0; port < 2; ++port)
    for (int pol = 0; pol < 2; ++pol) p[port][pol] = std::max(0.0, rho(2 * port + pol, 2 * port + pol).real());
  return p;
}

CountsRecord simulate_counts(const SwitchSetting& setting, const NoiseModel& noise, int run) {
  noise.validate();
  if (run < 0) throw InputError("simulate_counts: run index must be nonnegative");
  Rng rng = make_stream(noise.rng_seed,
                        {static_cast<std::uint64_t>(StreamDomain::Switch),
                         static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(setting.u_index),
                         static_cast<std::uint64_t>(setting.v_index)});

  const auto u_train = jitter_waveplates(
      reciprocal_gadget_sequence(synthesize(gate(setting.u_index))), noise.waveplate_angle_jitter_sigma, rng);
  const auto v_train = jitter_waveplates(
      reciprocal_gadget_sequence(synthesize(gate(setting.v_index))), noise.waveplate_angle_jitter_sigma, rng);

  const PortPolTable p = sagnac_probabilities(
      sequence_matrix(u_train, Direction::Forward), sequence_matrix(u_train, Direction::Backward),
      sequence_matrix(v_train, Direction::Forward), sequence_matrix(v_train, Direction::Backward),
      setting.target_state.normalized(), noise.tdc_splitting, noise.interferometric_visibility);

  const double circulator = std::pow(10.0, -noise.circulator_loss_db_per_pass / 10.0);
  const double photons = noise.mean_photon_rate * noise.integration_time;

  CountsRecord rec;
  rec.run = run;
  rec.u_index = setting.u_index;
  rec.v_index = setting.v_index;
  for (int port = 0; port < 2; ++port) {
    for (int pol = 0; pol < 2; ++pol) {
      const double loss = port == kPlus ? circulator : 1.0;
      const double mean = photons * p[port][pol] * loss * noise.detector_efficiency[port][pol];
      if (noise.infinite_statistics || mean <= 0) {
        rec.counts[port][pol] = std::max(0.0, mean);
      } else {
        std::poisson_distribution<std::int64_t> draw(mean);
        rec.counts[port][pol] = static_cast<double>(draw(rng));
      }
    }
  }
  return rec;
}

EfficiencyCorrection efficiency_correction(std::span<const CountsRecord> records) {
  if (records.size() < 2) throw FitError("efficiency_correction: need at least two settings");

  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd response(n);
  double fmin = 1.0, fmax = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& rec = records[static_cast<std::size_t>(k)];
    if (rec.total() <= 0) throw FitError("efficiency_correction: setting with zero counts");
    design(k, 0) = 1.0;
    design(k, 1) = rec.port_total(kMinus);
    response(k) = rec.port_total(kPlus);
    const double f = rec.port_total(kPlus) / rec.total();
    fmin = std::min(fmin, f);
    fmax = std::max(fmax, f);
  }
  if (fmax - fmin < 1e-6)
    throw FitError("efficiency_correction: all settings share one commute fraction");

  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(response);
  const double intercept = coef(0);
  const double slope = coef(1);
  if (!(slope < 0) || !(intercept > 0))
    throw FitError("efficiency_correction: fitted line is unphysical");

  // intercept = N0 eta+, -intercept/slope = N0 eta-
  const double plus = intercept;
  const double minus = -intercept / slope;
  const double norm = std::max(plus, minus);

  EfficiencyCorrection out;
  out.fit = {slope, intercept, plus / norm, minus / norm};
  out.probabilities.reserve(records.size());
  for (const auto& rec : records) {
    const double np = rec.port_total(kPlus) / out.fit.eta_plus;
    const double nm = rec.port_total(kMinus) / out.fit.eta_minus;
    out.probabilities.push_back({rec.run, rec.u_index, rec.v_index,
                                 rec.port_total(kPlus) / rec.total(), np / (np + nm)});
  }
  return out;
}

}  // namespace qswitch
