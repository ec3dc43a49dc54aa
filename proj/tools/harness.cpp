#include "harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

namespace qswitch::harness {

namespace {

using json = nlohmann::ordered_json;

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const std::string& context) {
  double v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw InputError("cannot parse number '" + text + "' in " + context);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string counts_field(double x) {
  if (x == std::floor(x) && std::abs(x) < 9e15) return std::to_string(static_cast<std::int64_t>(x));
  return format_fixed(x, 6);
}

// Fidelities of 1 land in [1.000, 1.001).
long bin_index(double x) { return static_cast<long>(std::floor(x / kHistogramBinWidth + 1e-9)); }

}  // namespace

Complex parse_complex(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw InputError("empty matrix entry");
  if (s.back() != 'i') return {parse_real(s, "matrix entry"), 0.0};

  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split_at = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  const std::string re_text = split_at == std::string::npos ? "" : body.substr(0, split_at);
  std::string im_text = split_at == std::string::npos ? body : body.substr(split_at);
  if (im_text.empty() || im_text == "+") im_text = "1";
  if (im_text == "-") im_text = "-1";
  const double re = re_text.empty() ? 0.0 : parse_real(re_text, "matrix entry");
  return {re, parse_real(im_text, "matrix entry")};
}

Matrix2 unitary_from_matrix(const std::string& text) {
  const auto rows = split(text, ';');
  if (rows.size() != 2) throw InputError("--matrix expects two rows separated by ';'");
  Matrix2 m;
  for (int r = 0; r < 2; ++r) {
    const auto cols = split(rows[static_cast<std::size_t>(r)], ',');
    if (cols.size() != 2) throw InputError("--matrix rows need two comma-separated entries");
    for (int c = 0; c < 2; ++c) m(r, c) = parse_complex(cols[static_cast<std::size_t>(c)]);
  }
  if (!is_unitary(m, 1e-6)) throw InputError("--matrix is not unitary");
  return m;
}

Matrix2 unitary_from_axis(const std::string& axis, double degrees) {
  if (!std::isfinite(degrees)) throw InputError("--angle must be finite");
  std::string a = axis;
  std::transform(a.begin(), a.end(), a.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (a == "x") return rotation(Axis::X, degrees * kDeg);
  if (a == "y") return rotation(Axis::Y, degrees * kDeg);
  if (a == "z") return rotation(Axis::Z, degrees * kDeg);
  throw InputError("--axis must be x, y or z");
}

Matrix2 resolve_unitary(const UnitarySpec& spec) {
  const int given = (spec.axis || spec.angle_deg ? 1 : 0) + (spec.matrix ? 1 : 0) + (spec.gate ? 1 : 0);
  if (given != 1) throw InputError("give exactly one of --axis/--angle, --matrix, --gate");
  if (spec.matrix) return unitary_from_matrix(*spec.matrix);
  if (spec.gate) return gate(*spec.gate);
  if (!spec.axis || !spec.angle_deg) throw InputError("--axis and --angle go together");
  return unitary_from_axis(*spec.axis, *spec.angle_deg);
}

std::optional<std::uint64_t> config_seed(const std::filesystem::path& toml_path) {
  toml::table tbl;
  try {
    tbl = toml::parse_file(toml_path.string());
  } catch (const toml::parse_error& e) {
    throw ConfigError(std::string("noise model: ") + std::string(e.description()));
  }
  if (const auto v = tbl["rng_seed"].value<std::int64_t>(); v && *v >= 0)
    return static_cast<std::uint64_t>(*v);
  return std::nullopt;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> cfg) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SWITCH_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw InputError("SWITCH_SEED must be a nonnegative integer");
    return v;
  }
  if (cfg) return *cfg;
  throw InputError("a seed is required: pass --seed or set SWITCH_SEED");
}

std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s(buf);
  // Avoid "-0.000000".
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string degrees(double radians) { return format_fixed(radians / kDeg, 6); }

std::string synth_report(const GadgetAngles& a) {
  std::ostringstream out;
  out << "full gadget (deg)\n"
      << "  theta   " << degrees(a.theta) << "\n"
      << "  phi     " << degrees(a.phi) << "\n"
      << "  alpha   " << degrees(a.alpha) << "\n"
      << "reduced gadget (deg)\n"
      << "  theta1  " << degrees(a.theta1) << "\n"
      << "  phi1    " << degrees(a.phi1) << "\n"
      << "  alpha   " << degrees(a.alpha) << "\n"
      << "  phi2    " << degrees(a.phi2) << "\n"
      << "  theta2  " << degrees(a.theta2) << "\n"
      << "auxiliary (deg)\n"
      << "  psi     " << degrees(a.psi) << "\n"
      << "  gamma   " << degrees(a.gamma) << "\n"
      << "  delta   " << degrees(a.delta) << "\n"
      << "train     " << format_train(reciprocal_gadget_sequence(a)) << "\n";
  return out.str();
}

VerifyResult verify(const Matrix2& u, const std::optional<std::string>& train) {
  ElementSequence seq;
  if (train) {
    seq = parse_train(*train);
  } else {
    seq = reciprocal_gadget_sequence(synthesize(u));
  }
  const Matrix2 fw = sequence_matrix(seq, Direction::Forward);
  const Matrix2 bw = sequence_matrix(seq, Direction::Backward);
  VerifyResult r;
  r.report = {unitary_fidelity(fw, u), unitary_fidelity(bw, u), unitary_fidelity(fw, bw)};
  r.train = format_train(seq);
  r.passed = r.report.fw_fidelity >= 1 - kVerifyTol && r.report.bw_fidelity >= 1 - kVerifyTol;
  return r;
}

DiscriminateResult discriminate(const DiscriminateOptions& opt) {
  if (opt.runs < 1) throw InputError("--runs must be at least 1");
  const auto pairs = task_pairs();
  DiscriminateResult r{};

  if (opt.ideal) {
    const auto source = ideal_source();
    for (int run = 0; run < opt.runs; ++run)
      for (const auto& [i, j] : pairs)
        r.run_scores.push_back({run, i, j, classify(i, j), success_probability(i, j, source)});
  } else {
    NoiseModel noise = opt.noise;
    noise.rng_seed = opt.seed;
    noise.validate();
    for (int run = 0; run < opt.runs; ++run) {
      // All hundred settings are recorded; the Neither pairs calibrate the fit.
      std::vector<CountsRecord> records;
      for (int i = 0; i < kGateCount; ++i)
        for (int j = 0; j < kGateCount; ++j) records.push_back(simulate_counts({i, j, kets::H()}, noise, run));
      const EfficiencyCorrection corr = efficiency_correction(records);
      r.fits.push_back(corr.fit);
      for (const auto& p : corr.probabilities) {
        const PairClass cls = classify(p.u_index, p.v_index);
        if (cls == PairClass::Neither) continue;
        const double ps = cls == PairClass::Commute ? p.corrected_commute : 1 - p.corrected_commute;
        const double raw = cls == PairClass::Commute ? p.raw_commute : 1 - p.raw_commute;
        r.run_scores.push_back({run, p.u_index, p.v_index, cls, ps});
        r.raw_mean += raw;
      }
      r.counts.insert(r.counts.end(), records.begin(), records.end());
    }
    r.raw_mean /= static_cast<double>(opt.runs * pairs.size());
  }

  std::map<IndexPair, double> sum;
  std::vector<double> run_means(static_cast<std::size_t>(opt.runs), 0.0);
  const auto n_pairs = static_cast<double>(pairs.size());
  for (const auto& s : r.run_scores) {
    sum[{s.i, s.j}] += s.p_s;
    run_means[static_cast<std::size_t>(s.run)] += s.p_s;
  }
  for (double& m : run_means) m /= n_pairs;
  r.min = 1.0;
  double total = 0.0;
  for (const auto& [i, j] : pairs) {
    const double ps = sum[{i, j}] / opt.runs;
    r.pair_scores.push_back({i, j, classify(i, j), ps});
    r.min = std::min(r.min, ps);
    total += ps;
  }
  r.mean = total / n_pairs;
  r.mean_stddev = sample_stats(run_means).stddev;
  if (opt.ideal) {
    r.raw_mean = r.mean;
    r.witness_value = witness_value(build_witness(), build_switch_process_matrix());
  } else {
    // tr[S W] of the measured process equals the average success probability.
    r.witness_value = r.mean;
  }
  return r;
}

WitnessResult witness() {
  const WitnessOperator s = build_witness();
  const ProcessMatrix w = build_switch_process_matrix();
  return {witness_value(s, w), oracle_residual(w),
          witness_value(s, build_fixed_order_process_matrix(FixedOrder::AThenB)),
          witness_value(s, build_fixed_order_process_matrix(FixedOrder::BThenA))};
}

TomoResult tomo(const TomoOptions& opt) {
  if (opt.unitaries < 1) throw InputError("--unitaries must be at least 1");
  if (!opt.settings.infinite_shots && opt.settings.shots < 1) throw InputError("--shots must be positive");
  if (!(opt.settings.jitter_sigma >= 0)) throw InputError("jitter must be nonnegative");
  TomoResult r;
  std::vector<double> fw, bw, rec, all;
  for (int k = 0; k < opt.unitaries; ++k) {
    const auto id = static_cast<std::uint64_t>(k);
    Rng targets = make_stream(opt.seed, {static_cast<std::uint64_t>(StreamDomain::Targets), id});
    Rng lab = make_stream(opt.seed, {static_cast<std::uint64_t>(StreamDomain::Tomography), id});
    const Matrix2 u = random_unitary(targets);
    const GadgetCharacterization c = characterize_gadget(synthesize(u), u, opt.settings, lab);
    r.rows.push_back({k, c});
    fw.push_back(c.fw_fidelity);
    bw.push_back(c.bw_fidelity);
    rec.push_back(c.reciprocity);
    all.push_back(c.fw_fidelity);
    all.push_back(c.bw_fidelity);
  }
  r.fw = sample_stats(fw);
  r.bw = sample_stats(bw);
  r.reciprocity = sample_stats(rec);
  r.all_gates = sample_stats(all);

  for (const auto& [name, xs] : {std::pair<std::string, const std::vector<double>*>{"fw", &fw},
                                 {"bw", &bw}, {"reciprocity", &rec}}) {
    std::map<long, int> bins;
    for (const double x : *xs) ++bins[bin_index(x)];
    const long lo = bins.begin()->first, hi = bins.rbegin()->first;
    for (long b = lo; b <= hi; ++b) {
      const auto it = bins.find(b);
      r.histogram.push_back({name, static_cast<double>(b) * kHistogramBinWidth, it == bins.end() ? 0 : it->second});
    }
  }
  return r;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string to_csv(const CsvTable& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k) out.push_back(',');
      out += csv_escape(fields[k]);
    }
    out += "\r\n";
  };
  line(t.header);
  for (const auto& row : t.rows) line(row);
  return out;
}

CsvTable counts_table(const DiscriminateResult& r) {
  CsvTable t{{"run", "i", "j", "class", "n_plus_H", "n_plus_V", "n_minus_H", "n_minus_V"}, {}};
  for (const auto& c : r.counts)
    t.rows.push_back({std::to_string(c.run), std::to_string(c.u_index), std::to_string(c.v_index),
                      std::string(to_string(classify(c.u_index, c.v_index))),
                      counts_field(c.counts[kPlus][kPolH]), counts_field(c.counts[kPlus][kPolV]),
                      counts_field(c.counts[kMinus][kPolH]), counts_field(c.counts[kMinus][kPolV])});
  return t;
}

CsvTable success_table(const DiscriminateResult& r) {
  CsvTable t{{"i", "j", "class", "p_s"}, {}};
  for (const auto& s : r.pair_scores)
    t.rows.push_back({std::to_string(s.i), std::to_string(s.j), std::string(to_string(s.cls)), format_fixed(s.p_s, 9)});
  return t;
}

CsvTable success_runs_table(const DiscriminateResult& r) {
  CsvTable t{{"run", "i", "j", "class", "p_s"}, {}};
  for (const auto& s : r.run_scores)
    t.rows.push_back({std::to_string(s.run), std::to_string(s.i), std::to_string(s.j),
                      std::string(to_string(s.cls)), format_fixed(s.p_s, 9)});
  return t;
}

CsvTable fits_table(const DiscriminateResult& r) {
  CsvTable t{{"run", "slope", "intercept", "eta_plus", "eta_minus"}, {}};
  for (std::size_t k = 0; k < r.fits.size(); ++k) {
    const auto& f = r.fits[k];
    t.rows.push_back({std::to_string(k), format_fixed(f.slope, 9), format_fixed(f.intercept, 6),
                      format_fixed(f.eta_plus, 9), format_fixed(f.eta_minus, 9)});
  }
  return t;
}

CsvTable fidelity_table(const TomoResult& r) {
  CsvTable t{{"index", "direction", "fidelity"}, {}};
  for (const auto& row : r.rows) {
    t.rows.push_back({std::to_string(row.index), "fw", format_fixed(row.c.fw_fidelity, 9)});
    t.rows.push_back({std::to_string(row.index), "bw", format_fixed(row.c.bw_fidelity, 9)});
  }
  return t;
}

CsvTable reciprocity_table(const TomoResult& r) {
  CsvTable t{{"index", "reciprocity"}, {}};
  for (const auto& row : r.rows) t.rows.push_back({std::to_string(row.index), format_fixed(row.c.reciprocity, 9)});
  return t;
}

CsvTable histogram_table(const TomoResult& r) {
  CsvTable t{{"series", "bin_low", "bin_high", "count"}, {}};
  for (const auto& b : r.histogram)
    t.rows.push_back({b.series, format_fixed(b.low, 3), format_fixed(b.low + kHistogramBinWidth, 3),
                      std::to_string(b.count)});
  return t;
}

std::string discriminate_summary(const DiscriminateOptions& opt, const DiscriminateResult& r) {
  json j;
  j["command"] = "discriminate";
  j["source"] = opt.ideal ? "ideal" : "simulated";
  j["runs"] = opt.runs;
  if (!opt.ideal) j["seed"] = opt.seed;
  j["pairs"] = r.pair_scores.size();
  j["min"] = r.min;
  j["mean"] = r.mean;
  j["mean_stddev"] = r.mean_stddev;
  j["raw_mean"] = r.raw_mean;
  j["bound_min"] = kCausalBoundMin;
  j["bound_mean"] = kCausalBoundMean;
  j["beats_min_bound"] = r.min > kCausalBoundMin;
  j["beats_mean_bound"] = r.mean > kCausalBoundMean;
  j["witness_value"] = r.witness_value;
  return j.dump(2) + "\n";
}

std::string witness_summary(const WitnessResult& r) {
  json j;
  j["command"] = "witness";
  j["witness_value"] = r.value;
  j["oracle_residual"] = r.residual;
  j["fixed_order_a_then_b"] = r.fixed_order_ab;
  j["fixed_order_b_then_a"] = r.fixed_order_ba;
  j["bound_min"] = kCausalBoundMin;
  j["bound_mean"] = kCausalBoundMean;
  j["beats_mean_bound"] = r.value > kCausalBoundMean;
  return j.dump(2) + "\n";
}

std::string tomo_summary(const TomoOptions& opt, const TomoResult& r) {
  json j;
  j["command"] = "tomo";
  j["unitaries"] = opt.unitaries;
  j["seed"] = opt.seed;
  j["shots"] = opt.settings.infinite_shots ? json(nullptr) : json(opt.settings.shots);
  j["jitter_deg"] = opt.settings.jitter_sigma / kDeg;
  auto stats = [](const SampleStats& s) { return json{{"mean", s.mean}, {"stddev", s.stddev}}; };
  j["gate_fidelity_fw"] = stats(r.fw);
  j["gate_fidelity_bw"] = stats(r.bw);
  j["gate_fidelity_all"] = stats(r.all_gates);
  j["reciprocity"] = stats(r.reciprocity);
  j["histogram_bin_width"] = kHistogramBinWidth;
  return j.dump(2) + "\n";
}

std::string discriminate_config_echo(const DiscriminateOptions& opt) {
  std::ostringstream out;
  out << "# qswitch discriminate\n"
      << "source = \"" << (opt.ideal ? "ideal" : "simulated") << "\"\n"
      << "runs = " << opt.runs << "\n";
  if (!opt.ideal) {
    NoiseModel m = opt.noise;
    m.rng_seed = opt.seed;
    if (opt.noise_path) out << "noise_file = \"" << opt.noise_path->generic_string() << "\"\n";
    out << "\n[noise]\n" << to_toml(m);
  }
  return out.str();
}

std::string tomo_config_echo(const TomoOptions& opt) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), opt.settings.jitter_sigma);
  std::ostringstream out;
  out << "# qswitch tomo\n"
      << "unitaries = " << opt.unitaries << "\n"
      << "seed = " << opt.seed << "\n"
      << "shots = " << opt.settings.shots << "\n"
      << "infinite_shots = " << (opt.settings.infinite_shots ? "true" : "false") << "\n"
      << "waveplate_angle_jitter_sigma = " << std::string(buf.data(), res.ptr) << "\n";
  return out.str();
}

void write_bundle(const std::filesystem::path& dir,
                  const std::vector<std::pair<std::string, std::string>>& files) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  for (const auto& [name, content] : files) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    out << content;
  }
}

}  // namespace qswitch::harness
