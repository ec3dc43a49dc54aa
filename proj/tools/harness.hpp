// Orchestration behind the qswitch command line: unitary specs, the five
// subcommands as pure pipelines, and the output bundle writer.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qswitch/discrimination.hpp"
#include "qswitch/tomography.hpp"

namespace qswitch::harness {

/// "x", "y" or "z" with an angle in degrees.
Matrix2 unitary_from_axis(const std::string& axis, double degrees);
/// "a,b;c,d" with complex entries such as 1, -0.5, 0.7071i, 1-2i, -i.
Matrix2 unitary_from_matrix(const std::string& text);
Complex parse_complex(const std::string& text);

struct UnitarySpec {
  std::optional<std::string> axis;
  std::optional<double> angle_deg;
  std::optional<std::string> matrix;
  std::optional<int> gate;
};

/// Exactly one of axis+angle, matrix, gate. Throws InputError otherwise.
Matrix2 resolve_unitary(const UnitarySpec& spec);

/// Seed precedence: explicit flag, then SWITCH_SEED, then the config's
/// rng_seed. Throws InputError when none is available.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config_seed);
std::optional<std::uint64_t> config_seed(const std::filesystem::path& toml_path);

std::string format_fixed(double x, int decimals);
std::string degrees(double radians);

// synth / verify

std::string synth_report(const GadgetAngles& a);

struct VerifyResult {
  GadgetReport report;
  std::string train;
  bool passed;
};

inline constexpr double kVerifyTol = 1e-10;
VerifyResult verify(const Matrix2& u, const std::optional<std::string>& train);

// discriminate

struct DiscriminateOptions {
  bool ideal = false;
  std::optional<std::filesystem::path> noise_path;
  NoiseModel noise = NoiseModel::calibrated();
  int runs = 6;
  std::uint64_t seed = 0;
};

struct RunScore {
  int run;
  int i;
  int j;
  PairClass cls;
  double p_s;
};

struct DiscriminateResult {
  std::vector<CountsRecord> counts;      // empty for the ideal source
  std::vector<EfficiencyFit> fits;       // one per run
  std::vector<RunScore> run_scores;      // runs x 52
  std::vector<PairScore> pair_scores;    // 52, averaged over runs
  double min;
  double mean;
  double mean_stddev;                    // over runs
  double raw_mean;                       // before efficiency correction
  double witness_value;
};

DiscriminateResult discriminate(const DiscriminateOptions& opt);

// witness

struct WitnessResult {
  double value;
  double residual;
  double fixed_order_ab;
  double fixed_order_ba;
};

WitnessResult witness();

// tomo

struct TomoOptions {
  int unitaries = 100;
  std::uint64_t seed = 0;
  TomographySettings settings{0.05 * 3.14159265358979323846 / 180.0, 10000, false};
};

struct TomoRow {
  int index;
  GadgetCharacterization c;
};

struct HistogramBin {
  std::string series;
  double low;
  int count;
};

struct TomoResult {
  std::vector<TomoRow> rows;
  SampleStats fw;
  SampleStats bw;
  SampleStats reciprocity;
  SampleStats all_gates;  // both directions pooled
  std::vector<HistogramBin> histogram;
};

inline constexpr double kHistogramBinWidth = 0.001;
TomoResult tomo(const TomoOptions& opt);

// Output bundle

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_escape(const std::string& field);
std::string to_csv(const CsvTable& t);

CsvTable counts_table(const DiscriminateResult& r);
CsvTable success_table(const DiscriminateResult& r);
CsvTable success_runs_table(const DiscriminateResult& r);
CsvTable fits_table(const DiscriminateResult& r);
CsvTable fidelity_table(const TomoResult& r);
CsvTable reciprocity_table(const TomoResult& r);
CsvTable histogram_table(const TomoResult& r);

std::string discriminate_summary(const DiscriminateOptions& opt, const DiscriminateResult& r);
std::string witness_summary(const WitnessResult& r);
std::string tomo_summary(const TomoOptions& opt, const TomoResult& r);

std::string discriminate_config_echo(const DiscriminateOptions& opt);
std::string tomo_config_echo(const TomoOptions& opt);

/// Creates dir and writes name -> content pairs, each file written once.
void write_bundle(const std::filesystem::path& dir,
                  const std::vector<std::pair<std::string, std::string>>& files);

}  // namespace qswitch::harness
