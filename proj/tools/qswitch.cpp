#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "harness.hpp"

namespace fs = std::filesystem;
using namespace qswitch;
using namespace qswitch::harness;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kConfig = 3, kConsistency = 4 };

void add_unitary_options(CLI::App* cmd, UnitarySpec& spec) {
  cmd->add_option("--axis", spec.axis, "Rotation axis: x, y or z");
  cmd->add_option("--angle", spec.angle_deg, "Rotation angle in degrees");
  cmd->add_option("--matrix", spec.matrix, "Matrix \"a,b;c,d\" with complex entries like 1-2i");
  cmd->add_option("--gate", spec.gate, "Index 0..9 into the gate set");
}

void print_table_line(const char* label, double value) { std::printf("%-26s %.9f\n", label, value); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reciprocal-gadget quantum SWITCH simulator"};
  app.require_subcommand(1);

  UnitarySpec synth_spec;
  auto* synth = app.add_subcommand("synth", "Waveplate angles of the reciprocal gadget for a unitary");
  add_unitary_options(synth, synth_spec);

  UnitarySpec verify_spec;
  std::optional<std::string> verify_train;
  auto* verify_cmd = app.add_subcommand("verify", "Fidelity of a gadget train in both directions");
  add_unitary_options(verify_cmd, verify_spec);
  verify_cmd->add_option("--train", verify_train,
                         "Element train, e.g. \"QWP:90 HWP:-30 F:- ...\" (default: synthesized)");

  DiscriminateOptions disc;
  std::optional<fs::path> disc_noise;
  std::optional<std::uint64_t> disc_seed;
  fs::path disc_out = "qswitch-discriminate";
  auto* disc_cmd = app.add_subcommand("discriminate", "Commute/anticommute discrimination task");
  auto* ideal_flag = disc_cmd->add_flag("--ideal", disc.ideal, "Use the ideal SWITCH, no simulation");
  disc_cmd->add_option("--noise", disc_noise, "Noise model TOML")->excludes(ideal_flag);
  disc_cmd->add_option("--runs", disc.runs, "Independent repetitions")->capture_default_str();
  disc_cmd->add_option("--seed", disc_seed, "RNG seed (falls back to SWITCH_SEED, then rng_seed)");
  disc_cmd->add_option("--out", disc_out, "Output directory")->capture_default_str();

  fs::path wit_out = "qswitch-witness";
  auto* wit_cmd = app.add_subcommand("witness", "Causal witness of the SWITCH and fixed-order baselines");
  wit_cmd->add_option("--out", wit_out, "Output directory")->capture_default_str();

  TomoOptions tomo_opt;
  std::optional<std::uint64_t> tomo_seed;
  std::optional<double> tomo_jitter_deg;
  std::optional<fs::path> tomo_noise;
  bool tomo_noiseless = false;
  fs::path tomo_out = "qswitch-tomo";
  auto* tomo_cmd = app.add_subcommand("tomo", "Gate fidelity and reciprocity of random gadgets");
  tomo_cmd->add_option("--unitaries", tomo_opt.unitaries, "Number of Haar-random targets")->capture_default_str();
  tomo_cmd->add_option("--shots", tomo_opt.settings.shots, "Shots per measurement basis")->capture_default_str();
  tomo_cmd->add_option("--jitter-deg", tomo_jitter_deg, "Waveplate jitter sigma in degrees (default 0.05)");
  tomo_cmd->add_option("--noise", tomo_noise, "Take the waveplate jitter from a noise model TOML");
  tomo_cmd->add_flag("--noiseless", tomo_noiseless, "Zero jitter and exact expectations");
  tomo_cmd->add_option("--seed", tomo_seed, "RNG seed (falls back to SWITCH_SEED)");
  tomo_cmd->add_option("--out", tomo_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (synth->parsed()) {
      const Matrix2 u = resolve_unitary(synth_spec);
      const GadgetAngles a = synthesize(u);
      std::cout << synth_report(a);
      return kOk;
    }

    if (verify_cmd->parsed()) {
      const VerifyResult r = verify(resolve_unitary(verify_spec), verify_train);
      std::printf("train                      %s\n", r.train.c_str());
      print_table_line("fidelity fw", r.report.fw_fidelity);
      print_table_line("fidelity bw", r.report.bw_fidelity);
      print_table_line("reciprocity", r.report.reciprocity_fidelity);
      std::printf("verdict                    %s\n", r.passed ? "PASS" : "FAIL");
      return r.passed ? kOk : kConsistency;
    }

    if (disc_cmd->parsed()) {
      if (disc.runs < 1) throw InputError("--runs must be at least 1");
      if (!disc.ideal) {
        if (disc_noise) {
          disc.noise_path = disc_noise;
          disc.noise = load_noise_model(*disc_noise);
        }
        disc.seed = resolve_seed(disc_seed, disc_noise ? config_seed(*disc_noise) : std::nullopt);
      }
      const DiscriminateResult r = discriminate(disc);
      std::vector<std::pair<std::string, std::string>> files{
          {"config-echo.toml", discriminate_config_echo(disc)},
          {"success.csv", to_csv(success_table(r))},
          {"success_runs.csv", to_csv(success_runs_table(r))},
      };
      if (!disc.ideal) {
        files.emplace_back("counts.csv", to_csv(counts_table(r)));
        files.emplace_back("efficiency_fit.csv", to_csv(fits_table(r)));
      }
      files.emplace_back("summary.json", discriminate_summary(disc, r));
      write_bundle(disc_out, files);
      print_table_line("min p_s", r.min);
      print_table_line("mean p_s", r.mean);
      if (!disc.ideal) print_table_line("mean p_s (uncorrected)", r.raw_mean);
      std::printf("%-26s %.3f / %.3f\n", "causal bounds (min/mean)", kCausalBoundMin, kCausalBoundMean);
      std::printf("%-26s %s\n", "exceeds both bounds",
                  r.min > kCausalBoundMin && r.mean > kCausalBoundMean ? "yes" : "no");
      std::printf("%-26s %s\n", "output", disc_out.string().c_str());
      return kOk;
    }

    if (wit_cmd->parsed()) {
      const WitnessResult r = witness();
      write_bundle(wit_out, {{"summary.json", witness_summary(r)}});
      print_table_line("tr[S W_SWITCH]", r.value);
      print_table_line("bound", kCausalBoundMean);
      std::printf("%-26s %.3e\n", "oracle residual", r.residual);
      print_table_line("fixed order A->B", r.fixed_order_ab);
      print_table_line("fixed order B->A", r.fixed_order_ba);
      std::printf("%-26s %s\n", "SWITCH exceeds bound", r.value > kCausalBoundMean ? "yes" : "no");
      std::printf("%-26s %s\n", "fixed order within bound",
                  std::max(r.fixed_order_ab, r.fixed_order_ba) <= kCausalBoundMean ? "yes" : "no");
      return kOk;
    }

    if (tomo_cmd->parsed()) {
      if (tomo_noise) tomo_opt.settings.jitter_sigma = load_noise_model(*tomo_noise).waveplate_angle_jitter_sigma;
      if (tomo_jitter_deg) tomo_opt.settings.jitter_sigma = *tomo_jitter_deg * std::numbers::pi / 180.0;
      if (tomo_noiseless) {
        tomo_opt.settings.jitter_sigma = 0.0;
        tomo_opt.settings.infinite_shots = true;
        tomo_opt.seed = tomo_seed.value_or(0);
      } else {
        tomo_opt.seed = resolve_seed(tomo_seed, tomo_noise ? config_seed(*tomo_noise) : std::nullopt);
      }
      const TomoResult r = tomo(tomo_opt);
      write_bundle(tomo_out, {{"config-echo.toml", tomo_config_echo(tomo_opt)},
                              {"fidelity.csv", to_csv(fidelity_table(r))},
                              {"reciprocity.csv", to_csv(reciprocity_table(r))},
                              {"histogram.csv", to_csv(histogram_table(r))},
                              {"summary.json", tomo_summary(tomo_opt, r)}});
      std::printf("%-26s %.6f +- %.6f\n", "gate fidelity fw", r.fw.mean, r.fw.stddev);
      std::printf("%-26s %.6f +- %.6f\n", "gate fidelity bw", r.bw.mean, r.bw.stddev);
      std::printf("%-26s %.6f +- %.6f\n", "gate fidelity (all)", r.all_gates.mean, r.all_gates.stddev);
      std::printf("%-26s %.6f +- %.6f\n", "reciprocity", r.reciprocity.mean, r.reciprocity.stddev);
      std::printf("%-26s %s\n", "output", tomo_out.string().c_str());
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const FitError& e) {
    std::cerr << "efficiency fit failed: " << e.what() << "\n";
    return kConfig;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConsistencyError& e) {
    std::cerr << "internal consistency failure: " << e.what() << "\n";
    return kConsistency;
  }
  return kUsage;
}
