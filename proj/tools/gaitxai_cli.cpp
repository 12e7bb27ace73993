#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "gaitxai/pipeline.hpp"

namespace {

using gaitxai::RunConfig;

struct GlobalFlags {
  std::string config_path;
  std::string out_dir;
  std::string data_path;
  std::int64_t seed = -1;
  bool have_seed = false;
};

RunConfig resolve_config(const GlobalFlags& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) {
    config = gaitxai::load_run_config(flags.config_path);
  }
  if (!flags.data_path.empty()) config.data_path = flags.data_path;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.have_seed) {
    gaitxai::apply_override(config, "seed", std::to_string(flags.seed));
  }
  return config;
}

void add_globals(CLI::App* cmd, GlobalFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key=value config file");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--data", flags.data_path, "dataset CSV path");
  cmd->add_option("--seed", flags.seed, "RNG seed")
      ->each([&](const std::string&) { flags.have_seed = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GRF gait classification, LRP explanations and 1D SPM"};
  app.require_subcommand(1);

  GlobalFlags flags;

  // synth
  gaitxai::SyntheticSpec spec;
  std::string synth_out = "synthetic.csv";
  std::uint64_t synth_seed = 42;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--out", synth_out, "output CSV path");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--n0", spec.n_subjects_class0, "class-0 (female) subjects");
  synth->add_option("--n1", spec.n_subjects_class1, "class-1 (male) subjects");
  synth->add_option("--trials", spec.trials_per_subject, "trials per subject");
  synth->add_option("--length", spec.series_length, "series length T");
  synth->add_option("--bump-center", spec.bump_center, "planted bump center");
  synth->add_option("--bump-width", spec.bump_width, "planted bump half-width");
  synth->add_option("--amplitude", spec.bump_amplitude, "planted bump amplitude");
  synth->add_option("--noise", spec.noise_sd, "noise standard deviation");

  GlobalFlags train_flags, explain_flags, spm_flags, report_flags;
  auto* train = app.add_subcommand("train", "cross-validated training");
  add_globals(train, train_flags);
  auto* explain = app.add_subcommand("explain", "LRP relevance maps");
  add_globals(explain, explain_flags);
  auto* spm = app.add_subcommand("spm", "1D SPM statistics");
  add_globals(spm, spm_flags);
  auto* report = app.add_subcommand("report", "figure panels and overlap table");
  add_globals(report, report_flags);

  try {
    app.parse(argc, argv);
    if (synth->parsed()) {
      gaitxai::cmd_synth(spec, synth_seed, synth_out);
    } else if (train->parsed()) {
      gaitxai::cmd_train(resolve_config(train_flags));
    } else if (explain->parsed()) {
      gaitxai::cmd_explain(resolve_config(explain_flags));
    } else if (spm->parsed()) {
      gaitxai::cmd_spm(resolve_config(spm_flags));
    } else if (report->parsed()) {
      gaitxai::cmd_report(resolve_config(report_flags));
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::fprintf(stderr, "BadFlag: %s\n", e.what());
    return 4;
  } catch (const gaitxai::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "UnexpectedError: %s\n", e.what());
    return 1;
  }
}
