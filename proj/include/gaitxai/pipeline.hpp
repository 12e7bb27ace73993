#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gaitxai/data_ingest.hpp"
#include "gaitxai/run_config.hpp"
#include "gaitxai/spm1d.hpp"

namespace gaitxai {

// Subcommand bodies, shared by the CLI and the test suites. Each writes its
// outputs under config.out_dir and is deterministic given (inputs, seed).

void cmd_synth(const SyntheticSpec& spec, std::uint64_t seed,
               const std::string& out_path);

// Cross-validated training: report.json, report.txt, fold_<i>.ckpt.
void cmd_train(const RunConfig& config);

// Per-trial LRP: relevance.csv, relevance_mean.csv, relevance_total.csv.
void cmd_explain(const RunConfig& config);

// Per-channel SPM: spm.csv plus spm_summary.txt sidecar.
void cmd_spm(const RunConfig& config);

// Figure panels A-D (SVG) and overlap_table.txt; requires prior cmd_explain
// and cmd_spm outputs in config.out_dir.
void cmd_report(const RunConfig& config);

Dataset load_dataset(const RunConfig& config);

// Per-channel curve groups for SPM; group_a = class 0 (female).
std::pair<CurveGroup, CurveGroup> spm_groups(const Dataset& dataset,
                                             const std::string& channel,
                                             bool subject_means,
                                             bool normalized);

// Readers for outputs of earlier stages (used by cmd_report and tests).
std::map<std::string, std::vector<double>> read_relevance_total(
    const std::string& path);
std::map<int, std::map<std::string, std::vector<double>>> read_relevance_mean(
    const std::string& path);
std::map<std::string, SpmResult> read_spm_outputs(const std::string& csv_path,
                                                  const std::string& summary_path);

}  // namespace gaitxai
