#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gaitxai/data_ingest.hpp"
#include "gaitxai/lrp.hpp"
#include "gaitxai/nn.hpp"

namespace gaitxai {

// Full pipeline configuration. Loaded from a flat key=value file with
// section-prefixed keys (e.g. train.lr=0.001); individual keys can be
// overridden afterwards with apply_override.
struct RunConfig {
  // data
  std::string data_path;
  CsvSchema schema = CsvSchema::Canonical;
  std::string mapping_path;

  // input assembly
  InputLayout layout = InputLayout::TemporalConcat;
  std::set<Component> channel_subset = {Component::V, Component::AP,
                                        Component::ML};

  // architecture; empty selects the built-in default
  std::vector<LayerSpec> architecture;

  // training / cross-validation
  TrainConfig train;
  std::size_t k = 10;

  // lrp
  LrpConfig lrp;
  bool explain_predicted_class = false;  // default: explain the true class

  // spm
  double spm_alpha = 0.05;
  bool spm_two_sided = true;
  bool spm_subject_means = false;   // default: one curve per trial
  bool spm_on_normalized = false;   // default: un-normalized registered curves

  // report
  double mass_fraction = 0.5;
  std::string regions_path;  // optional literature regions

  // general
  std::uint64_t seed = 42;
  std::string out_dir = "out";
};

RunConfig load_run_config(const std::string& path);
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);

}  // namespace gaitxai
