#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gaitxai/data_ingest.hpp"
#include "gaitxai/nn.hpp"
#include "gaitxai/tensor.hpp"

namespace gaitxai {

struct EvalReport {
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population standard deviation across folds
  double zero_rule_accuracy = 0.0;
  std::array<std::array<std::size_t, 2>, 2> confusion{};  // [true][predicted]
  std::vector<std::string> checkpoint_files;
  std::string config_echo;
  std::uint64_t seed = 0;
};

std::string report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

// Majority-class share at trial level.
double zero_rule(const Dataset& dataset);

struct CvOptions {
  InputLayout layout = InputLayout::TemporalConcat;
  std::set<Component> channel_subset = {Component::V, Component::AP,
                                        Component::ML};
  std::vector<LayerSpec> architecture;  // empty selects the default graph
  TrainConfig train;
  std::size_t k = 10;
  std::uint64_t seed = 42;
};

struct CvResult {
  EvalReport report;
  FoldPlan folds;
  std::vector<Checkpoint> checkpoints;  // one per fold
};

// Subject-disjoint stratified k-fold cross-validation; fold i is evaluated
// with a model trained on all other folds (training seed = seed XOR i).
CvResult run_cv(const Dataset& dataset, const CvOptions& options);

struct SignalStats {
  std::vector<double> mean;
  std::vector<double> sd;  // population standard deviation
};

// Node-wise mean/sd over all trials of a class, per channel, on
// un-normalized curves. Keyed by canonical channel name.
std::map<std::string, SignalStats> aggregate_signals(const Dataset& dataset,
                                                     int class_index);

struct Region {
  std::string name;
  std::string channel;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // inclusive
};

struct RegionSet {
  std::string provenance;  // lrp | spm | literature
  std::vector<Region> regions;
};

RegionSet parse_regions_file(const std::string& path);
void write_regions_file(const std::string& path,
                        const std::vector<RegionSet>& sets);

// Smallest node set (greedy by descending relevance, ties toward lower
// channel name then lower index) capturing >= mass_fraction of the curve
// mass, merged into contiguous intervals.
RegionSet relevance_regions(
    const std::map<std::string, std::vector<double>>& curves,
    double mass_fraction);

struct OverlapScore {
  std::map<std::string, double> per_channel;  // Jaccard per channel
  double overall = 0.0;                       // node-weighted Jaccard
};

OverlapScore overlap_score(const RegionSet& set_a, const RegionSet& set_b);

// Splits a relevance tensor in network-input layout back into curves keyed
// by canonical trial channel names (L_V, ..., R_ML) of length T.
std::map<std::string, std::vector<double>> split_relevance_channels(
    const Tensor& relevance, InputLayout layout,
    const std::set<Component>& channel_subset, std::size_t series_length);

}  // namespace gaitxai
