#include "gaitxai/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gaitxai {

double zero_rule(const Dataset& dataset) {
  if (dataset.empty()) throw EmptyDataset("zero_rule on empty dataset");
  std::size_t counts[2] = {0, 0};
  for (const auto& trial : dataset.trials) ++counts[class_of(trial.sex)];
  return static_cast<double>(std::max(counts[0], counts[1])) /
         static_cast<double>(dataset.trials.size());
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["fold_accuracy"] = report.fold_accuracy;
  j["mean_accuracy"] = report.mean_accuracy;
  j["std_accuracy"] = report.std_accuracy;
  j["std_kind"] = "population";
  j["zero_rule_accuracy"] = report.zero_rule_accuracy;
  j["confusion"] = {{"true0_pred0", report.confusion[0][0]},
                    {"true0_pred1", report.confusion[0][1]},
                    {"true1_pred0", report.confusion[1][0]},
                    {"true1_pred1", report.confusion[1][1]}};
  j["checkpoints"] = report.checkpoint_files;
  j["config"] = report.config_echo;
  j["seed"] = report.seed;
  return j.dump(2) + "\n";
}

std::string report_to_text(const EvalReport& report) {
  char buf[128];
  std::ostringstream os;
  os << "cross-validation report\n";
  os << "folds: " << report.fold_accuracy.size() << "\n";
  for (std::size_t i = 0; i < report.fold_accuracy.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "fold %zu accuracy: %.4f\n", i,
                  report.fold_accuracy[i]);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "mean accuracy: %.1f%% (+/- %.1f%%, population sd)\n",
                100.0 * report.mean_accuracy, 100.0 * report.std_accuracy);
  os << buf;
  std::snprintf(buf, sizeof(buf), "zero-rule baseline: %.1f%%\n",
                100.0 * report.zero_rule_accuracy);
  os << buf;
  os << "confusion (rows=true, cols=predicted): "
     << report.confusion[0][0] << " " << report.confusion[0][1] << " / "
     << report.confusion[1][0] << " " << report.confusion[1][1] << "\n";
  os << "config: " << report.config_echo << "\n";
  os << "seed: " << report.seed << "\n";
  return os.str();
}

CvResult run_cv(const Dataset& dataset, const CvOptions& options) {
  dataset.validate();
  CvResult result;
  result.folds = make_folds(dataset, options.k, options.seed);

  std::vector<InputSample> samples;
  samples.reserve(dataset.trials.size());
  for (const auto& trial : dataset.trials) {
    samples.push_back(
        assemble_input(trial, options.layout, options.channel_subset));
  }
  const Shape input_shape{samples[0].num_channels(), samples[0].length()};
  const LayerGraph graph =
      options.architecture.empty()
          ? default_graph(input_shape)
          : LayerGraph(input_shape, options.architecture);

  EvalReport& report = result.report;
  report.seed = options.seed;
  report.zero_rule_accuracy = zero_rule(dataset);

  for (std::size_t fold = 0; fold < options.k; ++fold) {
    std::vector<InputSample> train_split;
    std::vector<const InputSample*> test_split;
    for (const auto& sample : samples) {
      if (result.folds.assignments.at(sample.subject_id) == fold) {
        test_split.push_back(&sample);
      } else {
        train_split.push_back(sample);
      }
    }
    TrainConfig fold_config = options.train;
    fold_config.seed = options.seed ^ static_cast<std::uint64_t>(fold);
    Checkpoint ckpt = options.k == 1
                          ? train(graph, samples, fold_config)
                          : train(graph, train_split, fold_config);
    report.config_echo = fold_config.echo();

    std::size_t correct = 0;
    for (const InputSample* sample : test_split) {
      const Prediction pred = predict(ckpt, *sample);
      ++report.confusion[sample->label][pred.class_index];
      if (pred.class_index == sample->label) ++correct;
    }
    report.fold_accuracy.push_back(
        test_split.empty() ? 0.0
                           : static_cast<double>(correct) /
                                 static_cast<double>(test_split.size()));
    result.checkpoints.push_back(std::move(ckpt));
  }

  double mean = 0.0;
  for (double a : report.fold_accuracy) mean += a;
  mean /= static_cast<double>(report.fold_accuracy.size());
  double var = 0.0;
  for (double a : report.fold_accuracy) var += (a - mean) * (a - mean);
  var /= static_cast<double>(report.fold_accuracy.size());
  report.mean_accuracy = mean;
  report.std_accuracy = std::sqrt(var);
  return result;
}

std::map<std::string, SignalStats> aggregate_signals(const Dataset& dataset,
                                                     int class_index) {
  std::map<std::string, SignalStats> out;
  std::size_t n = 0;
  for (const auto& trial : dataset.trials) {
    if (class_of(trial.sex) == class_index) ++n;
  }
  if (n == 0) throw EmptyGroup("no trials of the requested class");

  for (std::size_t c = 0; c < kNumChannels; ++c) {
    SignalStats stats;
    stats.mean.assign(dataset.series_length, 0.0);
    stats.sd.assign(dataset.series_length, 0.0);
    for (const auto& trial : dataset.trials) {
      if (class_of(trial.sex) != class_index) continue;
      for (std::size_t q = 0; q < dataset.series_length; ++q) {
        stats.mean[q] += trial.curves[c][q];
      }
    }
    for (auto& m : stats.mean) m /= static_cast<double>(n);
    for (const auto& trial : dataset.trials) {
      if (class_of(trial.sex) != class_index) continue;
      for (std::size_t q = 0; q < dataset.series_length; ++q) {
        const double d = trial.curves[c][q] - stats.mean[q];
        stats.sd[q] += d * d;
      }
    }
    for (auto& s : stats.sd) s = std::sqrt(s / static_cast<double>(n));
    out[ChannelId::from_index(c).name()] = std::move(stats);
  }
  return out;
}

RegionSet parse_regions_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataNotFound("cannot open regions file " + path);
  RegionSet set;
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty regions file");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    std::istringstream is(line);
    Region region;
    std::string start_s, end_s, provenance;
    if (!std::getline(is, region.name, ',') ||
        !std::getline(is, region.channel, ',') ||
        !std::getline(is, start_s, ',') || !std::getline(is, end_s, ',') ||
        !std::getline(is, provenance)) {
      throw SchemaError("regions file line " + std::to_string(line_no) +
                        ": expected name,channel,start,end,provenance");
    }
    region.start = std::stoul(start_s);
    region.end = std::stoul(end_s);
    if (region.end < region.start) {
      throw SchemaError("region " + region.name + ": end before start");
    }
    if (!provenance.empty() && provenance.back() == '\r') provenance.pop_back();
    if (set.provenance.empty()) set.provenance = provenance;
    set.regions.push_back(std::move(region));
  }
  return set;
}

void write_regions_file(const std::string& path,
                        const std::vector<RegionSet>& sets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write regions file " + path);
  out << "name,channel,start,end,provenance\n";
  for (const auto& set : sets) {
    for (const auto& region : set.regions) {
      out << region.name << ',' << region.channel << ',' << region.start << ','
          << region.end << ',' << set.provenance << "\n";
    }
  }
}

RegionSet relevance_regions(
    const std::map<std::string, std::vector<double>>& curves,
    double mass_fraction) {
  if (!(mass_fraction > 0.0) || mass_fraction > 1.0) {
    throw ConfigError("mass_fraction must be in (0, 1]");
  }
  struct Node {
    double value;
    std::string channel;
    std::size_t index;
  };
  std::vector<Node> nodes;
  double total = 0.0;
  for (const auto& [channel, curve] : curves) {
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve[i] < 0.0) {
        throw ConfigError("relevance_regions expects a nonnegative curve");
      }
      nodes.push_back({curve[i], channel, i});
      total += curve[i];
    }
  }
  if (total == 0.0) throw ZeroCurve("total relevance mass is zero");

  std::stable_sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
    if (a.value != b.value) return a.value > b.value;
    return std::tie(a.channel, a.index) < std::tie(b.channel, b.index);
  });

  std::map<std::string, std::vector<std::size_t>> picked;
  double mass = 0.0;
  for (const auto& node : nodes) {
    picked[node.channel].push_back(node.index);
    mass += node.value;
    if (mass >= mass_fraction * total) break;
  }

  RegionSet set;
  set.provenance = "lrp";
  for (auto& [channel, indices] : picked) {
    std::sort(indices.begin(), indices.end());
    std::size_t region_count = 0;
    std::size_t start = indices[0], prev = indices[0];
    auto flush = [&](std::size_t end) {
      set.regions.push_back({channel + "_" + std::to_string(region_count++),
                             channel, start, end});
    };
    for (std::size_t i = 1; i < indices.size(); ++i) {
      if (indices[i] != prev + 1) {
        flush(prev);
        start = indices[i];
      }
      prev = indices[i];
    }
    flush(prev);
  }
  return set;
}

namespace {

std::map<std::string, std::set<std::size_t>> covered_nodes(const RegionSet& s) {
  std::map<std::string, std::set<std::size_t>> out;
  for (const auto& region : s.regions) {
    for (std::size_t i = region.start; i <= region.end; ++i) {
      out[region.channel].insert(i);
    }
  }
  return out;
}

}  // namespace

OverlapScore overlap_score(const RegionSet& set_a, const RegionSet& set_b) {
  const auto a = covered_nodes(set_a);
  const auto b = covered_nodes(set_b);
  std::set<std::string> channels;
  for (const auto& [ch, _] : a) channels.insert(ch);
  for (const auto& [ch, _] : b) channels.insert(ch);

  OverlapScore score;
  std::size_t total_inter = 0, total_union = 0;
  for (const auto& channel : channels) {
    static const std::set<std::size_t> empty;
    const auto& na = a.count(channel) ? a.at(channel) : empty;
    const auto& nb = b.count(channel) ? b.at(channel) : empty;
    std::size_t inter = 0;
    for (std::size_t i : na) inter += nb.count(i);
    const std::size_t uni = na.size() + nb.size() - inter;
    score.per_channel[channel] =
        uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    total_inter += inter;
    total_union += uni;
  }
  score.overall = total_union == 0 ? 0.0
                                   : static_cast<double>(total_inter) /
                                         static_cast<double>(total_union);
  return score;
}

std::map<std::string, std::vector<double>> split_relevance_channels(
    const Tensor& relevance, InputLayout layout,
    const std::set<Component>& channel_subset, std::size_t series_length) {
  std::vector<Component> comps;
  for (Component c : {Component::V, Component::AP, Component::ML}) {
    if (channel_subset.count(c)) comps.push_back(c);
  }
  const std::size_t expected_channels =
      layout == InputLayout::TemporalConcat ? comps.size() : 2 * comps.size();
  const std::size_t expected_length =
      layout == InputLayout::TemporalConcat ? 2 * series_length : series_length;
  if (relevance.channels != expected_channels ||
      relevance.length != expected_length) {
    throw ShapeMismatch("relevance tensor does not match layout/subset");
  }

  std::map<std::string, std::vector<double>> out;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    for (Side side : {Side::Left, Side::Right}) {
      const std::string name = ChannelId{side, comps[ci]}.name();
      std::vector<double> curve(series_length);
      for (std::size_t q = 0; q < series_length; ++q) {
        if (layout == InputLayout::TemporalConcat) {
          const std::size_t offset = side == Side::Left ? 0 : series_length;
          curve[q] = relevance.at(ci, offset + q);
        } else {
          const std::size_t row = 2 * ci + (side == Side::Left ? 0 : 1);
          curve[q] = relevance.at(row, q);
        }
      }
      out[name] = std::move(curve);
    }
  }
  return out;
}

}  // namespace gaitxai
