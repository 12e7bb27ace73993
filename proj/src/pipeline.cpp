#include "gaitxai/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gaitxai/eval.hpp"
#include "gaitxai/lrp.hpp"
#include "gaitxai/report.hpp"

namespace fs = std::filesystem;

namespace gaitxai {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double parse_double(const std::string& s, const char* context) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw SchemaError(std::string("bad numeric value '") + s + "' in " + context);
  }
  return v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

void ensure_out_dir(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + config.out_dir);
}

std::string checkpoint_path(const RunConfig& config, std::size_t fold) {
  return config.out_dir + "/fold_" + std::to_string(fold) + ".ckpt";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::ifstream open_required(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInput("required input " + path + " not found");
  return in;
}

}  // namespace

Dataset load_dataset(const RunConfig& config) {
  if (config.data_path.empty()) throw ConfigError("data.path not set");
  GaitrecMapping mapping;
  if (config.schema == CsvSchema::GaitrecAdapter && !config.mapping_path.empty()) {
    mapping = GaitrecMapping::load_file(config.mapping_path);
  }
  return parse_trials_file(config.data_path, config.schema, mapping);
}

void cmd_synth(const SyntheticSpec& spec, std::uint64_t seed,
               const std::string& out_path) {
  const Dataset ds = generate_synthetic(spec, seed);
  const fs::path parent = fs::path(out_path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
  }
  write_trials_file(out_path, ds);
}

void cmd_train(const RunConfig& config) {
  const Dataset ds = load_dataset(config);
  ensure_out_dir(config);

  CvOptions options;
  options.layout = config.layout;
  options.channel_subset = config.channel_subset;
  options.architecture = config.architecture;
  options.train = config.train;
  options.train.seed = config.seed;
  options.k = config.k;
  options.seed = config.seed;

  CvResult result = run_cv(ds, options);
  for (std::size_t fold = 0; fold < result.checkpoints.size(); ++fold) {
    const std::string path = checkpoint_path(config, fold);
    result.checkpoints[fold].save(path);
    result.report.checkpoint_files.push_back(path);
  }
  write_file(config.out_dir + "/report.json", report_to_json(result.report));
  write_file(config.out_dir + "/report.txt", report_to_text(result.report));
}

void cmd_explain(const RunConfig& config) {
  const Dataset ds = load_dataset(config);
  ensure_out_dir(config);

  std::vector<Checkpoint> checkpoints;
  for (std::size_t fold = 0; fold < config.k; ++fold) {
    const std::string path = checkpoint_path(config, fold);
    if (!fs::exists(path)) {
      throw CheckpointMismatch("checkpoint " + path + " not found");
    }
    checkpoints.push_back(Checkpoint::load(path));
  }
  const FoldPlan folds = make_folds(ds, config.k, config.seed);

  std::vector<RelevanceMap> maps;
  std::ostringstream per_trial;
  per_trial << "subject_id,trial_id,target_class,channel,node_index,relevance\n";
  for (const auto& trial : ds.trials) {
    const InputSample sample =
        assemble_input(trial, config.layout, config.channel_subset);
    const Checkpoint& ckpt =
        checkpoints[folds.assignments.at(trial.subject_id)];
    const Shape expected{sample.num_channels(), sample.length()};
    if (ckpt.graph.input_shape() != expected) {
      throw CheckpointMismatch("checkpoint input shape does not match config");
    }
    int target = sample.label;
    if (config.explain_predicted_class) {
      target = predict(ckpt, sample).class_index;
    }
    RelevanceMap map = explain(ckpt, sample, target, config.lrp);
    const auto curves = split_relevance_channels(
        map.relevance, config.layout, config.channel_subset, ds.series_length);
    for (const auto& [channel, curve] : curves) {
      for (std::size_t q = 0; q < curve.size(); ++q) {
        per_trial << trial.subject_id << ',' << trial.trial_id << ',' << target
                  << ',' << channel << ',' << q << ',' << format_double(curve[q])
                  << "\n";
      }
    }
    maps.push_back(std::move(map));
  }
  write_file(config.out_dir + "/relevance.csv", per_trial.str());

  const auto class_means = average_relevance(maps);
  std::ostringstream mean_csv;
  mean_csv << "class,channel,node_index,relevance\n";
  for (const auto& [cls, tensor] : class_means) {
    const auto curves = split_relevance_channels(
        tensor, config.layout, config.channel_subset, ds.series_length);
    for (const auto& [channel, curve] : curves) {
      for (std::size_t q = 0; q < curve.size(); ++q) {
        mean_csv << cls << ',' << channel << ',' << q << ','
                 << format_double(curve[q]) << "\n";
      }
    }
  }
  write_file(config.out_dir + "/relevance_mean.csv", mean_csv.str());

  if (class_means.count(0) && class_means.count(1)) {
    const Tensor total = total_relevance(class_means.at(0), class_means.at(1));
    const auto curves = split_relevance_channels(
        total, config.layout, config.channel_subset, ds.series_length);
    std::ostringstream total_csv;
    total_csv << "channel,node_index,relevance\n";
    for (const auto& [channel, curve] : curves) {
      for (std::size_t q = 0; q < curve.size(); ++q) {
        total_csv << channel << ',' << q << ',' << format_double(curve[q])
                  << "\n";
      }
    }
    write_file(config.out_dir + "/relevance_total.csv", total_csv.str());
  } else {
    throw EmptyGroup("need relevance maps for both classes");
  }
}

std::pair<CurveGroup, CurveGroup> spm_groups(const Dataset& dataset,
                                             const std::string& channel,
                                             bool subject_means,
                                             bool normalized) {
  const ChannelId id = ChannelId::from_name(channel);
  CurveGroup a{"female", {}}, b{"male", {}};
  if (!subject_means) {
    for (const auto& trial : dataset.trials) {
      auto curve = trial.curve(id);
      if (normalized) curve = min_max_normalize(curve);
      (trial.sex == Sex::Female ? a : b).curves.push_back(std::move(curve));
    }
  } else {
    std::map<std::string, std::pair<std::vector<double>, std::size_t>> acc;
    std::map<std::string, Sex> sex_of;
    for (const auto& trial : dataset.trials) {
      auto curve = trial.curve(id);
      if (normalized) curve = min_max_normalize(curve);
      auto& [sum, count] = acc[trial.subject_id];
      if (sum.empty()) sum.assign(curve.size(), 0.0);
      for (std::size_t q = 0; q < curve.size(); ++q) sum[q] += curve[q];
      ++count;
      sex_of[trial.subject_id] = trial.sex;
    }
    for (auto& [subject, sc] : acc) {
      auto& [sum, count] = sc;
      for (auto& v : sum) v /= static_cast<double>(count);
      (sex_of[subject] == Sex::Female ? a : b).curves.push_back(std::move(sum));
    }
  }
  return {std::move(a), std::move(b)};
}

void cmd_spm(const RunConfig& config) {
  const Dataset ds = load_dataset(config);
  ensure_out_dir(config);

  SpmOptions options{config.spm_alpha, config.spm_two_sided};
  std::ostringstream csv, summary;
  csv << "channel,node_index,t,d\n";
  summary << "alpha=" << format_double(config.spm_alpha) << "\n";
  summary << "sides=" << (config.spm_two_sided ? 2 : 1) << "\n";
  summary << "unit=" << (config.spm_subject_means ? "subject" : "trial") << "\n";
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const std::string channel = ChannelId::from_index(c).name();
    auto [a, b] = spm_groups(ds, channel, config.spm_subject_means,
                             config.spm_on_normalized);
    const SpmResult res = spm_two_sample(a, b, options);
    for (std::size_t q = 0; q < res.t_curve.t.size(); ++q) {
      csv << channel << ',' << q << ',' << format_double(res.t_curve.t[q])
          << ',' << format_double(res.d_curve[q]) << "\n";
    }
    summary << "channel=" << channel << " nu=" << format_double(res.t_curve.nu)
            << " fwhm=" << format_double(res.fwhm)
            << " resels=" << format_double(res.resels)
            << " t_star=" << format_double(res.t_star) << " clusters=";
    for (std::size_t i = 0; i < res.clusters.size(); ++i) {
      if (i) summary << ',';
      summary << res.clusters[i].start << '-' << res.clusters[i].end << ':'
              << format_double(res.clusters[i].peak_t);
    }
    summary << "\n";
  }
  write_file(config.out_dir + "/spm.csv", csv.str());
  write_file(config.out_dir + "/spm_summary.txt", summary.str());
}

std::map<std::string, std::vector<double>> read_relevance_total(
    const std::string& path) {
  std::ifstream in = open_required(path);
  std::map<std::string, std::vector<double>> out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 3) throw SchemaError("bad relevance_total row: " + line);
    auto& curve = out[f[0]];
    const std::size_t idx = std::stoul(f[1]);
    if (curve.size() <= idx) curve.resize(idx + 1, 0.0);
    curve[idx] = parse_double(f[2], "relevance_total");
  }
  if (out.empty()) throw MissingInput("relevance_total is empty: " + path);
  return out;
}

std::map<int, std::map<std::string, std::vector<double>>> read_relevance_mean(
    const std::string& path) {
  std::ifstream in = open_required(path);
  std::map<int, std::map<std::string, std::vector<double>>> out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 4) throw SchemaError("bad relevance_mean row: " + line);
    auto& curve = out[std::stoi(f[0])][f[1]];
    const std::size_t idx = std::stoul(f[2]);
    if (curve.size() <= idx) curve.resize(idx + 1, 0.0);
    curve[idx] = parse_double(f[3], "relevance_mean");
  }
  return out;
}

std::map<std::string, SpmResult> read_spm_outputs(
    const std::string& csv_path, const std::string& summary_path) {
  std::map<std::string, SpmResult> out;
  {
    std::ifstream in = open_required(csv_path);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split_line(line);
      if (f.size() != 4) throw SchemaError("bad spm.csv row: " + line);
      SpmResult& res = out[f[0]];
      const std::size_t idx = std::stoul(f[1]);
      if (res.t_curve.t.size() <= idx) {
        res.t_curve.t.resize(idx + 1, 0.0);
        res.t_curve.degenerate.resize(idx + 1, false);
        res.d_curve.resize(idx + 1, 0.0);
      }
      res.t_curve.t[idx] = parse_double(f[2], "spm t");
      res.t_curve.degenerate[idx] = std::isinf(res.t_curve.t[idx]);
      res.d_curve[idx] = parse_double(f[3], "spm d");
    }
  }
  {
    std::ifstream in = open_required(summary_path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.starts_with("channel=")) continue;
      std::istringstream is(line);
      std::string token, channel;
      SpmResult* res = nullptr;
      while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "channel") {
          channel = value;
          res = &out[channel];
        } else if (res == nullptr) {
          throw SchemaError("spm summary: values before channel key");
        } else if (key == "nu") {
          res->t_curve.nu = parse_double(value, "nu");
        } else if (key == "fwhm") {
          res->fwhm = parse_double(value, "fwhm");
        } else if (key == "resels") {
          res->resels = parse_double(value, "resels");
        } else if (key == "t_star") {
          res->t_star = parse_double(value, "t_star");
        } else if (key == "clusters") {
          std::istringstream cs(value);
          std::string item;
          while (std::getline(cs, item, ',')) {
            const auto dash = item.find('-');
            const auto colon = item.find(':', dash + 1);
            if (dash == std::string::npos || colon == std::string::npos) {
              throw SchemaError("bad cluster triple '" + item + "'");
            }
            Cluster cl;
            cl.start = std::stoul(item.substr(0, dash));
            cl.end = std::stoul(item.substr(dash + 1, colon - dash - 1));
            cl.peak_t = parse_double(item.substr(colon + 1), "cluster peak");
            res->clusters.push_back(cl);
          }
        }
      }
    }
  }
  if (out.empty()) throw MissingInput("no SPM outputs in " + csv_path);
  return out;
}

void cmd_report(const RunConfig& config) {
  const Dataset ds = load_dataset(config);
  ensure_out_dir(config);

  PanelData data;
  data.series_length = ds.series_length;
  data.class0_stats = aggregate_signals(ds, 0);
  data.class1_stats = aggregate_signals(ds, 1);
  auto means = read_relevance_mean(config.out_dir + "/relevance_mean.csv");
  if (means.count(0)) data.mean_rel0 = means.at(0);
  if (means.count(1)) data.mean_rel1 = means.at(1);
  data.total_rel = read_relevance_total(config.out_dir + "/relevance_total.csv");
  data.spm = read_spm_outputs(config.out_dir + "/spm.csv",
                              config.out_dir + "/spm_summary.txt");

  write_file(config.out_dir + "/panel_A.svg", render_panel_a(data));
  write_file(config.out_dir + "/panel_B.svg", render_panel_b(data));
  write_file(config.out_dir + "/panel_C.svg", render_panel_c(data));
  write_file(config.out_dir + "/panel_D.svg", render_panel_d(data));

  // Region sets: LRP mass regions, SPM clusters, optional literature file.
  const RegionSet lrp_regions =
      relevance_regions(data.total_rel, config.mass_fraction);
  RegionSet spm_regions;
  spm_regions.provenance = "spm";
  for (const auto& [channel, res] : data.spm) {
    std::size_t i = 0;
    for (const auto& cluster : res.clusters) {
      spm_regions.regions.push_back({channel + "_spm_" + std::to_string(i++),
                                     channel, cluster.start, cluster.end});
    }
  }
  std::vector<RegionSet> computed = {lrp_regions, spm_regions};
  write_regions_file(config.out_dir + "/regions_computed.csv", computed);

  std::vector<std::pair<std::string, OverlapScore>> table;
  table.emplace_back("lrp vs spm", overlap_score(lrp_regions, spm_regions));
  if (!config.regions_path.empty()) {
    const RegionSet literature = parse_regions_file(config.regions_path);
    table.emplace_back("lrp vs literature",
                       overlap_score(lrp_regions, literature));
    table.emplace_back("spm vs literature",
                       overlap_score(spm_regions, literature));
  }
  write_file(config.out_dir + "/overlap_table.txt", render_overlap_table(table));
}

}  // namespace gaitxai
