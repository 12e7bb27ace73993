#include "gaitxai/data_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "gaitxai/rng.hpp"

namespace gaitxai {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
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

double parse_double(const std::string& s, const char* context) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e) {
    throw SchemaError(std::string("bad numeric value '") + s + "' in " + context);
  }
  if (!std::isfinite(v)) {
    throw NonFiniteValue(std::string("non-finite value in ") + context);
  }
  return v;
}

// Shortest round-trip representation; keeps canonical files byte-stable.
std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

struct TrialKey {
  std::string subject;
  std::string trial;
  bool operator<(const TrialKey& o) const {
    return std::tie(subject, trial) < std::tie(o.subject, o.trial);
  }
};

Dataset assemble_dataset(std::map<TrialKey, GaitTrial>&& partial,
                         std::size_t series_length) {
  Dataset ds;
  ds.series_length = series_length;
  for (auto& [key, trial] : partial) {
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      if (trial.curves[c].empty()) {
        throw SchemaError("trial (" + key.subject + ", " + key.trial +
                          ") is missing channel " +
                          ChannelId::from_index(c).name());
      }
    }
    ds.trials.push_back(std::move(trial));
  }
  ds.validate();
  return ds;
}

}  // namespace

ChannelId ChannelId::from_name(const std::string& s) {
  for (std::size_t i = 0; i < kNumChannels; ++i) {
    ChannelId id = ChannelId::from_index(i);
    if (id.name() == s) return id;
  }
  throw SchemaError("unknown channel name '" + s + "'");
}

void GaitTrial::validate() const {
  const std::size_t t = curves[0].size();
  if (t < 2) {
    throw LengthMismatch("trial " + trial_id + ": curve length must be >= 2");
  }
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    if (curves[c].size() != t) {
      throw LengthMismatch("trial " + trial_id + ": channel " +
                           ChannelId::from_index(c).name() +
                           " length differs");
    }
    for (double v : curves[c]) {
      if (!std::isfinite(v)) {
        throw NonFiniteValue("trial " + trial_id + ": non-finite curve value");
      }
    }
  }
  if (!(body_mass_kg > 0.0)) {
    throw SchemaError("trial " + trial_id + ": body mass must be positive");
  }
}

void Dataset::validate() const {
  if (trials.empty()) throw EmptyDataset("dataset has no trials");
  std::map<std::string, Sex> seen;
  for (const auto& trial : trials) {
    trial.validate();
    if (trial.curves[0].size() != series_length) {
      throw LengthMismatch("trial " + trial.trial_id +
                           ": length differs from dataset T");
    }
    auto [it, inserted] = seen.emplace(trial.subject_id, trial.sex);
    if (!inserted && it->second != trial.sex) {
      throw LabelConflict("subject " + trial.subject_id +
                          " has conflicting sex labels");
    }
  }
}

GaitrecMapping GaitrecMapping::load(std::istream& in) {
  GaitrecMapping m;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("mapping line without '=': " + line);
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key == "subject_id_col") m.subject_id_col = value;
    else if (key == "trial_id_col") m.trial_id_col = value;
    else if (key == "sex_col") m.sex_col = value;
    else if (key == "body_mass_col") m.body_mass_col = value;
    else if (key == "channel_col") m.channel_col = value;
    else if (key == "sex_female") m.sex_female = value;
    else if (key == "sex_male") m.sex_male = value;
    else if (key.starts_with("channel_")) m.channel_names[key.substr(8)] = value;
    else throw ConfigError("unknown mapping key '" + key + "'");
  }
  return m;
}

GaitrecMapping GaitrecMapping::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataNotFound("cannot open mapping file " + path);
  return load(in);
}

Dataset parse_trials(std::istream& in, CsvSchema schema,
                     const GaitrecMapping& mapping) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty input");
  const auto header = split_csv(line);

  std::size_t col_subject, col_trial, col_sex, col_mass, col_channel;
  std::size_t first_value;
  if (schema == CsvSchema::Canonical) {
    const std::vector<std::string> fixed = {"subject_id", "trial_id", "sex",
                                            "body_mass_kg", "channel"};
    if (header.size() < fixed.size() + 2) {
      throw SchemaError("canonical header too short");
    }
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      if (header[i] != fixed[i]) {
        throw SchemaError("expected column '" + fixed[i] + "', found '" +
                          header[i] + "'");
      }
    }
    for (std::size_t i = fixed.size(); i < header.size(); ++i) {
      const std::string expected = "v_" + std::to_string(i - fixed.size());
      if (header[i] != expected) {
        throw SchemaError("expected column '" + expected + "', found '" +
                          header[i] + "'");
      }
    }
    col_subject = 0;
    col_trial = 1;
    col_sex = 2;
    col_mass = 3;
    col_channel = 4;
    first_value = 5;
  } else {
    auto find_col = [&](const std::string& name) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) {
        throw SchemaError("mapped column '" + name + "' not found in header");
      }
      return static_cast<std::size_t>(it - header.begin());
    };
    col_subject = find_col(mapping.subject_id_col);
    col_trial = find_col(mapping.trial_id_col);
    col_sex = find_col(mapping.sex_col);
    col_mass = find_col(mapping.body_mass_col);
    col_channel = find_col(mapping.channel_col);
    first_value = std::max({col_subject, col_trial, col_sex, col_mass,
                            col_channel}) + 1;
    if (first_value >= header.size()) {
      throw SchemaError("no value columns after metadata columns");
    }
  }
  const std::size_t series_length = header.size() - first_value;
  if (series_length < 2) throw SchemaError("fewer than two value columns");

  // Reverse channel lookup for the adapter.
  std::map<std::string, ChannelId> channel_lookup;
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    const ChannelId id = ChannelId::from_index(c);
    std::string source_name = id.name();
    if (schema == CsvSchema::GaitrecAdapter) {
      auto it = mapping.channel_names.find(id.name());
      if (it != mapping.channel_names.end()) source_name = it->second;
    }
    channel_lookup[source_name] = id;
  }

  std::map<TrialKey, GaitTrial> partial;
  std::map<std::string, Sex> subject_sex;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    const std::string ctx = "line " + std::to_string(line_no);
    if (fields.size() != header.size()) {
      throw LengthMismatch(ctx + ": expected " +
                           std::to_string(series_length) + " values");
    }

    Sex sex;
    const std::string& sex_field = fields[col_sex];
    if (schema == CsvSchema::Canonical) {
      if (sex_field == "F") sex = Sex::Female;
      else if (sex_field == "M") sex = Sex::Male;
      else throw SchemaError(ctx + ": sex must be F or M");
    } else {
      if (sex_field == mapping.sex_female) sex = Sex::Female;
      else if (sex_field == mapping.sex_male) sex = Sex::Male;
      else throw SchemaError(ctx + ": unmapped sex value '" + sex_field + "'");
    }

    auto chan_it = channel_lookup.find(fields[col_channel]);
    if (chan_it == channel_lookup.end()) {
      throw SchemaError(ctx + ": unknown channel '" + fields[col_channel] + "'");
    }

    auto [sex_it, fresh] = subject_sex.emplace(fields[col_subject], sex);
    if (!fresh && sex_it->second != sex) {
      throw LabelConflict("subject " + fields[col_subject] +
                          " has conflicting sex labels");
    }

    TrialKey key{fields[col_subject], fields[col_trial]};
    auto [trial_it, new_trial] = partial.try_emplace(key);
    GaitTrial& trial = trial_it->second;
    if (new_trial) {
      trial.subject_id = key.subject;
      trial.trial_id = key.trial;
      trial.sex = sex;
      trial.body_mass_kg = parse_double(fields[col_mass], "body_mass_kg");
    }
    auto& curve = trial.curves[chan_it->second.index()];
    if (!curve.empty()) {
      throw SchemaError(ctx + ": duplicate channel for trial " + key.trial);
    }
    curve.reserve(series_length);
    for (std::size_t i = first_value; i < fields.size(); ++i) {
      curve.push_back(parse_double(fields[i], "curve value"));
    }
  }

  return assemble_dataset(std::move(partial), series_length);
}

Dataset parse_trials_file(const std::string& path, CsvSchema schema,
                          const GaitrecMapping& mapping) {
  std::ifstream in(path);
  if (!in) throw DataNotFound("cannot open data file " + path);
  return parse_trials(in, schema, mapping);
}

void write_trials(std::ostream& out, const Dataset& dataset) {
  out << "subject_id,trial_id,sex,body_mass_kg,channel";
  for (std::size_t i = 0; i < dataset.series_length; ++i) out << ",v_" << i;
  out << "\n";
  for (const auto& trial : dataset.trials) {
    for (std::size_t c = 0; c < kNumChannels; ++c) {
      out << trial.subject_id << ',' << trial.trial_id << ','
          << (trial.sex == Sex::Female ? 'F' : 'M') << ','
          << format_double(trial.body_mass_kg) << ','
          << ChannelId::from_index(c).name();
      for (double v : trial.curves[c]) out << ',' << format_double(v);
      out << "\n";
    }
  }
}

void write_trials_file(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write_trials(out, dataset);
}

std::vector<double> min_max_normalize(const std::vector<double>& series) {
  if (series.empty()) throw LengthMismatch("cannot normalize empty series");
  double lo = series[0], hi = series[0];
  for (double v : series) {
    if (!std::isfinite(v)) throw NonFiniteValue("non-finite value in series");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::vector<double> out(series.size());
  if (hi == lo) {
    // Constant signal carries no information; mid-range keeps it in [0,1].
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  // Per-element division keeps the map exactly idempotent (max maps to 1.0).
  for (std::size_t i = 0; i < series.size(); ++i) {
    out[i] = (series[i] - lo) / (hi - lo);
  }
  return out;
}

InputSample assemble_input(const GaitTrial& trial, InputLayout layout,
                           const std::set<Component>& channel_subset) {
  if (channel_subset.empty()) {
    throw ShapeMismatch("channel subset must be non-empty");
  }
  InputSample sample;
  sample.label = class_of(trial.sex);
  sample.subject_id = trial.subject_id;
  sample.trial_id = trial.trial_id;

  for (Component comp : {Component::V, Component::AP, Component::ML}) {
    if (!channel_subset.count(comp)) continue;
    auto left = min_max_normalize(trial.curve({Side::Left, comp}));
    auto right = min_max_normalize(trial.curve({Side::Right, comp}));
    if (layout == InputLayout::TemporalConcat) {
      left.insert(left.end(), right.begin(), right.end());
      sample.channels.push_back(std::move(left));
    } else {
      sample.channels.push_back(std::move(left));
      sample.channels.push_back(std::move(right));
    }
  }
  return sample;
}

FoldPlan make_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw TooFewSubjects("fold count must be positive");
  // Subjects per class in first-appearance order.
  std::array<std::vector<std::string>, 2> by_class;
  {
    std::set<std::string> seen;
    for (const auto& trial : dataset.trials) {
      if (seen.insert(trial.subject_id).second) {
        by_class[class_of(trial.sex)].push_back(trial.subject_id);
      }
    }
  }
  const std::size_t minority =
      std::min(by_class[0].size(), by_class[1].size());
  if (k > 1 && k > minority) {
    throw TooFewSubjects("k=" + std::to_string(k) +
                         " exceeds minority-class subject count " +
                         std::to_string(minority));
  }

  FoldPlan plan;
  plan.k = k;
  Rng rng(seed);
  for (int cls = 0; cls < 2; ++cls) {
    auto subjects = by_class[cls];
    rng.shuffle(subjects);
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      // Class 1 is dealt in reverse so fold totals stay even.
      const std::size_t fold = (cls == 0) ? i % k : k - 1 - (i % k);
      plan.assignments[subjects[i]] = fold;
    }
  }
  return plan;
}

void SyntheticSpec::validate() const {
  if (n_subjects_class0 == 0 || n_subjects_class1 == 0 ||
      trials_per_subject == 0) {
    throw BadFlag("subject and trial counts must be positive");
  }
  if (series_length < 2) throw BadFlag("series length must be >= 2");
  if (bump_center < bump_width || bump_center + bump_width >= series_length) {
    throw BadFlag("bump window [center +/- width] must lie inside [0, T)");
  }
  if (noise_sd < 0.0) throw BadFlag("noise_sd must be nonnegative");
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t t_len = spec.series_length;

  // Fixed double-hump base template, scaled per GRF component.
  auto base_value = [&](Component comp, std::size_t i) {
    const double u = static_cast<double>(i) / static_cast<double>(t_len - 1);
    const double hump = std::exp(-0.5 * std::pow((u - 0.3) / 0.1, 2)) +
                        std::exp(-0.5 * std::pow((u - 0.7) / 0.1, 2));
    static constexpr double scales[3] = {1.0, 0.4, 0.2};
    return scales[static_cast<int>(comp)] * hump;
  };
  const double sigma = std::max<std::size_t>(spec.bump_width, 1) / 2.0;
  auto bump_value = [&](std::size_t i) {
    const double d = static_cast<double>(i) - static_cast<double>(spec.bump_center);
    if (std::abs(d) > static_cast<double>(spec.bump_width)) return 0.0;
    return spec.bump_amplitude * std::exp(-0.5 * (d / sigma) * (d / sigma));
  };

  Dataset ds;
  ds.series_length = t_len;
  Rng rng(seed);
  const ChannelId bump_channel{Side::Left, Component::V};
  for (int cls = 0; cls < 2; ++cls) {
    const std::size_t n_subjects =
        cls == 0 ? spec.n_subjects_class0 : spec.n_subjects_class1;
    for (std::size_t s = 0; s < n_subjects; ++s) {
      char subject[16];
      std::snprintf(subject, sizeof(subject), "%c%03zu", cls == 0 ? 'F' : 'M', s);
      for (std::size_t tr = 0; tr < spec.trials_per_subject; ++tr) {
        GaitTrial trial;
        trial.subject_id = subject;
        trial.trial_id = "T" + std::to_string(tr);
        trial.sex = cls == 0 ? Sex::Female : Sex::Male;
        trial.body_mass_kg = cls == 0 ? 65.0 : 80.0;
        for (std::size_t c = 0; c < kNumChannels; ++c) {
          const ChannelId id = ChannelId::from_index(c);
          auto& curve = trial.curves[c];
          curve.resize(t_len);
          for (std::size_t i = 0; i < t_len; ++i) {
            double v = base_value(id.component, i);
            if (cls == 1 && id == bump_channel) v += bump_value(i);
            if (spec.noise_sd > 0.0) v += rng.normal(0.0, spec.noise_sd);
            curve[i] = v;
          }
        }
        ds.trials.push_back(std::move(trial));
      }
    }
  }
  return ds;
}

}  // namespace gaitxai
