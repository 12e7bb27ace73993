#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gaitxai/types.hpp"

namespace gaitxai {

enum class CsvSchema { Canonical, GaitrecAdapter };

// Column mapping for the GAITREC adapter, loaded from a plain-text
// key=value file (see README for the documented keys and defaults).
struct GaitrecMapping {
  std::string subject_id_col = "SUBJECT_ID";
  std::string trial_id_col = "TRIAL_ID";
  std::string sex_col = "SEX";
  std::string body_mass_col = "BODY_MASS";
  std::string channel_col = "CHANNEL";
  std::string sex_female = "0";
  std::string sex_male = "1";
  std::map<std::string, std::string> channel_names;  // canonical -> source name

  static GaitrecMapping load(std::istream& in);
  static GaitrecMapping load_file(const std::string& path);
};

Dataset parse_trials(std::istream& in, CsvSchema schema = CsvSchema::Canonical,
                     const GaitrecMapping& mapping = {});
Dataset parse_trials_file(const std::string& path,
                          CsvSchema schema = CsvSchema::Canonical,
                          const GaitrecMapping& mapping = {});

// Canonical CSV writer; write_trials(parse_trials(f)) is byte-identical to f
// for files produced by this writer.
void write_trials(std::ostream& out, const Dataset& dataset);
void write_trials_file(const std::string& path, const Dataset& dataset);

std::vector<double> min_max_normalize(const std::vector<double>& series);

enum class InputLayout { TemporalConcat, ChannelStack };

InputSample assemble_input(const GaitTrial& trial, InputLayout layout,
                           const std::set<Component>& channel_subset);

struct FoldPlan {
  std::size_t k = 0;
  std::map<std::string, std::size_t> assignments;  // subject_id -> fold
};

FoldPlan make_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

struct SyntheticSpec {
  // Per-class subject counts; asymmetric class sizes are allowed so real
  // cohort proportions can be mimicked.
  std::size_t n_subjects_class0 = 20;
  std::size_t n_subjects_class1 = 20;
  std::size_t trials_per_subject = 5;
  std::size_t series_length = 100;
  std::size_t bump_center = 50;
  std::size_t bump_width = 16;       // planted window is [center-width, center+width]
  double bump_amplitude = 0.3;       // added to the left-V channel of class 1
  double noise_sd = 0.05;

  void validate() const;
};

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace gaitxai
