#include "gaitxai/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gaitxai {

namespace {

double to_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': bad numeric value '" + v + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': bad integer value '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw ConfigError("key '" + key + "': expected boolean, got '" + v + "'");
}

std::set<Component> parse_channels(const std::string& v) {
  std::set<Component> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item == "V") out.insert(Component::V);
    else if (item == "AP") out.insert(Component::AP);
    else if (item == "ML") out.insert(Component::ML);
    else throw ConfigError("unknown channel component '" + item + "'");
  }
  if (out.empty()) throw ConfigError("channel subset must be non-empty");
  return out;
}

std::vector<LayerSpec> parse_architecture(const std::string& v) {
  std::vector<LayerSpec> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ';')) {
    // trim
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(layer_spec_from_string(item.substr(b, e - b + 1)));
  }
  return out;
}

}  // namespace

void apply_override(RunConfig& c, const std::string& key,
                    const std::string& value) {
  if (key == "data.path") c.data_path = value;
  else if (key == "data.schema") {
    if (value == "canonical") c.schema = CsvSchema::Canonical;
    else if (value == "gaitrec") c.schema = CsvSchema::GaitrecAdapter;
    else throw ConfigError("data.schema must be canonical or gaitrec");
  }
  else if (key == "data.mapping") c.mapping_path = value;
  else if (key == "input.layout") {
    if (value == "temporal_concat") c.layout = InputLayout::TemporalConcat;
    else if (value == "channel_stack") c.layout = InputLayout::ChannelStack;
    else throw ConfigError("input.layout must be temporal_concat or channel_stack");
  }
  else if (key == "input.channels") c.channel_subset = parse_channels(value);
  else if (key == "arch.layers") c.architecture = parse_architecture(value);
  else if (key == "train.epochs") c.train.epochs = to_u64(value, key);
  else if (key == "train.batch_size") c.train.batch_size = to_u64(value, key);
  else if (key == "train.optimizer") {
    if (value == "adam") c.train.optimizer = OptimizerKind::Adam;
    else if (value == "sgd") c.train.optimizer = OptimizerKind::Sgd;
    else throw ConfigError("train.optimizer must be adam or sgd");
  }
  else if (key == "train.lr") c.train.lr = to_double(value, key);
  else if (key == "train.momentum") c.train.momentum = to_double(value, key);
  else if (key == "train.beta1") c.train.beta1 = to_double(value, key);
  else if (key == "train.beta2") c.train.beta2 = to_double(value, key);
  else if (key == "train.eps") c.train.eps_adam = to_double(value, key);
  else if (key == "cv.k") c.k = to_u64(value, key);
  else if (key == "lrp.rule") {
    if (value == "epsilon") c.lrp.rule.kind = LrpRule::Kind::Epsilon;
    else if (value == "alphabeta") c.lrp.rule.kind = LrpRule::Kind::AlphaBeta;
    else throw ConfigError("lrp.rule must be epsilon or alphabeta");
  }
  else if (key == "lrp.epsilon") {
    const double e = to_double(value, key);
    if (e < 0.0) throw ConfigError("lrp.epsilon must be nonnegative");
    c.lrp.rule.epsilon = e;
  }
  else if (key == "lrp.alpha") {
    const double a = to_double(value, key);
    if (a < 1.0) throw ConfigError("lrp.alpha must be >= 1");
    c.lrp.rule.alpha = a;
    c.lrp.rule.beta = a - 1.0;
  }
  else if (key == "lrp.target") {
    if (value == "true") c.explain_predicted_class = false;
    else if (value == "predicted") c.explain_predicted_class = true;
    else throw ConfigError("lrp.target must be true or predicted");
  }
  else if (key == "spm.alpha") {
    const double a = to_double(value, key);
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("spm.alpha must be in (0,1)");
    c.spm_alpha = a;
  }
  else if (key == "spm.sides") {
    if (value == "1") c.spm_two_sided = false;
    else if (value == "2") c.spm_two_sided = true;
    else throw ConfigError("spm.sides must be 1 or 2");
  }
  else if (key == "spm.unit") {
    if (value == "trial") c.spm_subject_means = false;
    else if (value == "subject") c.spm_subject_means = true;
    else throw ConfigError("spm.unit must be trial or subject");
  }
  else if (key == "spm.normalized") c.spm_on_normalized = to_bool(value, key);
  else if (key == "report.mass_fraction") {
    const double f = to_double(value, key);
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("report.mass_fraction must be in (0,1]");
    c.mass_fraction = f;
  }
  else if (key == "report.regions") c.regions_path = value;
  else if (key == "seed") {
    c.seed = to_u64(value, key);
    c.train.seed = c.seed;
  }
  else if (key == "out") c.out_dir = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataNotFound("cannot open config file " + path);
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        " has no '='");
    }
    apply_override(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

}  // namespace gaitxai
