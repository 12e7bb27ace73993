#include "gaitxai/nn.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gaitxai/rng.hpp"

namespace gaitxai {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

Shape shape_after(const LayerSpec& spec, Shape in) {
  return std::visit(
      [&](const auto& s) -> Shape {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Conv1dSpec>) {
          if (s.kernel == 0 || s.stride == 0 || s.out_channels == 0) {
            throw ShapeMismatch("conv1d: kernel/stride/channels must be positive");
          }
          const std::size_t padded = in.length + 2 * s.padding;
          if (s.kernel > padded) {
            throw ShapeMismatch("conv1d: kernel exceeds padded input length");
          }
          return {s.out_channels, (padded - s.kernel) / s.stride + 1};
        } else if constexpr (std::is_same_v<T, MaxPool1dSpec>) {
          if (s.window == 0 || s.stride == 0) {
            throw ShapeMismatch("maxpool1d: window/stride must be positive");
          }
          if (s.window > in.length) {
            throw ShapeMismatch("maxpool1d: window exceeds input length");
          }
          return {in.channels, (in.length - s.window) / s.stride + 1};
        } else if constexpr (std::is_same_v<T, GlobalAvgPoolSpec>) {
          return {in.channels, 1};
        } else if constexpr (std::is_same_v<T, DenseSpec>) {
          if (s.out_units == 0) throw ShapeMismatch("dense: out_units must be positive");
          return {1, s.out_units};
        } else if constexpr (std::is_same_v<T, FlattenSpec>) {
          return {1, in.channels * in.length};
        } else {
          return in;  // ReLU
        }
      },
      spec);
}

std::size_t fan_in(const LayerSpec& spec, Shape in) {
  if (const auto* conv = std::get_if<Conv1dSpec>(&spec)) {
    return in.channels * conv->kernel;
  }
  if (std::holds_alternative<DenseSpec>(spec)) {
    return in.channels * in.length;
  }
  return 0;
}

void param_sizes(const LayerSpec& spec, Shape in, std::size_t& n_weights,
                 std::size_t& n_biases) {
  n_weights = n_biases = 0;
  if (const auto* conv = std::get_if<Conv1dSpec>(&spec)) {
    n_weights = conv->out_channels * in.channels * conv->kernel;
    n_biases = conv->out_channels;
  } else if (const auto* dense = std::get_if<DenseSpec>(&spec)) {
    n_weights = dense->out_units * in.channels * in.length;
    n_biases = dense->out_units;
  }
}

}  // namespace

std::string layer_spec_to_string(const LayerSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Conv1dSpec>) {
          os << "conv1d " << s.out_channels << ' ' << s.kernel << ' '
             << s.stride << ' ' << s.padding;
        } else if constexpr (std::is_same_v<T, ReluSpec>) {
          os << "relu";
        } else if constexpr (std::is_same_v<T, MaxPool1dSpec>) {
          os << "maxpool1d " << s.window << ' ' << s.stride;
        } else if constexpr (std::is_same_v<T, GlobalAvgPoolSpec>) {
          os << "gap";
        } else if constexpr (std::is_same_v<T, DenseSpec>) {
          os << "dense " << s.out_units;
        } else {
          os << "flatten";
        }
      },
      spec);
  return os.str();
}

LayerSpec layer_spec_from_string(const std::string& text) {
  std::istringstream is(text);
  std::string kind;
  is >> kind;
  auto read_sizes = [&](std::size_t n) {
    std::vector<std::size_t> v(n);
    for (auto& x : v) {
      if (!(is >> x)) throw ConfigError("bad layer spec '" + text + "'");
    }
    return v;
  };
  if (kind == "conv1d") {
    auto v = read_sizes(4);
    return Conv1dSpec{v[0], v[1], v[2], v[3]};
  }
  if (kind == "relu") return ReluSpec{};
  if (kind == "maxpool1d") {
    auto v = read_sizes(2);
    return MaxPool1dSpec{v[0], v[1]};
  }
  if (kind == "gap") return GlobalAvgPoolSpec{};
  if (kind == "dense") {
    auto v = read_sizes(1);
    return DenseSpec{v[0]};
  }
  if (kind == "flatten") return FlattenSpec{};
  throw ConfigError("unknown layer kind '" + kind + "'");
}

LayerGraph::LayerGraph(Shape input, std::vector<LayerSpec> layers)
    : input_(input), layers_(std::move(layers)) {
  if (input_.channels == 0 || input_.length == 0) {
    throw ShapeMismatch("input shape must be nonzero");
  }
  shapes_.push_back(input_);
  for (const auto& spec : layers_) {
    shapes_.push_back(shape_after(spec, shapes_.back()));
  }
  if (shapes_.back() != Shape{1, 2}) {
    throw ShapeMismatch("graph must end in exactly 2 logits");
  }
}

LayerGraph default_graph(Shape input) {
  return LayerGraph(input, {Conv1dSpec{8, 9, 1, 4}, ReluSpec{},
                            MaxPool1dSpec{4, 4}, Conv1dSpec{16, 9, 1, 4},
                            ReluSpec{}, GlobalAvgPoolSpec{}, DenseSpec{2}});
}

Params zero_params(const LayerGraph& graph) {
  Params params(graph.layers().size());
  Shape in = graph.input_shape();
  for (std::size_t i = 0; i < graph.layers().size(); ++i) {
    std::size_t nw, nb;
    param_sizes(graph.layers()[i], in, nw, nb);
    params[i].weights.assign(nw, 0.0);
    params[i].biases.assign(nb, 0.0);
    in = graph.output_shape(i);
  }
  return params;
}

Params init_params(const LayerGraph& graph, std::uint64_t seed) {
  Params params = zero_params(graph);
  Rng rng(seed);
  Shape in = graph.input_shape();
  for (std::size_t i = 0; i < graph.layers().size(); ++i) {
    const std::size_t fi = fan_in(graph.layers()[i], in);
    if (fi > 0) {
      const double bound = std::sqrt(1.0 / static_cast<double>(fi));
      for (auto& w : params[i].weights) w = rng.uniform(-bound, bound);
      for (auto& b : params[i].biases) b = rng.uniform(-bound, bound);
    }
    in = graph.output_shape(i);
  }
  return params;
}

Tensor to_tensor(const InputSample& sample) {
  Tensor x(sample.num_channels(), sample.length());
  for (std::size_t c = 0; c < sample.num_channels(); ++c) {
    if (sample.channels[c].size() != x.length) {
      throw ShapeMismatch("input sample channels have unequal lengths");
    }
    std::copy(sample.channels[c].begin(), sample.channels[c].end(),
              x.data.begin() + c * x.length);
  }
  return x;
}

namespace detail {

Tensor conv_forward(const Conv1dSpec& spec, const LayerParams& p,
                    const Tensor& x, Shape out_shape) {
  Tensor y(out_shape.channels, out_shape.length);
  const std::size_t in_c = x.channels;
  const std::size_t k = spec.kernel;
  for (std::size_t oc = 0; oc < y.channels; ++oc) {
    for (std::size_t i = 0; i < y.length; ++i) {
      double acc = p.biases[oc];
      // Window start in padded coordinates; clip to the valid region.
      const std::ptrdiff_t start =
          static_cast<std::ptrdiff_t>(i * spec.stride) -
          static_cast<std::ptrdiff_t>(spec.padding);
      for (std::size_t ic = 0; ic < in_c; ++ic) {
        const double* w = &p.weights[(oc * in_c + ic) * k];
        const double* xi = &x.data[ic * x.length];
        for (std::size_t j = 0; j < k; ++j) {
          const std::ptrdiff_t pos = start + static_cast<std::ptrdiff_t>(j);
          if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(x.length)) {
            acc += w[j] * xi[pos];
          }
        }
      }
      y.at(oc, i) = acc;
    }
  }
  return y;
}

}  // namespace detail

Trace forward(const LayerGraph& graph, const Params& params, const Tensor& x) {
  if (Shape{x.channels, x.length} != graph.input_shape()) {
    throw ShapeMismatch("input tensor shape does not match graph input");
  }
  Trace trace;
  Tensor cur = x;
  for (std::size_t li = 0; li < graph.layers().size(); ++li) {
    trace.inputs.push_back(cur);
    const Shape out_shape = graph.output_shape(li);
    const LayerSpec& spec = graph.layers()[li];
    Tensor next;
    if (const auto* conv = std::get_if<Conv1dSpec>(&spec)) {
      next = detail::conv_forward(*conv, params[li], cur, out_shape);
    } else if (std::holds_alternative<ReluSpec>(spec)) {
      next = cur;
      for (auto& v : next.data) v = std::max(v, 0.0);
    } else if (const auto* pool = std::get_if<MaxPool1dSpec>(&spec)) {
      next = Tensor(out_shape.channels, out_shape.length);
      for (std::size_t c = 0; c < cur.channels; ++c) {
        for (std::size_t i = 0; i < next.length; ++i) {
          double best = cur.at(c, i * pool->stride);
          for (std::size_t j = 1; j < pool->window; ++j) {
            best = std::max(best, cur.at(c, i * pool->stride + j));
          }
          next.at(c, i) = best;
        }
      }
    } else if (std::holds_alternative<GlobalAvgPoolSpec>(spec)) {
      next = Tensor(cur.channels, 1);
      for (std::size_t c = 0; c < cur.channels; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < cur.length; ++i) sum += cur.at(c, i);
        next.at(c, 0) = sum / static_cast<double>(cur.length);
      }
    } else if (std::holds_alternative<DenseSpec>(spec)) {
      next = Tensor(1, out_shape.length);
      const std::size_t n_in = cur.size();
      const LayerParams& p = params[li];
      for (std::size_t o = 0; o < next.length; ++o) {
        double acc = p.biases[o];
        const double* w = &p.weights[o * n_in];
        for (std::size_t j = 0; j < n_in; ++j) acc += w[j] * cur.data[j];
        next.data[o] = acc;
      }
    } else {  // Flatten
      next = Tensor(1, cur.size());
      next.data = cur.data;
    }
    cur = std::move(next);
  }
  trace.output = std::move(cur);
  return trace;
}

std::array<double, 2> softmax2(const std::array<double, 2>& logits) {
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m);
  const double e1 = std::exp(logits[1] - m);
  const double z = e0 + e1;
  return {e0 / z, e1 / z};
}

double loss(const std::array<double, 2>& logits, int label) {
  const double m = std::max(logits[0], logits[1]);
  const double lse = m + std::log(std::exp(logits[0] - m) + std::exp(logits[1] - m));
  return lse - logits[label];
}

Gradients backward(const LayerGraph& graph, const Params& params,
                   const Trace& trace, int label) {
  Gradients grads;
  grads.params = zero_params(graph);

  const auto probs = softmax2(trace.logits());
  Tensor delta(1, 2);
  delta.data[0] = probs[0] - (label == 0 ? 1.0 : 0.0);
  delta.data[1] = probs[1] - (label == 1 ? 1.0 : 0.0);

  for (std::size_t li = graph.layers().size(); li-- > 0;) {
    const LayerSpec& spec = graph.layers()[li];
    const Tensor& x = trace.inputs[li];
    Tensor dx(x.channels, x.length);
    if (const auto* conv = std::get_if<Conv1dSpec>(&spec)) {
      const LayerParams& p = params[li];
      LayerParams& g = grads.params[li];
      const std::size_t in_c = x.channels;
      const std::size_t k = conv->kernel;
      for (std::size_t oc = 0; oc < delta.channels; ++oc) {
        for (std::size_t i = 0; i < delta.length; ++i) {
          const double d = delta.at(oc, i);
          g.biases[oc] += d;
          const std::ptrdiff_t start =
              static_cast<std::ptrdiff_t>(i * conv->stride) -
              static_cast<std::ptrdiff_t>(conv->padding);
          for (std::size_t ic = 0; ic < in_c; ++ic) {
            const double* w = &p.weights[(oc * in_c + ic) * k];
            double* gw = &g.weights[(oc * in_c + ic) * k];
            for (std::size_t j = 0; j < k; ++j) {
              const std::ptrdiff_t pos = start + static_cast<std::ptrdiff_t>(j);
              if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(x.length)) {
                gw[j] += d * x.at(ic, pos);
                dx.at(ic, pos) += d * w[j];
              }
            }
          }
        }
      }
    } else if (std::holds_alternative<ReluSpec>(spec)) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        dx.data[i] = x.data[i] > 0.0 ? delta.data[i] : 0.0;
      }
    } else if (const auto* pool = std::get_if<MaxPool1dSpec>(&spec)) {
      for (std::size_t c = 0; c < x.channels; ++c) {
        for (std::size_t i = 0; i < delta.length; ++i) {
          std::size_t arg = i * pool->stride;
          for (std::size_t j = 1; j < pool->window; ++j) {
            if (x.at(c, i * pool->stride + j) > x.at(c, arg)) {
              arg = i * pool->stride + j;
            }
          }
          dx.at(c, arg) += delta.at(c, i);
        }
      }
    } else if (std::holds_alternative<GlobalAvgPoolSpec>(spec)) {
      for (std::size_t c = 0; c < x.channels; ++c) {
        const double d = delta.at(c, 0) / static_cast<double>(x.length);
        for (std::size_t i = 0; i < x.length; ++i) dx.at(c, i) = d;
      }
    } else if (std::holds_alternative<DenseSpec>(spec)) {
      const LayerParams& p = params[li];
      LayerParams& g = grads.params[li];
      const std::size_t n_in = x.size();
      for (std::size_t o = 0; o < delta.length; ++o) {
        const double d = delta.data[o];
        g.biases[o] += d;
        const double* w = &p.weights[o * n_in];
        double* gw = &g.weights[o * n_in];
        for (std::size_t j = 0; j < n_in; ++j) {
          gw[j] += d * x.data[j];
          dx.data[j] += d * w[j];
        }
      }
    } else {  // Flatten
      dx.data = delta.data;
    }
    delta = std::move(dx);
  }
  grads.input_grad = std::move(delta);
  return grads;
}

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must be in [0,1)");
  if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0) {
    throw ConfigError("adam betas must be in (0,1)");
  }
  if (batch_size == 0) throw ConfigError("batch size must be positive");
}

std::string TrainConfig::echo() const {
  std::ostringstream os;
  os << "epochs=" << epochs << " batch_size=" << batch_size << " optimizer="
     << (optimizer == OptimizerKind::Adam ? "adam" : "sgd")
     << " lr=" << format_double(lr);
  if (optimizer == OptimizerKind::Adam) {
    os << " beta1=" << format_double(beta1) << " beta2=" << format_double(beta2)
       << " eps=" << format_double(eps_adam);
  } else {
    os << " momentum=" << format_double(momentum);
  }
  os << " seed=" << seed;
  return os.str();
}

Checkpoint train(const LayerGraph& graph,
                 const std::vector<InputSample>& training_split,
                 const TrainConfig& config) {
  config.validate();
  if (training_split.empty()) throw DegenerateSplit("empty training split");
  bool has[2] = {false, false};
  for (const auto& s : training_split) has[s.label] = true;
  if (!has[0] || !has[1]) {
    throw DegenerateSplit("training split must contain both classes");
  }

  std::vector<Tensor> xs;
  xs.reserve(training_split.size());
  for (const auto& s : training_split) xs.push_back(to_tensor(s));

  Checkpoint ckpt{1, graph, init_params(graph, config.seed),
                  config.echo(), config.seed, 0.0};

  // Optimizer state mirrors the parameter layout.
  Params m1 = zero_params(graph);  // sgd velocity / adam first moment
  Params m2 = zero_params(graph);  // adam second moment
  std::size_t adam_t = 0;

  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(training_split.size());
  std::iota(order.begin(), order.end(), 0);

  double final_loss = 0.0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t batch_start = 0; batch_start < order.size();
         batch_start += config.batch_size) {
      const std::size_t batch_end =
          std::min(batch_start + config.batch_size, order.size());
      const double inv_n = 1.0 / static_cast<double>(batch_end - batch_start);

      Params acc = zero_params(graph);
      for (std::size_t bi = batch_start; bi < batch_end; ++bi) {
        const std::size_t idx = order[bi];
        Trace trace = forward(graph, ckpt.params, xs[idx]);
        epoch_loss += loss(trace.logits(), training_split[idx].label);
        Gradients g = backward(graph, ckpt.params, trace, training_split[idx].label);
        for (std::size_t li = 0; li < acc.size(); ++li) {
          for (std::size_t j = 0; j < acc[li].weights.size(); ++j) {
            acc[li].weights[j] += g.params[li].weights[j];
          }
          for (std::size_t j = 0; j < acc[li].biases.size(); ++j) {
            acc[li].biases[j] += g.params[li].biases[j];
          }
        }
      }

      auto update = [&](std::vector<double>& theta, std::vector<double>& grad,
                        std::vector<double>& v1, std::vector<double>& v2) {
        for (std::size_t j = 0; j < theta.size(); ++j) {
          const double g = grad[j] * inv_n;
          if (config.optimizer == OptimizerKind::Adam) {
            v1[j] = config.beta1 * v1[j] + (1.0 - config.beta1) * g;
            v2[j] = config.beta2 * v2[j] + (1.0 - config.beta2) * g * g;
            const double mhat = v1[j] / (1.0 - std::pow(config.beta1,
                                         static_cast<double>(adam_t)));
            const double vhat = v2[j] / (1.0 - std::pow(config.beta2,
                                         static_cast<double>(adam_t)));
            theta[j] -= config.lr * mhat / (std::sqrt(vhat) + config.eps_adam);
          } else {
            v1[j] = config.momentum * v1[j] + g;
            theta[j] -= config.lr * v1[j];
          }
        }
      };
      ++adam_t;
      for (std::size_t li = 0; li < ckpt.params.size(); ++li) {
        update(ckpt.params[li].weights, acc[li].weights, m1[li].weights,
               m2[li].weights);
        update(ckpt.params[li].biases, acc[li].biases, m1[li].biases,
               m2[li].biases);
      }
    }
    final_loss = epoch_loss / static_cast<double>(order.size());
  }
  ckpt.final_loss = final_loss;
  return ckpt;
}

Prediction predict(const Checkpoint& checkpoint, const Tensor& x) {
  Trace trace = forward(checkpoint.graph, checkpoint.params, x);
  const auto logits = trace.logits();
  Prediction pred;
  pred.probabilities = softmax2(logits);
  // Ties break toward class 0.
  pred.class_index = logits[1] > logits[0] ? 1 : 0;
  return pred;
}

Prediction predict(const Checkpoint& checkpoint, const InputSample& sample) {
  return predict(checkpoint, to_tensor(sample));
}

// --- checkpoint serialization -------------------------------------------
//
// Layout: magic "GXAI", version u16 LE, then length-prefixed (u32 LE) text
// records: "input C L", one record per layer, "seed S", "loss X",
// "config ...", "params" (header terminator), followed by raw little-endian
// f64 blocks (weights then biases) in layer order.

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

void put_record(std::vector<std::uint8_t>& out, const std::string& text) {
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
}

void put_doubles(std::vector<std::uint8_t>& out, const std::vector<double>& v) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint writer assumes a little-endian host");
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(v.data());
  out.insert(out.end(), bytes, bytes + v.size() * sizeof(double));
}

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint16_t u16() {
    need(2);
    std::uint16_t v = bytes_[pos_] | (bytes_[pos_ + 1] << 8);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::string record() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(bytes_.begin() + pos_, bytes_.begin() + pos_ + n);
    pos_ += n;
    return s;
  }
  void doubles(std::vector<double>& out) {
    need(out.size() * sizeof(double));
    std::memcpy(out.data(), bytes_.data() + pos_, out.size() * sizeof(double));
    pos_ += out.size() * sizeof(double);
  }
  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size()) {
      throw CheckpointMismatch("truncated checkpoint");
    }
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> Checkpoint::serialize() const {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), {'G', 'X', 'A', 'I'});
  put_u16(out, version);
  put_record(out, "input " + std::to_string(graph.input_shape().channels) +
                      " " + std::to_string(graph.input_shape().length));
  for (const auto& spec : graph.layers()) {
    put_record(out, "layer " + layer_spec_to_string(spec));
  }
  put_record(out, "seed " + std::to_string(seed));
  put_record(out, "loss " + format_double(final_loss));
  put_record(out, "config " + config_echo);
  put_record(out, "params");
  for (const auto& p : params) {
    put_doubles(out, p.weights);
    put_doubles(out, p.biases);
  }
  return out;
}

Checkpoint Checkpoint::deserialize(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 6 || bytes[0] != 'G' || bytes[1] != 'X' ||
      bytes[2] != 'A' || bytes[3] != 'I') {
    throw CheckpointMismatch("bad checkpoint magic");
  }
  ByteReader rd(bytes);
  rd.u32();  // magic, already checked
  const std::uint16_t version = rd.u16();
  if (version != 1) {
    throw CheckpointMismatch("unsupported checkpoint version " +
                             std::to_string(version));
  }

  Shape input{0, 0};
  std::vector<LayerSpec> layers;
  std::uint64_t seed = 0;
  double final_loss = 0.0;
  std::string config_echo;
  bool saw_input = false;
  for (;;) {
    std::string rec = rd.record();
    if (rec == "params") break;
    std::istringstream is(rec);
    std::string kind;
    is >> kind;
    if (kind == "input") {
      if (!(is >> input.channels >> input.length)) {
        throw CheckpointMismatch("bad input record");
      }
      saw_input = true;
    } else if (kind == "layer") {
      std::string rest;
      std::getline(is, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
      layers.push_back(layer_spec_from_string(rest));
    } else if (kind == "seed") {
      is >> seed;
    } else if (kind == "loss") {
      is >> final_loss;
    } else if (kind == "config") {
      std::getline(is, config_echo);
      if (!config_echo.empty() && config_echo.front() == ' ') {
        config_echo.erase(0, 1);
      }
    } else {
      throw CheckpointMismatch("unknown header record '" + kind + "'");
    }
  }
  if (!saw_input) throw CheckpointMismatch("missing input record");

  Checkpoint ckpt{version, LayerGraph(input, std::move(layers)), {},
                  config_echo, seed, final_loss};
  ckpt.params = zero_params(ckpt.graph);
  for (auto& p : ckpt.params) {
    rd.doubles(p.weights);
    rd.doubles(p.biases);
  }
  if (!rd.exhausted()) {
    throw CheckpointMismatch("trailing bytes after parameter blocks");
  }
  return ckpt;
}

void Checkpoint::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint " + path);
  const auto bytes = serialize();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointMismatch("cannot open checkpoint " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace gaitxai
