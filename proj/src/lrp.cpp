#include "gaitxai/lrp.hpp"

#include <cmath>

namespace gaitxai {

namespace {

double stabilized(double z, double epsilon) {
  // sign(0) treated as +1 so epsilon always moves the denominator off zero.
  return z + (z >= 0.0 ? epsilon : -epsilon);
}

}  // namespace

LrpRule LrpRule::alphabeta(double a, double b) {
  if (std::abs(a - b - 1.0) > 1e-12 || a < 1.0) {
    throw ConfigError("alphabeta rule requires alpha - beta = 1 and alpha >= 1");
  }
  return {Kind::AlphaBeta, 0.0, a, b};
}

std::vector<double> lrp_dense(const std::vector<double>& weights,
                              const std::vector<double>& biases,
                              const std::vector<double>& activations,
                              const std::vector<double>& relevance_out,
                              const LrpRule& rule) {
  const std::size_t n_in = activations.size();
  const std::size_t n_out = biases.size();
  if (weights.size() != n_in * n_out || relevance_out.size() != n_out) {
    throw ShapeMismatch("lrp_dense: inconsistent shapes");
  }
  std::vector<double> relevance_in(n_in, 0.0);

  if (rule.kind == LrpRule::Kind::Epsilon) {
    for (std::size_t k = 0; k < n_out; ++k) {
      if (relevance_out[k] == 0.0) continue;
      double z = biases[k];
      const double* w = &weights[k * n_in];
      for (std::size_t j = 0; j < n_in; ++j) z += activations[j] * w[j];
      const double factor = relevance_out[k] / stabilized(z, rule.epsilon);
      for (std::size_t j = 0; j < n_in; ++j) {
        relevance_in[j] += activations[j] * w[j] * factor;
      }
    }
  } else {
    for (std::size_t k = 0; k < n_out; ++k) {
      if (relevance_out[k] == 0.0) continue;
      const double* w = &weights[k * n_in];
      double z_pos = std::max(biases[k], 0.0);
      double z_neg = std::min(biases[k], 0.0);
      for (std::size_t j = 0; j < n_in; ++j) {
        const double z = activations[j] * w[j];
        if (z > 0.0) z_pos += z; else z_neg += z;
      }
      const double fp = z_pos != 0.0 ? rule.alpha * relevance_out[k] / z_pos : 0.0;
      const double fn = z_neg != 0.0 ? rule.beta * relevance_out[k] / z_neg : 0.0;
      for (std::size_t j = 0; j < n_in; ++j) {
        const double z = activations[j] * w[j];
        relevance_in[j] += z > 0.0 ? z * fp : -(z * fn);
      }
    }
  }
  return relevance_in;
}

Tensor lrp_conv(const Conv1dSpec& spec, const LayerParams& params,
                const Tensor& activations, const Tensor& relevance_out,
                const LrpRule& rule) {
  const std::size_t in_c = activations.channels;
  const std::size_t k = spec.kernel;
  if (relevance_out.channels != spec.out_channels) {
    throw ShapeMismatch("lrp_conv: relevance channels mismatch");
  }
  Tensor relevance_in(in_c, activations.length);

  for (std::size_t oc = 0; oc < relevance_out.channels; ++oc) {
    for (std::size_t i = 0; i < relevance_out.length; ++i) {
      const double r = relevance_out.at(oc, i);
      if (r == 0.0) continue;
      const std::ptrdiff_t start =
          static_cast<std::ptrdiff_t>(i * spec.stride) -
          static_cast<std::ptrdiff_t>(spec.padding);
      auto each_tap = [&](auto&& fn) {
        for (std::size_t ic = 0; ic < in_c; ++ic) {
          const double* w = &params.weights[(oc * in_c + ic) * k];
          for (std::size_t j = 0; j < k; ++j) {
            const std::ptrdiff_t pos = start + static_cast<std::ptrdiff_t>(j);
            if (pos >= 0 && pos < static_cast<std::ptrdiff_t>(activations.length)) {
              fn(ic, static_cast<std::size_t>(pos),
                 activations.at(ic, pos) * w[j]);
            }
          }
        }
      };
      if (rule.kind == LrpRule::Kind::Epsilon) {
        double z = params.biases[oc];
        each_tap([&](std::size_t, std::size_t, double zj) { z += zj; });
        const double factor = r / stabilized(z, rule.epsilon);
        each_tap([&](std::size_t ic, std::size_t pos, double zj) {
          relevance_in.at(ic, pos) += zj * factor;
        });
      } else {
        double z_pos = std::max(params.biases[oc], 0.0);
        double z_neg = std::min(params.biases[oc], 0.0);
        each_tap([&](std::size_t, std::size_t, double zj) {
          if (zj > 0.0) z_pos += zj; else z_neg += zj;
        });
        const double fp = z_pos != 0.0 ? rule.alpha * r / z_pos : 0.0;
        const double fn = z_neg != 0.0 ? rule.beta * r / z_neg : 0.0;
        each_tap([&](std::size_t ic, std::size_t pos, double zj) {
          relevance_in.at(ic, pos) += zj > 0.0 ? zj * fp : -(zj * fn);
        });
      }
    }
  }
  return relevance_in;
}

Tensor lrp_maxpool(const MaxPool1dSpec& spec, const Tensor& activations,
                   const Tensor& relevance_out) {
  Tensor relevance_in(activations.channels, activations.length);
  for (std::size_t c = 0; c < activations.channels; ++c) {
    for (std::size_t i = 0; i < relevance_out.length; ++i) {
      std::size_t arg = i * spec.stride;
      for (std::size_t j = 1; j < spec.window; ++j) {
        if (activations.at(c, i * spec.stride + j) > activations.at(c, arg)) {
          arg = i * spec.stride + j;
        }
      }
      relevance_in.at(c, arg) += relevance_out.at(c, i);
    }
  }
  return relevance_in;
}

Tensor lrp_global_avg_pool(const Tensor& activations,
                           const Tensor& relevance_out) {
  Tensor relevance_in(activations.channels, activations.length);
  for (std::size_t c = 0; c < activations.channels; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < activations.length; ++i) {
      sum += activations.at(c, i);
    }
    const double r = relevance_out.at(c, 0);
    if (sum != 0.0) {
      for (std::size_t i = 0; i < activations.length; ++i) {
        relevance_in.at(c, i) = r * activations.at(c, i) / sum;
      }
    } else {
      const double share = r / static_cast<double>(activations.length);
      for (std::size_t i = 0; i < activations.length; ++i) {
        relevance_in.at(c, i) = share;
      }
    }
  }
  return relevance_in;
}

RelevanceMap explain(const Checkpoint& checkpoint, const InputSample& sample,
                     int target_class, const LrpConfig& config) {
  const LayerGraph& graph = checkpoint.graph;
  const Tensor x = to_tensor(sample);
  const Trace trace = forward(graph, checkpoint.params, x);

  RelevanceMap map;
  map.subject_id = sample.subject_id;
  map.trial_id = sample.trial_id;
  map.target_class = target_class;
  map.output_score = trace.logits()[target_class];

  // Relevance starts at the output with the non-target logit masked to zero.
  Tensor rel(1, 2);
  rel.data[target_class] = map.output_score;

  for (std::size_t li = graph.layers().size(); li-- > 0;) {
    const LayerSpec& spec = graph.layers()[li];
    const Tensor& a = trace.inputs[li];
    if (const auto* conv = std::get_if<Conv1dSpec>(&spec)) {
      rel = lrp_conv(*conv, checkpoint.params[li], a, rel, config.rule);
    } else if (std::holds_alternative<DenseSpec>(spec)) {
      std::vector<double> r_in =
          lrp_dense(checkpoint.params[li].weights, checkpoint.params[li].biases,
                    a.data, rel.data, config.rule);
      Tensor t(a.channels, a.length);
      t.data = std::move(r_in);
      rel = std::move(t);
    } else if (const auto* pool = std::get_if<MaxPool1dSpec>(&spec)) {
      rel = lrp_maxpool(*pool, a, rel);
    } else if (std::holds_alternative<GlobalAvgPoolSpec>(spec)) {
      rel = lrp_global_avg_pool(a, rel);
    } else {
      // ReLU passthrough / Flatten reshape: values carry over unchanged.
      Tensor t(a.channels, a.length);
      t.data = rel.data;
      rel = std::move(t);
    }
  }

  double total = 0.0;
  for (double v : rel.data) total += v;
  map.conservation_residual = total - map.output_score;
  map.relevance = std::move(rel);
  return map;
}

std::map<int, Tensor> average_relevance(const std::vector<RelevanceMap>& maps) {
  if (maps.empty()) throw EmptyGroup("no relevance maps to average");
  std::map<int, Tensor> sums;
  std::map<int, std::size_t> counts;
  for (const auto& m : maps) {
    auto [it, fresh] = sums.try_emplace(
        m.target_class, Tensor(m.relevance.channels, m.relevance.length));
    if (!it->second.same_shape(m.relevance)) {
      throw ShapeMismatch("relevance maps have mixed shapes");
    }
    for (std::size_t i = 0; i < m.relevance.size(); ++i) {
      it->second.data[i] += m.relevance.data[i];
    }
    ++counts[m.target_class];
  }
  for (auto& [cls, sum] : sums) {
    const double inv = 1.0 / static_cast<double>(counts[cls]);
    for (auto& v : sum.data) v *= inv;
  }
  return sums;
}

Tensor total_relevance(const Tensor& mean_class0, const Tensor& mean_class1) {
  if (!mean_class0.same_shape(mean_class1)) {
    throw ShapeMismatch("class mean relevance shapes differ");
  }
  Tensor out(mean_class0.channels, mean_class0.length);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data[i] = std::abs(mean_class0.data[i]) + std::abs(mean_class1.data[i]);
  }
  return out;
}

}  // namespace gaitxai
