#pragma once

#include <map>
#include <string>
#include <vector>

#include "gaitxai/nn.hpp"
#include "gaitxai/tensor.hpp"

namespace gaitxai {

// Redistribution rule for weighted (dense/conv) layers. Pooling and ReLU
// rules are fixed: winner-take-all for MaxPool, proportional for
// GlobalAvgPool, passthrough for ReLU.
struct LrpRule {
  enum class Kind { Epsilon, AlphaBeta } kind = Kind::Epsilon;
  double epsilon = 1e-6;
  double alpha = 1.0;
  double beta = 0.0;

  static LrpRule eps(double e) { return {Kind::Epsilon, e, 1.0, 0.0}; }
  static LrpRule alphabeta(double a, double b);
};

struct LrpConfig {
  LrpRule rule = LrpRule::eps(1e-6);
};

struct RelevanceMap {
  std::string subject_id;
  std::string trial_id;
  int target_class = 0;
  Tensor relevance;          // exact shape of the input sample channels
  double output_score = 0.0; // the explained logit
  double conservation_residual = 0.0;  // sum(R) - output_score
};

// Relevance redistribution through a single dense layer; `activations` is the
// layer input (flattened), `relevance_out` the relevance arriving from above.
std::vector<double> lrp_dense(const std::vector<double>& weights,
                              const std::vector<double>& biases,
                              const std::vector<double>& activations,
                              const std::vector<double>& relevance_out,
                              const LrpRule& rule);

Tensor lrp_conv(const Conv1dSpec& spec, const LayerParams& params,
                const Tensor& activations, const Tensor& relevance_out,
                const LrpRule& rule);

Tensor lrp_maxpool(const MaxPool1dSpec& spec, const Tensor& activations,
                   const Tensor& relevance_out);
Tensor lrp_global_avg_pool(const Tensor& activations,
                           const Tensor& relevance_out);

RelevanceMap explain(const Checkpoint& checkpoint, const InputSample& sample,
                     int target_class, const LrpConfig& config = {});

// Element-wise mean relevance per class, grouped by target_class.
std::map<int, Tensor> average_relevance(const std::vector<RelevanceMap>& maps);

// |mean_class0| + |mean_class1| per input node.
Tensor total_relevance(const Tensor& mean_class0, const Tensor& mean_class1);

}  // namespace gaitxai
