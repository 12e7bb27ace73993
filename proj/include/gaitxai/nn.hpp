#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gaitxai/tensor.hpp"
#include "gaitxai/types.hpp"

namespace gaitxai {

struct Conv1dSpec {
  std::size_t out_channels;
  std::size_t kernel;
  std::size_t stride = 1;
  std::size_t padding = 0;  // zero-pad count on each side
  bool operator==(const Conv1dSpec&) const = default;
};
struct ReluSpec {
  bool operator==(const ReluSpec&) const = default;
};
struct MaxPool1dSpec {
  std::size_t window;
  std::size_t stride;
  bool operator==(const MaxPool1dSpec&) const = default;
};
struct GlobalAvgPoolSpec {
  bool operator==(const GlobalAvgPoolSpec&) const = default;
};
struct DenseSpec {
  std::size_t out_units;
  bool operator==(const DenseSpec&) const = default;
};
struct FlattenSpec {
  bool operator==(const FlattenSpec&) const = default;
};

using LayerSpec = std::variant<Conv1dSpec, ReluSpec, MaxPool1dSpec,
                               GlobalAvgPoolSpec, DenseSpec, FlattenSpec>;

std::string layer_spec_to_string(const LayerSpec& spec);
LayerSpec layer_spec_from_string(const std::string& text);

struct Shape {
  std::size_t channels;
  std::size_t length;
  bool operator==(const Shape&) const = default;
};

// Validated layer chain; construction rejects incompatible shapes and any
// graph that does not end in exactly two logits.
class LayerGraph {
 public:
  LayerGraph(Shape input, std::vector<LayerSpec> layers);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  Shape input_shape() const { return input_; }
  // Output shape of layer i; shape(i) for i == layers().size() is the input.
  Shape output_shape(std::size_t layer_index) const {
    return shapes_[layer_index + 1];
  }

  bool operator==(const LayerGraph&) const = default;

 private:
  Shape input_;
  std::vector<LayerSpec> layers_;
  std::vector<Shape> shapes_;  // shapes_[0] = input, shapes_[i+1] = after layer i
};

// Default architecture used when no explicit spec is configured.
LayerGraph default_graph(Shape input);

struct LayerParams {
  std::vector<double> weights;
  std::vector<double> biases;
};
using Params = std::vector<LayerParams>;

Params init_params(const LayerGraph& graph, std::uint64_t seed);
Params zero_params(const LayerGraph& graph);

// Activation trace from a forward pass; inputs[i] is the input to layer i,
// retained for backprop and relevance propagation.
struct Trace {
  std::vector<Tensor> inputs;
  Tensor output;  // (1, 2) logits

  std::array<double, 2> logits() const { return {output.data[0], output.data[1]}; }
};

Tensor to_tensor(const InputSample& sample);

Trace forward(const LayerGraph& graph, const Params& params, const Tensor& x);

std::array<double, 2> softmax2(const std::array<double, 2>& logits);

// Softmax cross-entropy with log-sum-exp stabilization.
double loss(const std::array<double, 2>& logits, int label);

struct Gradients {
  Params params;       // same shapes as the parameters
  Tensor input_grad;
};

Gradients backward(const LayerGraph& graph, const Params& params,
                   const Trace& trace, int label);

enum class OptimizerKind { Sgd, Adam };

struct TrainConfig {
  std::size_t epochs = 200;
  std::size_t batch_size = 16;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double lr = 1e-3;
  double momentum = 0.0;     // sgd only
  double beta1 = 0.9;        // adam
  double beta2 = 0.999;      // adam
  double eps_adam = 1e-8;    // adam
  std::uint64_t seed = 0;

  void validate() const;
  std::string echo() const;
};

struct Checkpoint {
  std::uint16_t version = 1;
  LayerGraph graph;
  Params params;
  std::string config_echo;
  std::uint64_t seed = 0;
  double final_loss = 0.0;

  std::vector<std::uint8_t> serialize() const;
  static Checkpoint deserialize(const std::vector<std::uint8_t>& bytes);
  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);
};

Checkpoint train(const LayerGraph& graph,
                 const std::vector<InputSample>& training_split,
                 const TrainConfig& config);

struct Prediction {
  int class_index;
  std::array<double, 2> probabilities;
};

Prediction predict(const Checkpoint& checkpoint, const Tensor& x);
Prediction predict(const Checkpoint& checkpoint, const InputSample& sample);

}  // namespace gaitxai
