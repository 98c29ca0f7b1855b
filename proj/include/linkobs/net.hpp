#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "linkobs/activation.hpp"
#include "linkobs/geometry.hpp"

namespace linkobs {

enum class FinalActivation { SameAsHidden, None };

struct MLPSpec {
  /// [n_1, ..., n_{k+1}]: input dim, hidden dims, output dim.
  std::vector<int> layer_dims;
  ActivationKind activation = ActivationKind::relu();
  FinalActivation final_activation = FinalActivation::SameAsHidden;
  std::uint64_t seed = 0;

  /// Number of affine layers k.
  int depth() const { return static_cast<int>(layer_dims.size()) - 1; }
  /// Largest hidden layer dimension; 0 when there is no hidden layer.
  int width() const;
  void validate() const;

  /// [input, width x (depth-1), output].
  static MLPSpec uniform(int input, int width, int depth, int output, ActivationKind act,
                         FinalActivation fin, std::uint64_t seed);
};

struct MLP {
  MLPSpec spec;
  std::vector<Mat> weights;  // W_i is n_{i+1} x n_i
  std::vector<Vec> biases;

  int input_dim() const { return spec.layer_dims.front(); }
  int output_dim() const { return spec.layer_dims.back(); }

  Vec forward(const Vec& x) const;
  /// Columns are inputs.
  Mat forward_batch(const Mat& xs) const;

  void validate() const;
};

/// Weights ~ N(0,1)/sqrt(fan_in) from a PRNG seeded by spec.seed; zero biases.
MLP init(const MLPSpec& spec);

/// Pointwise forward pass; parametrization metadata is carried over.
PointCloud image_of(const MLP& net, const PointCloud& cloud);

enum class LossKind { HingeSeparation, MeanSquaredError, SupGap };

std::string to_string(LossKind k);
LossKind loss_kind_from_string(const std::string& s);

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 1000;
  /// 0 or >= dataset size means full batch.
  int batch = 0;
  LossKind loss = LossKind::MeanSquaredError;
  std::uint64_t seed = 0;
  double momentum = 0.0;

  void validate() const;
};

/// Inputs and targets column by column. For hinge-separation the target is
/// a 1-row matrix of labels in {-1, +1}. Optional nonnegative per-sample
/// weights rescale the averaged losses (the sup-gap loss ignores them).
struct TrainingData {
  Mat inputs;
  Mat targets;
  Vec weights;
};

/// Labelled data from a pair: side A labelled +1, side B labelled -1.
TrainingData separation_data(const EmbeddedPair& pair);

struct Gradients {
  double loss = 0.0;
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  Mat outputs;
};

/// Loss and its gradient by reverse-mode differentiation through the
/// affine/activation stack.
Gradients loss_gradient(const MLP& net, const Mat& inputs, const Mat& targets, LossKind loss,
                        const Vec& weights = Vec());

double loss_value(const Mat& outputs, const Mat& targets, LossKind loss, const Vec& weights = Vec());

struct TrainResult {
  MLP net;
  std::vector<double> loss_trace;
};

/// Called once per epoch with the epoch index, the loss and the network
/// outputs on the whole dataset (for full-batch runs, the outputs that
/// produced that epoch's gradient).
using EpochObserver = std::function<void(int, double, const Mat&)>;

/// Gradient descent (optionally with momentum). Deterministic given the
/// config seed. Throws NumericFailure on a non-finite loss.
TrainResult train(MLP net, const TrainingData& data, const TrainConfig& cfg, const EpochObserver& observer = {});

}  // namespace linkobs
