#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "riskad/data.hpp"
#include "riskad/estimators.hpp"

namespace riskad {

enum class Activation { ReLU, Tanh };

/**
 * A small fully connected network with scalar output. Hidden layers use the
 * configured activation; the output layer is linear.
 */
struct MlpModel {
  std::vector<int> layer_dims;           // input d, hidden sizes, 1
  std::vector<Eigen::MatrixXd> weights;  // weights[l]: dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> biases;
  Activation activation = Activation::ReLU;

  Eigen::VectorXd forward(const Eigen::MatrixXd& X) const;  // one score per row
  double forward(const Eigen::VectorXd& x) const;
};

// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
MlpModel make_mlp(const std::vector<int>& layer_dims, Activation act, std::uint64_t seed);

enum class ClipMode { Subgradient, ReverseOnNegative };

struct DeepTrainConfig {
  int batch_size = 128;
  int epochs = 50;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_stability = 1e-8;
  double weight_decay = 1e-4;  // lambda of the weight-norm penalty
  std::uint64_t seed = 0;
  ClipMode clip_mode = ClipMode::Subgradient;
  std::vector<int> hidden = {64, 32};
  Activation activation = Activation::ReLU;
};

// One mini-batch with at least one sample from each source.
struct BatchSplit {
  Eigen::MatrixXd P, N, U;
};

// pi_n Rn- + (1-a) pi_p Rp+ + a max{0, Ru+ - pi_n Rn+} + lambda ||W||^2
// (weight matrices only; biases are not penalized). Always >= 0.
double objective_deep(const MlpModel& model, const BatchSplit& batch, const LossSpec& loss,
                      const RiskConfig& cfg, double lambda);

struct MlpGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

// Exact gradients of objective_deep. When the bracket is negative,
// Subgradient drops the max term; ReverseOnNegative follows the gradient of
// -(Ru+ - pi_n Rn+) instead, walking the bracket back toward zero.
MlpGradients backward(const MlpModel& model, const BatchSplit& batch, const LossSpec& loss,
                      const RiskConfig& cfg, double lambda,
                      ClipMode clip_mode = ClipMode::Subgradient);

struct DeepTrainResult {
  MlpModel model;
  std::vector<double> epoch_objectives;  // full-split objective after each epoch
};

// Adam over stratified mini-batches; every batch draws
// ceil(batch_size * n_s / n) samples from source s, cycling through
// per-source shuffled streams.
DeepTrainResult train_deep(const SemiSupSplit& split, const LossSpec& loss,
                           const RiskConfig& cfg, const DeepTrainConfig& train);

}  // namespace riskad
