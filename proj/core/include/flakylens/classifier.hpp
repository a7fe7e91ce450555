// Copyright 2026 The Flaky Lens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Feedforward classification head: input -> hidden (ReLU, dropout) -> 2-way
// softmax, trained with AdamW and early stopping on validation loss.
//
// Output index 1 is the Flaky class.

#ifndef FLAKYLENS_CLASSIFIER_HPP_
#define FLAKYLENS_CLASSIFIER_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flakylens/random.hpp"
#include "flakylens/tokenizer.hpp"
#include "flakylens/types.hpp"

namespace flakylens {

inline constexpr int kEmbeddingDim = 768;

struct ModelConfig {
  int input_dim = kEmbeddingDim;
  int hidden_dim = 512;
  double dropout_rate = 0.1;
  double learning_rate = 1e-5;
  int batch_size = 2;
  int max_epochs = 50;
  int patience = 5;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;

  // Throws InvalidArgumentError naming the first offending field.
  void Validate() const;
};

struct ModelParams {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // 2 x hidden
  Eigen::VectorXd b2;

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  bool AllFinite() const;
};

struct ClassProbabilities {
  double p_flaky = 0.5;
  double p_nonflaky = 0.5;
};

struct Example {
  Eigen::VectorXd x;
  Label label = Label::kNonFlaky;
};

struct TrainingLog {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  int stopped_epoch = 0;
  int best_epoch = 0;
};

// Weights uniform in [-sqrt(6 / fan_in), sqrt(6 / fan_in)] per layer,
// biases zero.
ModelParams InitModel(const ModelConfig& cfg);

// Evaluation-mode forward pass. Throws DimensionMismatchError.
ClassProbabilities Forward(const ModelParams& params, const Eigen::VectorXd& x);

// Training-mode forward pass: inverted dropout with `dropout_rate`, masks
// drawn from `rng`.
ClassProbabilities Forward(const ModelParams& params, const Eigen::VectorXd& x,
                           double dropout_rate, Rng& rng);

struct Gradients {
  double loss = 0.0;
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

// Mean cross-entropy over `batch` and its gradient. With a null `rng`
// dropout is disabled.
Gradients LossAndGradients(const ModelParams& params,
                           const std::vector<const Example*>& batch,
                           double dropout_rate, Rng* rng);

// Mean evaluation-mode cross-entropy.
double MeanLoss(const ModelParams& params, const std::vector<Example>& data);

struct TrainResult {
  ModelParams params;
  TrainingLog log;
};

// Returns the parameters of the epoch with the lowest validation loss.
// Throws EmptyDatasetError, DimensionMismatchError, NonFiniteLossError.
TrainResult Train(const ModelConfig& cfg, const std::vector<Example>& train_set,
                  const std::vector<Example>& val_set);

// Flaky iff p_flaky >= threshold.
Label Predict(const ModelParams& params, const Eigen::VectorXd& x,
              double threshold);

// Evaluation-mode probabilities for many inputs, fanned out over up to
// `jobs` threads. Result order matches `inputs`.
std::vector<ClassProbabilities> PredictBatch(
    const ModelParams& params, const std::vector<Eigen::VectorXd>& inputs,
    int jobs = 1);

// Indices into `labels` after random oversampling: every original index in
// order, then minority indices drawn with replacement until both classes
// have equal counts. Throws SingleClassError.
std::vector<std::size_t> OversampleIndices(const std::vector<Label>& labels,
                                           std::uint64_t seed);

std::vector<Example> Oversample(const std::vector<Example>& data,
                                std::uint64_t seed);

// Deterministic hashed bag of token ids, L2-normalized. Padding is
// ignored; an all-padding input maps to the zero vector.
Eigen::VectorXd EmbedFallback(const EncodedInput& encoded,
                              int dim = kEmbeddingDim);

// Versioned JSON checkpoint. Output is byte-identical for identical input.
std::string CheckpointJson(const ModelParams& params, const ModelConfig& cfg);
void SaveCheckpoint(const std::filesystem::path& path,
                    const ModelParams& params, const ModelConfig& cfg);

struct Checkpoint {
  ModelParams params;
  ModelConfig config;
};

// Throws IoError or FormatError.
Checkpoint LoadCheckpoint(const std::filesystem::path& path);
Checkpoint ParseCheckpoint(const std::string& json_text);

}  // namespace flakylens

#endif  // FLAKYLENS_CLASSIFIER_HPP_
