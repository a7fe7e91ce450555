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

#include "flakylens/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "flakylens/errors.hpp"
#include "flakylens/io.hpp"
#include "json.hpp"

namespace flakylens {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::string_view kCheckpointFormat = "flaky-lens-checkpoint";
constexpr int kCheckpointVersion = 1;

void CheckInput(const ModelParams& params, const VectorXd& x) {
  if (x.size() != params.w1.cols()) {
    throw DimensionMismatchError(static_cast<std::size_t>(params.w1.cols()),
                                 static_cast<std::size_t>(x.size()));
  }
}

// Numerically stable two-way softmax; returns p(class 1).
double SoftmaxFlaky(const VectorXd& logits) {
  const double m = logits.maxCoeff();
  const double e0 = std::exp(logits(0) - m);
  const double e1 = std::exp(logits(1) - m);
  return e1 / (e0 + e1);
}

VectorXd DropoutMask(Eigen::Index n, double rate, Rng& rng) {
  VectorXd mask(n);
  const double keep = 1.0 - rate;
  for (Eigen::Index i = 0; i < n; ++i) {
    mask(i) = rng.Bernoulli(keep) ? 1.0 / keep : 0.0;
  }
  return mask;
}

MatrixXd UniformMatrix(int rows, int cols, double bound, Rng& rng) {
  MatrixXd m(rows, cols);
  // Row-major fill so the draw order matches the checkpoint layout.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.Uniform(-bound, bound);
  }
  return m;
}

void CheckDims(const ModelConfig& cfg, const std::vector<Example>& data) {
  for (const Example& e : data) {
    if (e.x.size() != cfg.input_dim) {
      throw DimensionMismatchError(static_cast<std::size_t>(cfg.input_dim),
                                   static_cast<std::size_t>(e.x.size()));
    }
  }
}

// AdamW moment estimates for one tensor.
struct Moments {
  MatrixXd m;
  MatrixXd v;
};

void AdamWStep(const ModelConfig& cfg, long step, const MatrixXd& grad,
               MatrixXd& param, Moments& mom) {
  param *= 1.0 - cfg.learning_rate * cfg.weight_decay;
  mom.m = cfg.beta1 * mom.m + (1.0 - cfg.beta1) * grad;
  mom.v = cfg.beta2 * mom.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  param.array() -= cfg.learning_rate * (mom.m.array() / c1) /
                   ((mom.v.array() / c2).sqrt() + cfg.epsilon);
}

nlohmann::json ToJson(const MatrixXd& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  }
  return arr;
}

MatrixXd FromJson(const nlohmann::json& arr, Eigen::Index rows,
                  Eigen::Index cols, const char* name) {
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(rows * cols)) {
    throw FormatError(std::string("checkpoint field '") + name +
                      "' has the wrong size");
  }
  MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = arr[k++];
      if (!v.is_number()) {
        throw FormatError(std::string("checkpoint field '") + name +
                          "' holds a non-number");
      }
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

}  // namespace

void ModelConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw InvalidArgumentError("invalid model config: " + what);
  };
  if (input_dim <= 0) fail("input_dim must be positive");
  if (hidden_dim <= 0) fail("hidden_dim must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    fail("dropout_rate must be in [0, 1)");
  }
  if (!(learning_rate > 0.0 && learning_rate < 1.0)) {
    fail("learning_rate must be in (0, 1)");
  }
  if (batch_size <= 0) fail("batch_size must be positive");
  if (max_epochs <= 0) fail("max_epochs must be positive");
  if (patience < 0) fail("patience must be non-negative");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    fail("threshold must be in (0, 1)");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    fail("betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (!(weight_decay >= 0.0)) fail("weight_decay must be non-negative");
}

bool ModelParams::AllFinite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

ModelParams InitModel(const ModelConfig& cfg) {
  cfg.Validate();
  Rng rng(DeriveSeed(cfg.seed, 0));
  ModelParams p;
  p.w1 = UniformMatrix(cfg.hidden_dim, cfg.input_dim,
                       std::sqrt(6.0 / cfg.input_dim), rng);
  p.b1 = VectorXd::Zero(cfg.hidden_dim);
  p.w2 = UniformMatrix(2, cfg.hidden_dim, std::sqrt(6.0 / cfg.hidden_dim), rng);
  p.b2 = VectorXd::Zero(2);
  return p;
}

ClassProbabilities Forward(const ModelParams& params, const VectorXd& x) {
  CheckInput(params, x);
  const VectorXd h = (params.w1 * x + params.b1).cwiseMax(0.0);
  const double pf = SoftmaxFlaky(params.w2 * h + params.b2);
  return {pf, 1.0 - pf};
}

ClassProbabilities Forward(const ModelParams& params, const VectorXd& x,
                           double dropout_rate, Rng& rng) {
  CheckInput(params, x);
  VectorXd h = (params.w1 * x + params.b1).cwiseMax(0.0);
  if (dropout_rate > 0.0) {
    h = h.cwiseProduct(DropoutMask(h.size(), dropout_rate, rng));
  }
  const double pf = SoftmaxFlaky(params.w2 * h + params.b2);
  return {pf, 1.0 - pf};
}

Gradients LossAndGradients(const ModelParams& params,
                           const std::vector<const Example*>& batch,
                           double dropout_rate, Rng* rng) {
  Gradients g;
  g.w1 = MatrixXd::Zero(params.w1.rows(), params.w1.cols());
  g.b1 = VectorXd::Zero(params.b1.size());
  g.w2 = MatrixXd::Zero(params.w2.rows(), params.w2.cols());
  g.b2 = VectorXd::Zero(params.b2.size());
  if (batch.empty()) return g;

  for (const Example* e : batch) {
    CheckInput(params, e->x);
    const VectorXd pre = params.w1 * e->x + params.b1;
    const VectorXd h = pre.cwiseMax(0.0);
    VectorXd mask = VectorXd::Ones(h.size());
    if (rng != nullptr && dropout_rate > 0.0) {
      mask = DropoutMask(h.size(), dropout_rate, *rng);
    }
    const VectorXd hd = h.cwiseProduct(mask);
    const VectorXd logits = params.w2 * hd + params.b2;

    const double m = logits.maxCoeff();
    const double lse =
        m + std::log(std::exp(logits(0) - m) + std::exp(logits(1) - m));
    const int target = e->label == Label::kFlaky ? 1 : 0;
    g.loss += lse - logits(target);

    VectorXd dz(2);
    dz(0) = std::exp(logits(0) - lse);
    dz(1) = std::exp(logits(1) - lse);
    dz(target) -= 1.0;

    g.w2.noalias() += dz * hd.transpose();
    g.b2 += dz;
    const VectorXd dpre =
        (params.w2.transpose() * dz)
            .cwiseProduct(mask)
            .cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    g.w1.noalias() += dpre * e->x.transpose();
    g.b1 += dpre;
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  g.loss *= inv;
  g.w1 *= inv;
  g.b1 *= inv;
  g.w2 *= inv;
  g.b2 *= inv;
  return g;
}

double MeanLoss(const ModelParams& params, const std::vector<Example>& data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const Example& e : data) {
    CheckInput(params, e.x);
    const VectorXd h = (params.w1 * e.x + params.b1).cwiseMax(0.0);
    const VectorXd logits = params.w2 * h + params.b2;
    const double m = logits.maxCoeff();
    const double lse =
        m + std::log(std::exp(logits(0) - m) + std::exp(logits(1) - m));
    total += lse - logits(e.label == Label::kFlaky ? 1 : 0);
  }
  return total / static_cast<double>(data.size());
}

TrainResult Train(const ModelConfig& cfg, const std::vector<Example>& train_set,
                  const std::vector<Example>& val_set) {
  cfg.Validate();
  if (train_set.empty()) throw EmptyDatasetError("training set is empty");
  if (val_set.empty()) throw EmptyDatasetError("validation set is empty");
  CheckDims(cfg, train_set);
  CheckDims(cfg, val_set);

  TrainResult result;
  ModelParams params = InitModel(cfg);
  result.params = params;

  Moments mw1{MatrixXd::Zero(params.w1.rows(), params.w1.cols()),
              MatrixXd::Zero(params.w1.rows(), params.w1.cols())};
  Moments mb1{MatrixXd::Zero(params.b1.size(), 1),
              MatrixXd::Zero(params.b1.size(), 1)};
  Moments mw2{MatrixXd::Zero(params.w2.rows(), params.w2.cols()),
              MatrixXd::Zero(params.w2.rows(), params.w2.cols())};
  Moments mb2{MatrixXd::Zero(2, 1), MatrixXd::Zero(2, 1)};

  Rng order_rng(DeriveSeed(cfg.seed, 1));
  Rng dropout_rng(DeriveSeed(cfg.seed, 2));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  double best = std::numeric_limits<double>::infinity();
  int waited = 0;
  long step = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    order_rng.Shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::vector<const Example*> batch;
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(&train_set[order[i]]);
      }
      Gradients g =
          LossAndGradients(params, batch, cfg.dropout_rate, &dropout_rng);
      if (!std::isfinite(g.loss)) {
        throw NonFiniteLossError("training loss diverged in epoch " +
                                 std::to_string(epoch));
      }
      epoch_loss += g.loss * static_cast<double>(batch.size());
      ++step;
      AdamWStep(cfg, step, g.w1, params.w1, mw1);
      MatrixXd b1 = params.b1;
      AdamWStep(cfg, step, g.b1, b1, mb1);
      params.b1 = b1;
      AdamWStep(cfg, step, g.w2, params.w2, mw2);
      MatrixXd b2 = params.b2;
      AdamWStep(cfg, step, g.b2, b2, mb2);
      params.b2 = b2;
    }
    const double train_loss = epoch_loss / static_cast<double>(order.size());
    const double val_loss = MeanLoss(params, val_set);
    if (!std::isfinite(val_loss) || !params.AllFinite()) {
      throw NonFiniteLossError("validation loss diverged in epoch " +
                               std::to_string(epoch));
    }
    result.log.train_loss.push_back(train_loss);
    result.log.val_loss.push_back(val_loss);
    result.log.stopped_epoch = epoch;
    if (val_loss < best) {
      best = val_loss;
      waited = 0;
      result.params = params;
      result.log.best_epoch = epoch;
    } else if (++waited >= cfg.patience) {
      break;
    }
  }
  return result;
}

Label Predict(const ModelParams& params, const VectorXd& x, double threshold) {
  return Forward(params, x).p_flaky >= threshold ? Label::kFlaky
                                                 : Label::kNonFlaky;
}

std::vector<ClassProbabilities> PredictBatch(
    const ModelParams& params, const std::vector<VectorXd>& inputs, int jobs) {
  for (const VectorXd& x : inputs) CheckInput(params, x);
  std::vector<ClassProbabilities> out(inputs.size());
  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(jobs, 1)), 1,
      std::max<std::size_t>(inputs.size(), 1));
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < inputs.size(); i += workers) {
      out[i] = Forward(params, inputs[i]);
    }
  };
  if (workers == 1) {
    work(0);
    return out;
  }
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
  return out;
}

std::vector<std::size_t> OversampleIndices(const std::vector<Label>& labels,
                                           std::uint64_t seed) {
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::kFlaky ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw SingleClassError("oversampling needs both classes");
  }
  std::vector<std::size_t> out(labels.size());
  std::iota(out.begin(), out.end(), 0);
  const std::vector<std::size_t>& minority = pos.size() < neg.size() ? pos : neg;
  const std::size_t deficit =
      std::max(pos.size(), neg.size()) - minority.size();
  Rng rng(seed);
  for (std::size_t k = 0; k < deficit; ++k) {
    out.push_back(minority[rng.UniformIndex(minority.size())]);
  }
  return out;
}

std::vector<Example> Oversample(const std::vector<Example>& data,
                                std::uint64_t seed) {
  std::vector<Label> labels;
  labels.reserve(data.size());
  for (const Example& e : data) labels.push_back(e.label);
  std::vector<Example> out;
  for (std::size_t i : OversampleIndices(labels, seed)) out.push_back(data[i]);
  return out;
}

VectorXd EmbedFallback(const EncodedInput& encoded, int dim) {
  if (dim <= 0) throw InvalidArgumentError("embedding dim must be positive");
  VectorXd v = VectorXd::Zero(dim);
  for (std::size_t i = 0; i < encoded.input_ids.size(); ++i) {
    if (i < encoded.attention_mask.size() && encoded.attention_mask[i] == 0) {
      continue;
    }
    const auto id = static_cast<std::uint64_t>(encoded.input_ids[i]);
    v(static_cast<Eigen::Index>(SplitMix64(id) % static_cast<std::uint64_t>(dim))) += 1.0;
  }
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

std::string CheckpointJson(const ModelParams& params, const ModelConfig& cfg) {
  nlohmann::json doc;
  doc["format"] = kCheckpointFormat;
  doc["version"] = kCheckpointVersion;
  doc["dims"] = {{"input", params.input_dim()}, {"hidden", params.hidden_dim()}};
  doc["seed"] = cfg.seed;
  doc["config"] = {
      {"dropout_rate", cfg.dropout_rate}, {"learning_rate", cfg.learning_rate},
      {"batch_size", cfg.batch_size},     {"max_epochs", cfg.max_epochs},
      {"patience", cfg.patience},         {"threshold", cfg.threshold},
      {"beta1", cfg.beta1},               {"beta2", cfg.beta2},
      {"epsilon", cfg.epsilon},           {"weight_decay", cfg.weight_decay},
  };
  doc["w1"] = ToJson(params.w1);
  doc["b1"] = ToJson(params.b1);
  doc["w2"] = ToJson(params.w2);
  doc["b2"] = ToJson(params.b2);
  return doc.dump() + "\n";
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const ModelParams& params, const ModelConfig& cfg) {
  WriteFile(path, CheckpointJson(params, cfg));
}

Checkpoint ParseCheckpoint(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint is not JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != kCheckpointFormat) {
      throw FormatError("not a checkpoint file");
    }
    if (doc.at("version") != kCheckpointVersion) {
      throw FormatError("unsupported checkpoint version " +
                        doc.at("version").dump());
    }
    Checkpoint ck;
    ModelConfig& cfg = ck.config;
    cfg.input_dim = doc.at("dims").at("input").get<int>();
    cfg.hidden_dim = doc.at("dims").at("hidden").get<int>();
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    const auto& c = doc.at("config");
    cfg.dropout_rate = c.at("dropout_rate").get<double>();
    cfg.learning_rate = c.at("learning_rate").get<double>();
    cfg.batch_size = c.at("batch_size").get<int>();
    cfg.max_epochs = c.at("max_epochs").get<int>();
    cfg.patience = c.at("patience").get<int>();
    cfg.threshold = c.at("threshold").get<double>();
    cfg.beta1 = c.at("beta1").get<double>();
    cfg.beta2 = c.at("beta2").get<double>();
    cfg.epsilon = c.at("epsilon").get<double>();
    cfg.weight_decay = c.at("weight_decay").get<double>();
    cfg.Validate();
    ck.params.w1 = FromJson(doc.at("w1"), cfg.hidden_dim, cfg.input_dim, "w1");
    ck.params.b1 = FromJson(doc.at("b1"), cfg.hidden_dim, 1, "b1");
    ck.params.w2 = FromJson(doc.at("w2"), 2, cfg.hidden_dim, "w2");
    ck.params.b2 = FromJson(doc.at("b2"), 2, 1, "b2");
    if (!ck.params.AllFinite()) throw FormatError("checkpoint has non-finite weights");
    return ck;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed checkpoint: ") + e.what());
  }
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  return ParseCheckpoint(ReadFile(path));
}

}  // namespace flakylens
