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

// Splitting protocols, metrics, significance testing and the debugging
// cost model. Flaky is the positive class throughout.

#ifndef FLAKYLENS_EVALUATION_HPP_
#define FLAKYLENS_EVALUATION_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "flakylens/classifier.hpp"
#include "flakylens/types.hpp"

namespace flakylens {

struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t Total() const { return tp + fp + fn + tn; }
  std::int64_t Correct() const { return tp + tn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;
};

// Absent where the denominator is zero.
struct Metrics {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

Metrics ComputeMetrics(const ConfusionMatrix& cm);

// Fully defined metrics from known precision and recall.
Metrics MetricsFromPR(double precision, double recall);

struct Evaluation {
  ConfusionMatrix confusion;
  Metrics metrics;
};

// Throws LengthMismatchError.
Evaluation EvaluatePredictions(const std::vector<Label>& predictions,
                               const std::vector<Label>& truth);

// Two-sided Fisher exact test on [[a, b], [c, d]]: the total probability
// of same-margin tables no more likely than the observed one. Tables with
// an empty row or column give 1.
double FisherExact(std::int64_t a, std::int64_t b, std::int64_t c,
                   std::int64_t d);

// Hypergeometric probability of [[a, b], [c, d]] given its margins.
double TableProbability(std::int64_t a, std::int64_t b, std::int64_t c,
                        std::int64_t d);

// Compares two classifiers on the same evaluation set by their
// (correct, incorrect) counts.
double FisherCorrectness(const ConfusionMatrix& a, const ConfusionMatrix& b);

struct CostReport {
  // 1 - precision and 1 - recall.
  double test_debugging_cost = 0;
  double code_debugging_cost = 0;
  double baseline_test_debugging_cost = 0;
  double baseline_code_debugging_cost = 0;
  // Baseline cost minus ours, in percentage points; positive is better.
  double test_delta_pp = 0;
  double code_delta_pp = 0;
  // (baseline cost - ours) / baseline cost.
  double test_reduction_rate = 0;
  double code_reduction_rate = 0;
};

// Throws InvalidArgumentError if precision or recall is undefined on either
// side, BaselineZeroCostError if a baseline cost is 0 while ours is not.
CostReport ComputeCostReport(const Metrics& ours, const Metrics& baseline);

struct Summary {
  double min = 0;
  double q25 = 0;
  double mean = 0;
  double median = 0;
  double q75 = 0;
  double max = 0;
  std::size_t count = 0;
};

// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted values.
double Quantile(const std::vector<double>& sorted, double q);

// Throws EmptyInputError.
Summary Summarize(std::vector<double> values);

struct MetricSummary {
  // Absent when every value of the metric is undefined.
  std::optional<Summary> precision;
  std::optional<Summary> recall;
  std::optional<Summary> f1;
  // Projects left out of each summary because the metric is undefined.
  std::size_t undefined_precision = 0;
  std::size_t undefined_recall = 0;
  std::size_t undefined_f1 = 0;
};

// Throws EmptyInputError.
MetricSummary DescribeMetrics(const std::vector<Metrics>& per_project);

enum class SplitKind { kStratifiedKFold, kPerProject };

std::string_view ToString(SplitKind kind);

// Indices into the corpus.
struct Fold {
  std::string name;
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

struct SplitPlan {
  SplitKind kind = SplitKind::kStratifiedKFold;
  std::vector<Fold> folds;
};

// Each class is shuffled and dealt round-robin into k test folds, so
// per-fold class counts differ by at most one. Validation is carved per
// class from the remaining records. Throws SingleClassError,
// KTooLargeError (k above the smaller class count) or InvalidArgumentError.
SplitPlan StratifiedKFold(const std::vector<Label>& labels, int k,
                          double val_fraction, std::uint64_t seed);

// One fold per project (sorted by name): the project is the test set, the
// other projects are split into train and validation per class.
SplitPlan PerProjectSplits(const std::vector<std::string>& projects,
                           const std::vector<Label>& labels,
                           double val_fraction, std::uint64_t seed);

// Whole corpus as train and validation (stratified), empty test. Used to
// fit a final model.
Fold HoldoutSplit(const std::vector<Label>& labels, double val_fraction,
                  std::uint64_t seed);

enum class SplitRole { kTrain, kVal, kTest };
enum class Provenance { kOriginal, kOversampled };

struct TaggedIndex {
  std::size_t index = 0;
  SplitRole role = SplitRole::kTrain;
  Provenance provenance = Provenance::kOriginal;
};

struct FoldData {
  std::vector<TaggedIndex> train;
  std::vector<TaggedIndex> val;
  std::vector<TaggedIndex> test;
};

// Applies random oversampling to train and validation (each on its own)
// and never to test. A side holding a single class is left as is.
FoldData MaterializeFold(const Fold& fold, const std::vector<Label>& labels,
                         std::uint64_t seed);

struct FoldResult {
  std::string name;
  std::vector<std::size_t> test;
  std::vector<double> p_flaky;
  std::vector<Label> predictions;
  Evaluation evaluation;
  // Majority class of the fold's (unbalanced) training portion, predicted
  // for every test record.
  Evaluation majority;
  TrainingLog log;
};

struct ExperimentResult {
  SplitKind kind = SplitKind::kStratifiedKFold;
  std::vector<FoldResult> folds;
  // Pooled over all folds' test records.
  Evaluation pooled;
  Evaluation majority_pooled;
  // Pooled prediction of every record as Flaky.
  Evaluation all_flaky_pooled;
  double fisher_vs_majority = 1.0;
};

// Trains and tests one model per fold. Folds run on up to `jobs` threads;
// each fold's model is seeded from cfg.seed and the fold index, so results
// do not depend on `jobs`.
ExperimentResult RunExperiment(const std::vector<Eigen::VectorXd>& inputs,
                               const std::vector<Label>& labels,
                               const SplitPlan& plan, const ModelConfig& cfg,
                               int jobs = 1);

}  // namespace flakylens

#endif  // FLAKYLENS_EVALUATION_HPP_
