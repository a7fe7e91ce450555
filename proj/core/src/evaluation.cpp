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

#include "flakylens/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>
#include <thread>

#include "flakylens/errors.hpp"
#include "flakylens/random.hpp"

namespace flakylens {
namespace {

double LogChoose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1) -
         std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

// Point probability of a top-left cell value x given the margins.
double LogHypergeometric(std::int64_t x, std::int64_t row1, std::int64_t row2,
                         std::int64_t col1) {
  return LogChoose(row1, x) + LogChoose(row2, col1 - x) -
         LogChoose(row1 + row2, col1);
}

void CheckCells(std::int64_t a, std::int64_t b, std::int64_t c,
                std::int64_t d) {
  if (a < 0 || b < 0 || c < 0 || d < 0) {
    throw InvalidArgumentError("contingency table cells must be non-negative");
  }
}

// Splits `pool` per class into train and validation.
void CarveValidation(const std::vector<std::size_t>& pool,
                     const std::vector<Label>& labels, double val_fraction,
                     Rng& rng, Fold& fold) {
  for (Label cls : {Label::kFlaky, Label::kNonFlaky}) {
    std::vector<std::size_t> members;
    for (std::size_t i : pool) {
      if (labels[i] == cls) members.push_back(i);
    }
    rng.Shuffle(std::span<std::size_t>(members));
    std::size_t n_val = 0;
    if (members.size() >= 2) {
      n_val = static_cast<std::size_t>(
          std::llround(val_fraction * static_cast<double>(members.size())));
      n_val = std::clamp<std::size_t>(n_val, 1, members.size() - 1);
    }
    fold.val.insert(fold.val.end(), members.begin(), members.begin() + n_val);
    fold.train.insert(fold.train.end(), members.begin() + n_val, members.end());
  }
  std::sort(fold.train.begin(), fold.train.end());
  std::sort(fold.val.begin(), fold.val.end());
}

void CheckValFraction(double val_fraction) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw InvalidArgumentError("val_fraction must be in (0, 1)");
  }
}

std::vector<TaggedIndex> Tag(const std::vector<std::size_t>& indices,
                             const std::vector<Label>& labels, SplitRole role,
                             bool balance, std::uint64_t seed) {
  std::vector<TaggedIndex> out;
  std::vector<Label> sub;
  sub.reserve(indices.size());
  for (std::size_t i : indices) sub.push_back(labels[i]);
  const bool both = std::count(sub.begin(), sub.end(), Label::kFlaky) > 0 &&
                    std::count(sub.begin(), sub.end(), Label::kNonFlaky) > 0;
  if (!balance || !both) {
    for (std::size_t i : indices) out.push_back({i, role, Provenance::kOriginal});
    return out;
  }
  const std::vector<std::size_t> picks = OversampleIndices(sub, seed);
  for (std::size_t k = 0; k < picks.size(); ++k) {
    out.push_back({indices[picks[k]], role,
                   k < indices.size() ? Provenance::kOriginal
                                      : Provenance::kOversampled});
  }
  return out;
}

Evaluation ConstantPrediction(const std::vector<std::size_t>& test,
                              const std::vector<Label>& labels, Label value) {
  std::vector<Label> preds(test.size(), value);
  std::vector<Label> truth;
  truth.reserve(test.size());
  for (std::size_t i : test) truth.push_back(labels[i]);
  return EvaluatePredictions(preds, truth);
}

FoldResult RunFold(std::size_t f, const Fold& fold,
                   const std::vector<Eigen::VectorXd>& inputs,
                   const std::vector<Label>& labels, const ModelConfig& cfg) {
  const FoldData data = MaterializeFold(fold, labels, DeriveSeed(cfg.seed, 1000 + f));
  auto to_examples = [&](const std::vector<TaggedIndex>& tagged) {
    std::vector<Example> out;
    out.reserve(tagged.size());
    for (const TaggedIndex& t : tagged) out.push_back({inputs[t.index], labels[t.index]});
    return out;
  };
  const std::vector<Example> train = to_examples(data.train);
  std::vector<Example> val = to_examples(data.val);
  if (train.empty()) {
    throw EmptyDatasetError("fold " + fold.name + " has no training records");
  }
  // Tiny folds may have nothing to validate on; fall back to training loss.
  if (val.empty()) val = train;

  ModelConfig fold_cfg = cfg;
  fold_cfg.seed = DeriveSeed(cfg.seed, f);
  FoldResult result;
  result.name = fold.name;
  result.test = fold.test;
  TrainResult trained = Train(fold_cfg, train, val);
  result.log = std::move(trained.log);

  std::vector<Label> truth;
  for (std::size_t i : fold.test) {
    const double p = Forward(trained.params, inputs[i]).p_flaky;
    result.p_flaky.push_back(p);
    result.predictions.push_back(p >= cfg.threshold ? Label::kFlaky
                                                    : Label::kNonFlaky);
    truth.push_back(labels[i]);
  }
  result.evaluation = EvaluatePredictions(result.predictions, truth);

  const auto pos = std::count_if(fold.train.begin(), fold.train.end(),
                                 [&](std::size_t i) {
                                   return labels[i] == Label::kFlaky;
                                 });
  const auto neg = static_cast<std::ptrdiff_t>(fold.train.size()) - pos;
  result.majority = ConstantPrediction(
      fold.test, labels, pos > neg ? Label::kFlaky : Label::kNonFlaky);
  return result;
}

}  // namespace

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

Metrics ComputeMetrics(const ConfusionMatrix& cm) {
  Metrics m;
  if (cm.tp + cm.fp > 0) {
    m.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  }
  if (cm.tp + cm.fn > 0) {
    m.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  }
  // 2PR / (P + R), written so it stays defined when only one of P, R is.
  const std::int64_t denom = 2 * cm.tp + cm.fp + cm.fn;
  if (denom > 0) {
    m.f1 = 2.0 * static_cast<double>(cm.tp) / static_cast<double>(denom);
  }
  return m;
}

Metrics MetricsFromPR(double precision, double recall) {
  Metrics m;
  m.precision = precision;
  m.recall = recall;
  m.f1 = precision + recall > 0
             ? 2 * precision * recall / (precision + recall)
             : 0.0;
  return m;
}

Evaluation EvaluatePredictions(const std::vector<Label>& predictions,
                               const std::vector<Label>& truth) {
  if (predictions.size() != truth.size()) {
    throw LengthMismatchError(
        "predictions and truth differ in length: " +
        std::to_string(predictions.size()) + " vs " +
        std::to_string(truth.size()));
  }
  Evaluation ev;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool pred = predictions[i] == Label::kFlaky;
    const bool real = truth[i] == Label::kFlaky;
    if (pred && real) {
      ++ev.confusion.tp;
    } else if (pred) {
      ++ev.confusion.fp;
    } else if (real) {
      ++ev.confusion.fn;
    } else {
      ++ev.confusion.tn;
    }
  }
  ev.metrics = ComputeMetrics(ev.confusion);
  return ev;
}

double TableProbability(std::int64_t a, std::int64_t b, std::int64_t c,
                        std::int64_t d) {
  CheckCells(a, b, c, d);
  return std::exp(LogHypergeometric(a, a + b, c + d, a + c));
}

double FisherExact(std::int64_t a, std::int64_t b, std::int64_t c,
                   std::int64_t d) {
  CheckCells(a, b, c, d);
  const std::int64_t row1 = a + b;
  const std::int64_t row2 = c + d;
  const std::int64_t col1 = a + c;
  const std::int64_t col2 = b + d;
  if (row1 == 0 || row2 == 0 || col1 == 0 || col2 == 0) return 1.0;
  const double log_observed = LogHypergeometric(a, row1, row2, col1);
  // Relative tolerance so ties in exact arithmetic survive rounding.
  const double cutoff = log_observed + std::log1p(1e-7);
  const std::int64_t lo = std::max<std::int64_t>(0, col1 - row2);
  const std::int64_t hi = std::min(row1, col1);
  double p = 0.0;
  for (std::int64_t x = lo; x <= hi; ++x) {
    const double lp = LogHypergeometric(x, row1, row2, col1);
    if (lp <= cutoff) p += std::exp(lp);
  }
  return std::min(1.0, p);
}

double FisherCorrectness(const ConfusionMatrix& a, const ConfusionMatrix& b) {
  return FisherExact(a.Correct(), a.Total() - a.Correct(), b.Correct(),
                     b.Total() - b.Correct());
}

CostReport ComputeCostReport(const Metrics& ours, const Metrics& baseline) {
  if (!ours.precision || !ours.recall || !baseline.precision ||
      !baseline.recall) {
    throw InvalidArgumentError("cost report needs defined precision and recall");
  }
  CostReport r;
  r.test_debugging_cost = 1.0 - *ours.precision;
  r.code_debugging_cost = 1.0 - *ours.recall;
  r.baseline_test_debugging_cost = 1.0 - *baseline.precision;
  r.baseline_code_debugging_cost = 1.0 - *baseline.recall;
  r.test_delta_pp =
      100.0 * (r.baseline_test_debugging_cost - r.test_debugging_cost);
  r.code_delta_pp =
      100.0 * (r.baseline_code_debugging_cost - r.code_debugging_cost);
  auto rate = [](double base, double ours_cost, const char* which) {
    if (base == 0.0) {
      if (ours_cost > 0.0) {
        throw BaselineZeroCostError(std::string("baseline ") + which +
                                    " debugging cost is zero");
      }
      return 0.0;
    }
    return (base - ours_cost) / base;
  };
  r.test_reduction_rate =
      rate(r.baseline_test_debugging_cost, r.test_debugging_cost, "test");
  r.code_reduction_rate =
      rate(r.baseline_code_debugging_cost, r.code_debugging_cost, "code");
  return r;
}

double Quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw EmptyInputError("quantile of an empty list");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

Summary Summarize(std::vector<double> values) {
  if (values.empty()) throw EmptyInputError("no values to summarize");
  std::sort(values.begin(), values.end());
  Summary s;
  s.count = values.size();
  s.min = values.front();
  s.max = values.back();
  s.q25 = Quantile(values, 0.25);
  s.median = Quantile(values, 0.5);
  s.q75 = Quantile(values, 0.75);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
  return s;
}

MetricSummary DescribeMetrics(const std::vector<Metrics>& per_project) {
  if (per_project.empty()) throw EmptyInputError("no projects to describe");
  MetricSummary out;
  auto describe = [&](auto member, std::optional<Summary>& dst,
                      std::size_t& undefined) {
    std::vector<double> values;
    for (const Metrics& m : per_project) {
      if (const auto& v = m.*member) {
        values.push_back(*v);
      } else {
        ++undefined;
      }
    }
    if (!values.empty()) dst = Summarize(std::move(values));
  };
  describe(&Metrics::precision, out.precision, out.undefined_precision);
  describe(&Metrics::recall, out.recall, out.undefined_recall);
  describe(&Metrics::f1, out.f1, out.undefined_f1);
  return out;
}

std::string_view ToString(SplitKind kind) {
  return kind == SplitKind::kStratifiedKFold ? "cv" : "per-project";
}

SplitPlan StratifiedKFold(const std::vector<Label>& labels, int k,
                          double val_fraction, std::uint64_t seed) {
  if (k < 2) throw InvalidArgumentError("k must be at least 2");
  CheckValFraction(val_fraction);
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == Label::kFlaky ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw SingleClassError("stratified splitting needs both classes");
  }
  if (static_cast<std::size_t>(k) > std::min(pos.size(), neg.size())) {
    throw KTooLargeError("k = " + std::to_string(k) +
                         " exceeds the smaller class size " +
                         std::to_string(std::min(pos.size(), neg.size())));
  }
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(pos));
  rng.Shuffle(std::span<std::size_t>(neg));
  std::vector<std::size_t> dealt = pos;
  dealt.insert(dealt.end(), neg.begin(), neg.end());

  SplitPlan plan;
  plan.kind = SplitKind::kStratifiedKFold;
  plan.folds.resize(static_cast<std::size_t>(k));
  std::vector<int> fold_of(labels.size());
  for (std::size_t i = 0; i < dealt.size(); ++i) {
    fold_of[dealt[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  }
  for (int f = 0; f < k; ++f) {
    Fold& fold = plan.folds[static_cast<std::size_t>(f)];
    fold.name = "fold-" + std::to_string(f + 1);
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      (fold_of[i] == f ? fold.test : pool).push_back(i);
    }
    Rng carve(DeriveSeed(seed, static_cast<std::uint64_t>(f)));
    CarveValidation(pool, labels, val_fraction, carve, fold);
  }
  return plan;
}

SplitPlan PerProjectSplits(const std::vector<std::string>& projects,
                           const std::vector<Label>& labels,
                           double val_fraction, std::uint64_t seed) {
  if (projects.size() != labels.size()) {
    throw LengthMismatchError("projects and labels differ in length");
  }
  CheckValFraction(val_fraction);
  std::map<std::string, std::vector<std::size_t>> by_project;
  for (std::size_t i = 0; i < projects.size(); ++i) {
    by_project[projects[i]].push_back(i);
  }
  SplitPlan plan;
  plan.kind = SplitKind::kPerProject;
  std::uint64_t f = 0;
  for (const auto& [project, members] : by_project) {
    Fold fold;
    fold.name = project;
    fold.test = members;
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < projects.size(); ++i) {
      if (projects[i] != project) pool.push_back(i);
    }
    Rng carve(DeriveSeed(seed, f++));
    CarveValidation(pool, labels, val_fraction, carve, fold);
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

Fold HoldoutSplit(const std::vector<Label>& labels, double val_fraction,
                  std::uint64_t seed) {
  CheckValFraction(val_fraction);
  if (labels.empty()) throw EmptyDatasetError("no records to split");
  std::vector<std::size_t> pool(labels.size());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  Fold fold;
  fold.name = "holdout";
  Rng carve(seed);
  CarveValidation(pool, labels, val_fraction, carve, fold);
  return fold;
}

FoldData MaterializeFold(const Fold& fold, const std::vector<Label>& labels,
                         std::uint64_t seed) {
  FoldData data;
  data.train = Tag(fold.train, labels, SplitRole::kTrain, true,
                   DeriveSeed(seed, 0));
  data.val = Tag(fold.val, labels, SplitRole::kVal, true, DeriveSeed(seed, 1));
  data.test = Tag(fold.test, labels, SplitRole::kTest, false, 0);
  return data;
}

ExperimentResult RunExperiment(const std::vector<Eigen::VectorXd>& inputs,
                               const std::vector<Label>& labels,
                               const SplitPlan& plan, const ModelConfig& cfg,
                               int jobs) {
  if (inputs.size() != labels.size()) {
    throw LengthMismatchError("inputs and labels differ in length");
  }
  if (inputs.empty()) throw EmptyDatasetError("no records to evaluate");
  cfg.Validate();

  const std::size_t n_folds = plan.folds.size();
  std::vector<FoldResult> results(n_folds);
  std::vector<std::exception_ptr> errors(n_folds);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t f = next++; f < n_folds; f = next++) {
      try {
        results[f] = RunFold(f, plan.folds[f], inputs, labels, cfg);
      } catch (...) {
        errors[f] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(jobs, 1)), 1,
      std::max<std::size_t>(n_folds, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult out;
  out.kind = plan.kind;
  std::vector<std::size_t> all_test;
  for (const FoldResult& r : results) {
    out.pooled.confusion += r.evaluation.confusion;
    out.majority_pooled.confusion += r.majority.confusion;
    all_test.insert(all_test.end(), r.test.begin(), r.test.end());
  }
  out.pooled.metrics = ComputeMetrics(out.pooled.confusion);
  out.majority_pooled.metrics = ComputeMetrics(out.majority_pooled.confusion);
  out.all_flaky_pooled = ConstantPrediction(all_test, labels, Label::kFlaky);
  out.fisher_vs_majority =
      FisherCorrectness(out.pooled.confusion, out.majority_pooled.confusion);
  out.folds = std::move(results);
  return out;
}

}  // namespace flakylens
