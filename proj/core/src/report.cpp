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

#include "flakylens/report.hpp"

#include <cstdio>
#include <optional>

#include "flakylens/errors.hpp"
#include "json.hpp"

namespace flakylens {
namespace {

using nlohmann::json;

json OptionalJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json MetricsJson(const Metrics& m) {
  return {{"precision", OptionalJson(m.precision)},
          {"recall", OptionalJson(m.recall)},
          {"f1", OptionalJson(m.f1)}};
}

json ConfusionJson(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

json EvaluationJson(const Evaluation& e) {
  return {{"confusion", ConfusionJson(e.confusion)},
          {"metrics", MetricsJson(e.metrics)}};
}

json SummaryJson(const std::optional<Summary>& s) {
  if (!s) return nullptr;
  return {{"min", s->min},       {"q25", s->q25}, {"mean", s->mean},
          {"median", s->median}, {"q75", s->q75}, {"max", s->max},
          {"count", s->count}};
}

json ConfigJson(const ModelConfig& cfg) {
  return {{"input_dim", cfg.input_dim},
          {"hidden_dim", cfg.hidden_dim},
          {"dropout_rate", cfg.dropout_rate},
          {"learning_rate", cfg.learning_rate},
          {"batch_size", cfg.batch_size},
          {"max_epochs", cfg.max_epochs},
          {"patience", cfg.patience},
          {"seed", cfg.seed},
          {"threshold", cfg.threshold},
          {"weight_decay", cfg.weight_decay}};
}

std::string Percent(const json& v) {
  if (v.is_null()) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", v.get<double>() * 100.0);
  return buf;
}

std::string Points(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%+.1f", v * 100.0);
  return buf;
}

std::string Pvalue(double p) {
  if (p < 1e-4) return "< 0.0001";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", p);
  return buf;
}

std::string MetricsRow(const std::string& name, const json& metrics) {
  return "| " + name + " | " + Percent(metrics.at("precision")) + " | " +
         Percent(metrics.at("recall")) + " | " + Percent(metrics.at("f1")) +
         " |\n";
}

}  // namespace

BaselineRow WhiteBoxBaseline() {
  return {"FlakeFlagger white-box", 0.60, 0.72};
}

BaselineRow BlackBoxBaseline() {
  return {"FlakeFlagger black-box", 0.21, 0.52};
}

std::string BuildReportJson(const ExperimentResult& result,
                            const ReportContext& ctx) {
  const std::size_t n = ctx.labels.size();
  if (ctx.test_ids.size() != n || ctx.projects.size() != n) {
    throw LengthMismatchError("report context columns differ in length");
  }

  json doc;
  doc["format"] = "flaky-lens-report";
  doc["version"] = 1;
  doc["protocol"] = std::string(ToString(result.kind));
  doc["k"] = result.kind == SplitKind::kStratifiedKFold ? json(ctx.k)
                                                         : json(nullptr);
  doc["val_fraction"] = ctx.val_fraction;
  doc["seed"] = ctx.config.seed;
  doc["config"] = ConfigJson(ctx.config);
  doc["preprocess"] = ctx.preprocess_mode;
  doc["embeddings"] = ctx.embeddings;

  std::size_t flaky = 0;
  for (Label l : ctx.labels) flaky += l == Label::kFlaky ? 1 : 0;
  json dropped = json::object();
  for (const auto& [reason, count] : ctx.dropped) dropped[reason] = count;
  doc["corpus"] = {{"records", n},
                   {"flaky", flaky},
                   {"non_flaky", n - flaky},
                   {"input_rows", ctx.input_rows},
                   {"dropped", dropped}};

  json folds = json::array();
  json predictions = json::array();
  std::map<std::string, ConfusionMatrix> by_project;
  for (const FoldResult& f : result.folds) {
    if (f.predictions.size() != f.test.size() ||
        f.p_flaky.size() != f.test.size()) {
      throw LengthMismatchError("fold " + f.name + " is inconsistent");
    }
    folds.push_back({{"name", f.name},
                     {"test_count", f.test.size()},
                     {"model", EvaluationJson(f.evaluation)},
                     {"majority", EvaluationJson(f.majority)},
                     {"best_epoch", f.log.best_epoch},
                     {"stopped_epoch", f.log.stopped_epoch}});
    for (std::size_t j = 0; j < f.test.size(); ++j) {
      const std::size_t i = f.test[j];
      if (i >= n) throw LengthMismatchError("fold index out of range");
      const Label truth = ctx.labels[i];
      const Label pred = f.predictions[j];
      ConfusionMatrix& cm = by_project[ctx.projects[i]];
      if (pred == Label::kFlaky) {
        ++(truth == Label::kFlaky ? cm.tp : cm.fp);
      } else {
        ++(truth == Label::kFlaky ? cm.fn : cm.tn);
      }
      predictions.push_back({{"test_id", ctx.test_ids[i]},
                             {"project", ctx.projects[i]},
                             {"fold", f.name},
                             {"label", std::string(ToString(truth))},
                             {"prediction", std::string(ToString(pred))},
                             {"p_flaky", f.p_flaky[j]}});
    }
  }
  doc["folds"] = folds;
  doc["predictions"] = predictions;

  doc["aggregate"] = {
      {"model", EvaluationJson(result.pooled)},
      {"majority", EvaluationJson(result.majority_pooled)},
      {"all_flaky", EvaluationJson(result.all_flaky_pooled)},
      {"fisher_p_vs_majority", result.fisher_vs_majority}};

  json projects = json::array();
  std::vector<Metrics> project_metrics;
  for (const auto& [name, cm] : by_project) {
    const Metrics m = ComputeMetrics(cm);
    project_metrics.push_back(m);
    projects.push_back({{"project", name},
                        {"flaky", cm.tp + cm.fn},
                        {"non_flaky", cm.fp + cm.tn},
                        {"confusion", ConfusionJson(cm)},
                        {"metrics", MetricsJson(m)}});
  }
  json per_project = {{"projects", projects}};
  if (!project_metrics.empty()) {
    const MetricSummary s = DescribeMetrics(project_metrics);
    per_project["summary"] = {{"precision", SummaryJson(s.precision)},
                              {"recall", SummaryJson(s.recall)},
                              {"f1", SummaryJson(s.f1)}};
    per_project["undefined"] = {{"precision", s.undefined_precision},
                                {"recall", s.undefined_recall},
                                {"f1", s.undefined_f1}};
  }
  doc["per_project"] = per_project;

  json baselines = json::array();
  for (const BaselineRow& b : ctx.baselines) {
    baselines.push_back({{"name", b.name},
                         {"metrics", MetricsJson(MetricsFromPR(b.precision,
                                                               b.recall))}});
  }
  doc["baselines"] = baselines;

  doc["cost"] = nullptr;
  const Metrics& ours = result.pooled.metrics;
  if (!ctx.baselines.empty() && ours.precision && ours.recall) {
    const BaselineRow& ref = ctx.baselines.front();
    try {
      const CostReport c =
          ComputeCostReport(ours, MetricsFromPR(ref.precision, ref.recall));
      doc["cost"] = {
          {"baseline", ref.name},
          {"test_debugging_cost", c.test_debugging_cost},
          {"code_debugging_cost", c.code_debugging_cost},
          {"baseline_test_debugging_cost", c.baseline_test_debugging_cost},
          {"baseline_code_debugging_cost", c.baseline_code_debugging_cost},
          {"test_delta_pp", c.test_delta_pp},
          {"code_delta_pp", c.code_delta_pp},
          {"test_reduction_rate", c.test_reduction_rate},
          {"code_reduction_rate", c.code_reduction_rate}};
    } catch (const BaselineZeroCostError&) {
      // Left null: a perfect baseline leaves nothing to reduce.
    }
  }
  return doc.dump(2) + "\n";
}

std::string RenderMarkdown(const std::string& report_json) {
  json doc;
  try {
    doc = json::parse(report_json);
  } catch (const json::exception& e) {
    throw FormatError(std::string("report is not JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "flaky-lens-report") {
    throw FormatError("not a flaky-lens report");
  }
  try {
    std::string md = "# Flaky test prediction report\n\n";
    const json& corpus = doc.at("corpus");
    md += "Protocol: " + doc.at("protocol").get<std::string>();
    if (!doc.at("k").is_null()) {
      md += " (k=" + std::to_string(doc.at("k").get<int>()) + ")";
    }
    md += ", seed " + std::to_string(doc.at("seed").get<std::uint64_t>()) +
          ", preprocessing " + doc.at("preprocess").get<std::string>() +
          ", embeddings " + doc.at("embeddings").get<std::string>() + ".\n\n";
    md += "Corpus: " + std::to_string(corpus.at("records").get<long>()) +
          " tests (" + std::to_string(corpus.at("flaky").get<long>()) +
          " flaky, " + std::to_string(corpus.at("non_flaky").get<long>()) +
          " non-flaky)";
    const json& dropped = corpus.at("dropped");
    if (!dropped.empty()) {
      md += "; dropped:";
      bool first = true;
      for (const auto& [reason, count] : dropped.items()) {
        md += std::string(first ? " " : ", ") + reason + " " +
              std::to_string(count.get<long>());
        first = false;
      }
    }
    md += ".\n\n";

    const json& agg = doc.at("aggregate");
    md += "## Overall results\n\n";
    md += "| Approach | Precision | Recall | F1 |\n";
    md += "|---|---|---|---|\n";
    md += MetricsRow("Model", agg.at("model").at("metrics"));
    md += MetricsRow("Majority class", agg.at("majority").at("metrics"));
    md += MetricsRow("All flaky", agg.at("all_flaky").at("metrics"));
    for (const json& b : doc.at("baselines")) {
      md += MetricsRow(b.at("name").get<std::string>() + " (reported)",
                       b.at("metrics"));
    }
    md += "\nFisher exact test, model vs majority class (correct/incorrect): "
          "p " +
          Pvalue(agg.at("fisher_p_vs_majority").get<double>()) + ".\n\n";

    const json& cost = doc.at("cost");
    if (!cost.is_null()) {
      md += "## Debugging cost vs " + cost.at("baseline").get<std::string>() +
            "\n\n";
      md += "| Cost | Model | Baseline | Delta (pp) | Reduction rate |\n";
      md += "|---|---|---|---|---|\n";
      md += "| Test debugging (1 - precision) | " +
            Percent(cost.at("test_debugging_cost")) + " | " +
            Percent(cost.at("baseline_test_debugging_cost")) + " | " +
            Points(cost.at("test_delta_pp").get<double>() / 100.0) + " | " +
            Percent(cost.at("test_reduction_rate")) + " |\n";
      md += "| Code debugging (1 - recall) | " +
            Percent(cost.at("code_debugging_cost")) + " | " +
            Percent(cost.at("baseline_code_debugging_cost")) + " | " +
            Points(cost.at("code_delta_pp").get<double>() / 100.0) + " | " +
            Percent(cost.at("code_reduction_rate")) + " |\n\n";
    }

    const json& pp = doc.at("per_project");
    if (pp.contains("summary")) {
      md += "## Per-project summary\n\n";
      md += "| Metric | Min | 25% | Mean | Median | 75% | Max | Undefined |\n";
      md += "|---|---|---|---|---|---|---|---|\n";
      for (const char* name : {"precision", "recall", "f1"}) {
        const json& s = pp.at("summary").at(name);
        const std::string undefined =
            std::to_string(pp.at("undefined").at(name).get<long>());
        std::string label = name;
        label[0] = static_cast<char>(label[0] - 'a' + 'A');
        if (name == std::string("f1")) label = "F1";
        if (s.is_null()) {
          md += "| " + label +
                " | - | - | - | - | - | - | " + undefined + " |\n";
          continue;
        }
        md += "| " + label + " | " + Percent(s.at("min")) + " | " +
              Percent(s.at("q25")) + " | " + Percent(s.at("mean")) + " | " +
              Percent(s.at("median")) + " | " + Percent(s.at("q75")) + " | " +
              Percent(s.at("max")) + " | " + undefined + " |\n";
      }
      md += "\n## Per-project results\n\n";
      md += "| Project | Flaky | Non-flaky | Precision | Recall | F1 |\n";
      md += "|---|---|---|---|---|---|\n";
      for (const json& p : pp.at("projects")) {
        const json& m = p.at("metrics");
        md += "| " + p.at("project").get<std::string>() + " | " +
              std::to_string(p.at("flaky").get<long>()) + " | " +
              std::to_string(p.at("non_flaky").get<long>()) + " | " +
              Percent(m.at("precision")) + " | " + Percent(m.at("recall")) +
              " | " + Percent(m.at("f1")) + " |\n";
      }
      md += "\n";
    }

    md += "## Folds\n\n";
    md += "| Fold | Tests | Precision | Recall | F1 | Best epoch |\n";
    md += "|---|---|---|---|---|---|\n";
    for (const json& f : doc.at("folds")) {
      const json& m = f.at("model").at("metrics");
      md += "| " + f.at("name").get<std::string>() + " | " +
            std::to_string(f.at("test_count").get<long>()) + " | " +
            Percent(m.at("precision")) + " | " + Percent(m.at("recall")) +
            " | " + Percent(m.at("f1")) + " | " +
            std::to_string(f.at("best_epoch").get<int>()) + " |\n";
    }
    return md;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace flakylens
