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

#include <string>

#include <gtest/gtest.h>

#include "flakylens/errors.hpp"
#include "json.hpp"

namespace flakylens {
namespace {

using nlohmann::json;

// Two folds over six tests in two projects.
struct Fixture {
  ExperimentResult result;
  ReportContext ctx;
};

FoldResult MakeFold(std::string name, std::vector<std::size_t> test,
                    std::vector<Label> preds, const std::vector<Label>& labels) {
  FoldResult f;
  f.name = std::move(name);
  f.test = std::move(test);
  f.predictions = std::move(preds);
  std::vector<Label> truth;
  for (std::size_t i : f.test) {
    truth.push_back(labels[i]);
    f.p_flaky.push_back(0.25);
  }
  f.evaluation = EvaluatePredictions(f.predictions, truth);
  f.majority = EvaluatePredictions(std::vector<Label>(f.test.size(), Label::kNonFlaky), truth);
  f.log.best_epoch = 3;
  f.log.stopped_epoch = 8;
  return f;
}

Fixture MakeFixture() {
  Fixture fx;
  fx.ctx.labels = {Label::kFlaky, Label::kNonFlaky, Label::kFlaky,
                   Label::kNonFlaky, Label::kFlaky, Label::kNonFlaky};
  fx.ctx.projects = {"a", "a", "a", "b", "b", "b"};
  for (int i = 0; i < 6; ++i) fx.ctx.test_ids.push_back("t" + std::to_string(i));
  fx.ctx.k = 2;
  fx.ctx.preprocess_mode = "over-budget";
  fx.ctx.embeddings = "fallback";
  fx.ctx.input_rows = 7;
  fx.ctx.dropped = {{"missing", 1}};
  const auto& l = fx.ctx.labels;
  fx.result.folds.push_back(
      MakeFold("fold-0", {0, 1, 2}, {Label::kFlaky, Label::kNonFlaky, Label::kNonFlaky}, l));
  fx.result.folds.push_back(
      MakeFold("fold-1", {3, 4, 5}, {Label::kFlaky, Label::kFlaky, Label::kNonFlaky}, l));
  fx.result.pooled = EvaluatePredictions(
      {Label::kFlaky, Label::kNonFlaky, Label::kNonFlaky, Label::kFlaky, Label::kFlaky,
       Label::kNonFlaky},
      l);
  fx.result.majority_pooled = EvaluatePredictions(std::vector<Label>(6, Label::kNonFlaky), l);
  fx.result.all_flaky_pooled = EvaluatePredictions(std::vector<Label>(6, Label::kFlaky), l);
  fx.result.fisher_vs_majority =
      FisherCorrectness(fx.result.pooled.confusion, fx.result.majority_pooled.confusion);
  return fx;
}

TEST(ReportTest, JsonIsDeterministicAndComplete) {
  const Fixture fx = MakeFixture();
  const std::string a = BuildReportJson(fx.result, fx.ctx);
  EXPECT_EQ(a, BuildReportJson(fx.result, fx.ctx));
  const json doc = json::parse(a);
  EXPECT_EQ(doc["format"], "flaky-lens-report");
  EXPECT_EQ(doc["version"], 1);
  EXPECT_EQ(doc["k"], 2);
  EXPECT_EQ(doc["corpus"]["records"], 6);
  EXPECT_EQ(doc["corpus"]["flaky"], 3);
  EXPECT_EQ(doc["corpus"]["dropped"]["missing"], 1);
  EXPECT_EQ(doc["folds"].size(), 2u);
  EXPECT_EQ(doc["predictions"].size(), 6u);
  EXPECT_EQ(doc["predictions"][3]["test_id"], "t3");
  EXPECT_EQ(doc["predictions"][3]["prediction"], "Flaky");
  EXPECT_EQ(doc["predictions"][3]["label"], "NonFlaky");
  EXPECT_EQ(doc["aggregate"]["model"]["confusion"]["tp"], 2);
  EXPECT_EQ(doc["per_project"]["projects"].size(), 2u);
  EXPECT_EQ(doc["per_project"]["projects"][1]["project"], "b");
  EXPECT_EQ(doc["baselines"][0]["name"], WhiteBoxBaseline().name);
  EXPECT_EQ(doc["cost"]["baseline"], WhiteBoxBaseline().name);
  EXPECT_NEAR(doc["cost"]["test_debugging_cost"].get<double>(), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(a.find("timestamp"), std::string::npos);
}

TEST(ReportTest, UndefinedMetricsGiveNullCost) {
  Fixture fx = MakeFixture();
  for (FoldResult& f : fx.result.folds) {
    f.predictions.assign(f.test.size(), Label::kNonFlaky);
  }
  fx.result.pooled = fx.result.majority_pooled;
  const json doc = json::parse(BuildReportJson(fx.result, fx.ctx));
  EXPECT_TRUE(doc["cost"].is_null());
  EXPECT_TRUE(doc["aggregate"]["model"]["metrics"]["precision"].is_null());
  EXPECT_EQ(RenderMarkdown(doc.dump()).find("## Debugging cost"), std::string::npos);
}

TEST(ReportTest, LengthMismatchIsRejected) {
  Fixture fx = MakeFixture();
  fx.ctx.projects.pop_back();
  EXPECT_THROW(BuildReportJson(fx.result, fx.ctx), LengthMismatchError);
}

TEST(ReportTest, MarkdownSections) {
  const Fixture fx = MakeFixture();
  const std::string md = RenderMarkdown(BuildReportJson(fx.result, fx.ctx));
  EXPECT_TRUE(md.starts_with("# Flaky test prediction report\n"));
  for (const char* needle :
       {"## Overall results", "| Model | 66.7% | 66.7% | 66.7% |",
        "| FlakeFlagger white-box (reported) | 60.0% | 72.0% |",
        "| FlakeFlagger black-box (reported) | 21.0% | 52.0% |",
        "## Debugging cost vs FlakeFlagger white-box", "## Per-project summary",
        "## Per-project results", "## Folds", "| fold-1 | 3 |", "dropped: missing 1",
        "Protocol: cv (k=2)"}) {
    EXPECT_NE(md.find(needle), std::string::npos) << needle << "\n" << md;
  }
  EXPECT_LT(md.find("## Overall results"), md.find("## Debugging cost"));
  EXPECT_LT(md.find("## Per-project summary"), md.find("## Folds"));
}

TEST(ReportTest, RenderRejectsOtherDocuments) {
  EXPECT_THROW(RenderMarkdown("not json"), FormatError);
  EXPECT_THROW(RenderMarkdown(R"({"format":"other"})"), FormatError);
  EXPECT_THROW(RenderMarkdown(R"({"format":"flaky-lens-report"})"), FormatError);
}

}  // namespace
}  // namespace flakylens
