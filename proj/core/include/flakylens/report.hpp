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

// Experiment reports: a JSON document with per-fold and aggregate sections
// and a Markdown rendering of it.

#ifndef FLAKYLENS_REPORT_HPP_
#define FLAKYLENS_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "flakylens/classifier.hpp"
#include "flakylens/evaluation.hpp"
#include "flakylens/types.hpp"

namespace flakylens {

// A published result consumed as constants.
struct BaselineRow {
  std::string name;
  double precision = 0;
  double recall = 0;
};

BaselineRow WhiteBoxBaseline();
BaselineRow BlackBoxBaseline();

struct ReportContext {
  std::vector<std::string> test_ids;
  std::vector<std::string> projects;
  std::vector<Label> labels;
  ModelConfig config;
  int k = 10;
  double val_fraction = 0.2;
  std::string preprocess_mode;
  std::string embeddings;
  std::size_t input_rows = 0;
  std::map<std::string, std::size_t> dropped;
  // The first row is the reference for the cost comparison.
  std::vector<BaselineRow> baselines = {WhiteBoxBaseline(), BlackBoxBaseline()};
};

// Keys are sorted and no timestamps are written, so identical inputs give
// identical bytes. Throws LengthMismatchError.
std::string BuildReportJson(const ExperimentResult& result,
                            const ReportContext& context);

// Throws FormatError if `report_json` is not a report.
std::string RenderMarkdown(const std::string& report_json);

}  // namespace flakylens

#endif  // FLAKYLENS_REPORT_HPP_
