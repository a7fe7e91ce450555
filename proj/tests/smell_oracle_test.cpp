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

#include <gtest/gtest.h>

#include "oracle_support.hpp"
#include "test_support.hpp"

namespace flakylens {
namespace {

TEST(SmellOracleTest, StrictDetectorAgreesWithEveryLabel) {
  const testing::OracleOutcome out =
      testing::RunSmellOracle(testing::DataPath("smell_oracle"));
  EXPECT_GE(out.snippets, 40u);
  for (std::size_t k = 0; k < kAllSmells.size(); ++k) {
    EXPECT_GE(out.positives[k], 5) << ToString(kAllSmells[k]);
    EXPECT_GE(out.negatives[k], 5) << ToString(kAllSmells[k]);
  }
  for (const auto& m : out.mismatches) ADD_FAILURE() << m;
}

}  // namespace
}  // namespace flakylens
