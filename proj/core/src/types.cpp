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

#include "flakylens/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace flakylens {

std::optional<Label> ParseLabel(std::string_view text) {
  std::string v;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) {
      v.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (v == "flaky" || v == "1" || v == "true") return Label::kFlaky;
  if (v == "nonflaky" || v == "non-flaky" || v == "non_flaky" || v == "0" ||
      v == "false") {
    return Label::kNonFlaky;
  }
  return std::nullopt;
}

}  // namespace flakylens
