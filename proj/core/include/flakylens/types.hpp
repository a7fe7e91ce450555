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

#ifndef FLAKYLENS_TYPES_HPP_
#define FLAKYLENS_TYPES_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace flakylens {

// Flaky is the positive class everywhere in the library.
enum class Label { kNonFlaky = 0, kFlaky = 1 };

inline std::string_view ToString(Label label) {
  return label == Label::kFlaky ? "Flaky" : "NonFlaky";
}

// Total over the accepted spellings; nullopt for anything else.
std::optional<Label> ParseLabel(std::string_view text);

}  // namespace flakylens

#endif  // FLAKYLENS_TYPES_HPP_
