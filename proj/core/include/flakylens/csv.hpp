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

// Minimal RFC 4180 reading and writing.

#ifndef FLAKYLENS_CSV_HPP_
#define FLAKYLENS_CSV_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flakylens {

struct CsvRow {
  std::vector<std::string> fields;
  // 1-based physical line the record starts on.
  std::size_t line = 0;
};

// Quoted fields may contain commas, quotes ("") and newlines. Blank lines
// are skipped. Throws MalformedCsvError on an unterminated quote or stray
// text after a closing quote.
std::vector<CsvRow> ParseCsv(std::string_view text);

// Quotes the field when it contains a comma, quote or line break.
std::string CsvEscape(std::string_view field);

std::string CsvJoin(const std::vector<std::string>& fields);

// Shortest text that reads back to the same double.
std::string FormatDouble(double value);

std::optional<double> ParseDouble(std::string_view text);

}  // namespace flakylens

#endif  // FLAKYLENS_CSV_HPP_
