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

#ifndef FLAKYLENS_IO_HPP_
#define FLAKYLENS_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace flakylens {

// Whole-file binary read. Throws IoError.
std::string ReadFile(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it into place, so
// readers never see a partial file. Creates parent directories. Throws
// IoError.
void WriteFile(const std::filesystem::path& path, std::string_view content);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view data);

}  // namespace flakylens

#endif  // FLAKYLENS_IO_HPP_
