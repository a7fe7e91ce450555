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

#include "flakylens/embeddings.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <set>

#include "flakylens/csv.hpp"
#include "flakylens/errors.hpp"
#include "flakylens/io.hpp"

namespace flakylens {
namespace {

constexpr std::string_view kDimPrefix = "dim=";

int ParseHeader(std::string_view line, int expected_dim) {
  if (!line.starts_with(kDimPrefix)) {
    throw FormatError("embedding file must start with 'dim=<n>'");
  }
  const std::string_view digits = line.substr(kDimPrefix.size());
  int dim = 0;
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
  if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() ||
      dim <= 0) {
    throw FormatError("bad embedding header '" + std::string(line) + "'");
  }
  if (expected_dim > 0 && dim != expected_dim) {
    throw DimensionMismatchError(static_cast<std::size_t>(expected_dim),
                                 static_cast<std::size_t>(dim));
  }
  return dim;
}

void AddRow(EmbeddingTable& table, std::set<std::string>& seen, std::string id,
            std::vector<float> row) {
  if (id.empty()) throw FormatError("embedding row with an empty test id");
  for (float v : row) {
    if (!std::isfinite(v)) {
      throw FormatError("non-finite embedding value for " + id);
    }
  }
  if (!seen.insert(id).second) {
    throw FormatError("duplicate embedding row for " + id);
  }
  table.ids.push_back(std::move(id));
  table.rows.push_back(std::move(row));
}

std::uint32_t LoadLe32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(p[i]);
  }
  return v;
}

void StoreLe32(std::uint32_t v, std::string& out) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>(v & 0xFF));
    v >>= 8;
  }
}

}  // namespace

std::map<std::string, std::size_t> EmbeddingTable::Index() const {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], i);
  return out;
}

EmbeddingTable ParseBinaryEmbeddings(std::string_view data, int expected_dim) {
  const auto nl = data.find('\n');
  if (nl == std::string_view::npos) {
    throw FormatError("embedding file has no header line");
  }
  EmbeddingTable table;
  table.dim = ParseHeader(data.substr(0, nl), expected_dim);
  const std::size_t row_bytes = static_cast<std::size_t>(table.dim) * 4;
  std::set<std::string> seen;
  std::size_t pos = nl + 1;
  while (pos < data.size()) {
    const auto id_end = data.find('\n', pos);
    if (id_end == std::string_view::npos) {
      throw FormatError("truncated embedding row id");
    }
    std::string id(data.substr(pos, id_end - pos));
    pos = id_end + 1;
    if (data.size() - pos < row_bytes) {
      throw FormatError("truncated embedding row for " + id);
    }
    std::vector<float> row(static_cast<std::size_t>(table.dim));
    for (float& v : row) {
      v = std::bit_cast<float>(LoadLe32(data.data() + pos));
      pos += 4;
    }
    AddRow(table, seen, std::move(id), std::move(row));
  }
  return table;
}

EmbeddingTable ParseCsvEmbeddings(std::string_view text, int expected_dim) {
  const std::vector<CsvRow> rows = ParseCsv(text);
  if (rows.empty() || rows.front().fields.size() != 1) {
    throw FormatError("embedding CSV must start with a 'dim=<n>' line");
  }
  EmbeddingTable table;
  table.dim = ParseHeader(rows.front().fields[0], expected_dim);
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() != static_cast<std::size_t>(table.dim) + 1) {
      throw MalformedCsvError("expected " + std::to_string(table.dim + 1) +
                                  " fields, got " +
                                  std::to_string(row.fields.size()),
                              row.line);
    }
    std::vector<float> values;
    values.reserve(static_cast<std::size_t>(table.dim));
    for (std::size_t i = 1; i < row.fields.size(); ++i) {
      auto v = ParseDouble(row.fields[i]);
      if (!v) {
        throw MalformedCsvError("bad number '" + row.fields[i] + "'", row.line);
      }
      values.push_back(static_cast<float>(*v));
    }
    AddRow(table, seen, row.fields[0], std::move(values));
  }
  return table;
}

EmbeddingTable ReadEmbeddings(const std::filesystem::path& path,
                              int expected_dim) {
  const std::string data = ReadFile(path);
  if (path.extension() == ".csv") return ParseCsvEmbeddings(data, expected_dim);
  return ParseBinaryEmbeddings(data, expected_dim);
}

std::string SerializeBinaryEmbeddings(const EmbeddingTable& table) {
  std::string out = std::string(kDimPrefix) + std::to_string(table.dim) + "\n";
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    if (table.rows[i].size() != static_cast<std::size_t>(table.dim)) {
      throw DimensionMismatchError(static_cast<std::size_t>(table.dim),
                                   table.rows[i].size());
    }
    if (table.ids[i].find('\n') != std::string::npos) {
      throw FormatError("test id contains a line break");
    }
    out += table.ids[i];
    out.push_back('\n');
    for (float v : table.rows[i]) StoreLe32(std::bit_cast<std::uint32_t>(v), out);
  }
  return out;
}

std::string SerializeCsvEmbeddings(const EmbeddingTable& table) {
  std::string out = std::string(kDimPrefix) + std::to_string(table.dim) + "\n";
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    if (table.rows[i].size() != static_cast<std::size_t>(table.dim)) {
      throw DimensionMismatchError(static_cast<std::size_t>(table.dim),
                                   table.rows[i].size());
    }
    out += CsvEscape(table.ids[i]);
    for (float v : table.rows[i]) {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out.push_back(',');
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void WriteEmbeddings(const std::filesystem::path& path,
                     const EmbeddingTable& table) {
  WriteFile(path, path.extension() == ".csv" ? SerializeCsvEmbeddings(table)
                                             : SerializeBinaryEmbeddings(table));
}

}  // namespace flakylens
