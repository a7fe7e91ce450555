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

#include "flakylens/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <spdlog/spdlog.h>

#include "flakylens/csv.hpp"
#include "flakylens/errors.hpp"
#include "flakylens/io.hpp"
#include "flakylens/java_lexer.hpp"

namespace flakylens {
namespace {

struct ParsedSource {
  std::shared_ptr<const java::CompilationUnit> unit;
  java::TestExtraction extraction;
};

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

std::string SimpleClassName(std::string_view name) {
  const auto pos = name.find_last_of(".$");
  return std::string(pos == std::string_view::npos ? name : name.substr(pos + 1));
}

std::map<std::string, std::size_t> HeaderIndex(const CsvRow& header) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    index.emplace(Trim(header.fields[i]), i);
  }
  return index;
}

std::size_t RequireColumn(const std::map<std::string, std::size_t>& index,
                          const std::string& name, std::size_t line) {
  auto it = index.find(name);
  if (it == index.end()) {
    throw MalformedCsvError("missing column '" + name + "'", line);
  }
  return it->second;
}

}  // namespace

std::string_view ToString(CorpusFormat format) {
  return format == CorpusFormat::kFlakeFlagger ? "flakeflagger" : "idoft";
}

std::optional<CorpusFormat> ParseCorpusFormat(std::string_view text) {
  if (text == "flakeflagger") return CorpusFormat::kFlakeFlagger;
  if (text == "idoft") return CorpusFormat::kIdoft;
  return std::nullopt;
}

std::string_view ToString(Origin origin) {
  return origin == Origin::kMeasured ? "Measured" : "FixedVersion";
}

std::optional<Origin> ParseOrigin(std::string_view text) {
  const std::string t = Trim(text);
  if (t == "Measured") return Origin::kMeasured;
  if (t == "FixedVersion") return Origin::kFixedVersion;
  return std::nullopt;
}

std::string_view ToString(DropReason reason) {
  switch (reason) {
    case DropReason::kMissing:
      return "missing";
    case DropReason::kEmpty:
      return "empty";
    case DropReason::kNonJava:
      return "non_java";
    case DropReason::kMethodNotFound:
      return "method_not_found";
    case DropReason::kDuplicateId:
      return "duplicate_id";
  }
  return "";
}

std::map<DropReason, std::size_t> LoadResult::DropCounts() const {
  std::map<DropReason, std::size_t> counts;
  for (const DroppedRow& d : dropped) ++counts[d.reason];
  return counts;
}

std::string NormalizeMethodName(std::string_view method) {
  std::string m = Trim(method);
  const auto bracket = m.find('[');
  if (bracket != std::string::npos && m.back() == ']') m.erase(bracket);
  return Trim(m);
}

std::string MakeTestId(std::string_view project, std::string_view test_class,
                       std::string_view method) {
  std::string id(project);
  id += "::";
  id += test_class;
  id += '#';
  id += method;
  return id;
}

bool LooksLikeJava(std::string_view source) {
  std::vector<java::Token> tokens;
  try {
    tokens = java::Lex(source);
  } catch (const LexError&) {
    return false;
  }
  return std::any_of(tokens.begin(), tokens.end(), [](const java::Token& t) {
    if (t.kind == java::TokenKind::kKeyword) {
      return t.text == "class" || t.text == "interface" || t.text == "enum";
    }
    return t.kind == java::TokenKind::kIdentifier && t.text == "record";
  });
}

LoadResult LoadCorpusFromText(std::string_view index_text,
                              const std::filesystem::path& sources_root,
                              CorpusFormat format,
                              const java::TestConventions& conventions) {
  std::error_code ec;
  if (!std::filesystem::is_directory(sources_root, ec)) {
    throw SourcesRootMissingError("sources root is not a directory: " +
                                  sources_root.string());
  }
  const std::vector<CsvRow> rows = ParseCsv(index_text);
  LoadResult result;
  if (rows.empty()) return result;

  const auto header = HeaderIndex(rows.front());
  const std::size_t hline = rows.front().line;
  const std::size_t c_project = RequireColumn(header, "project", hline);
  const std::size_t c_class = RequireColumn(header, "test_class", hline);
  const std::size_t c_method = RequireColumn(header, "test_method", hline);
  const std::size_t c_label = RequireColumn(header, "label", hline);
  const std::size_t c_path = RequireColumn(header, "source_path", hline);
  std::optional<std::size_t> c_origin;
  if (format == CorpusFormat::kIdoft) {
    c_origin = RequireColumn(header, "origin", hline);
  }
  std::optional<std::size_t> c_exec;
  if (auto it = header.find("exec_time"); it != header.end()) c_exec = it->second;

  std::map<std::filesystem::path, std::optional<ParsedSource>> java_cache;
  std::set<std::string> seen_ids;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    ++result.input_rows;
    if (row.fields.size() != rows.front().fields.size()) {
      throw MalformedCsvError(
          "expected " + std::to_string(rows.front().fields.size()) +
              " fields, got " + std::to_string(row.fields.size()),
          row.line);
    }
    CorpusRecord rec;
    rec.project = Trim(row.fields[c_project]);
    rec.test_class = Trim(row.fields[c_class]);
    rec.test_method = NormalizeMethodName(row.fields[c_method]);
    if (rec.project.empty() || rec.test_class.empty() || rec.test_method.empty()) {
      throw MalformedCsvError("empty project, test_class or test_method",
                              row.line);
    }
    auto label = ParseLabel(row.fields[c_label]);
    if (!label) throw InvalidLabelError(row.fields[c_label], row.line);
    rec.label = *label;
    if (c_origin) {
      auto origin = ParseOrigin(row.fields[*c_origin]);
      if (!origin) {
        throw MalformedCsvError("invalid origin '" + row.fields[*c_origin] + "'",
                                row.line);
      }
      rec.origin = *origin;
    }
    if (c_exec && !IsBlank(row.fields[*c_exec])) {
      auto t = ParseDouble(row.fields[*c_exec]);
      if (!t || *t < 0) {
        throw MalformedCsvError("invalid exec_time '" + row.fields[*c_exec] + "'",
                                row.line);
      }
      rec.execution_time = *t;
    }
    rec.test_id = MakeTestId(rec.project, rec.test_class, rec.test_method);

    auto drop = [&](DropReason reason) {
      spdlog::debug("dropping {} (line {}): {}", rec.test_id, row.line,
                    ToString(reason));
      result.dropped.push_back({row.line, rec.test_id, reason});
    };

    const std::string rel = Trim(row.fields[c_path]);
    const std::filesystem::path path = sources_root / rel;
    if (rel.empty() || !std::filesystem::is_regular_file(path, ec)) {
      drop(DropReason::kMissing);
      continue;
    }
    const std::string simple_class = SimpleClassName(rec.test_class);
    const bool whole_file = path.extension() == ".java";

    std::optional<ParsedSource> parsed;
    if (whole_file && java_cache.contains(path)) {
      parsed = java_cache[path];
    } else {
      const std::string text = ReadFile(path);
      if (IsBlank(text)) {
        drop(DropReason::kEmpty);
        continue;
      }
      try {
        if (LooksLikeJava(text)) {
          auto unit = std::make_shared<java::CompilationUnit>(
              java::ParseCompilationUnit(text));
          parsed = ParsedSource{unit, java::ExtractTestMethods(*unit, conventions)};
        } else if (!whole_file) {
          auto unit = std::make_shared<java::CompilationUnit>(
              java::ParseMethodSnippet(text, simple_class));
          parsed = ParsedSource{unit, java::ExtractTestMethods(*unit, conventions)};
        }
      } catch (const LexError&) {
        parsed.reset();
      }
      if (whole_file) java_cache[path] = parsed;
    }
    if (!parsed) {
      drop(DropReason::kNonJava);
      continue;
    }

    const java::ClassDecl* owner = nullptr;
    const java::MethodDecl* method =
        java::FindMethod(*parsed->unit, simple_class, rec.test_method, &owner);
    if (method == nullptr && !whole_file && parsed->unit->type_decls.size() == 1 &&
        parsed->unit->type_decls.front().methods.size() == 1) {
      owner = &parsed->unit->type_decls.front();
      method = &owner->methods.front();
    }
    if (method == nullptr || !method->has_body) {
      drop(DropReason::kMethodNotFound);
      continue;
    }
    if (!seen_ids.insert(rec.test_id).second) {
      drop(DropReason::kDuplicateId);
      continue;
    }
    rec.unit = parsed->unit;
    rec.method = method;
    rec.owner = owner;
    rec.init_method = parsed->extraction.InitMethodFor(*owner);
    rec.source_text = std::string(parsed->unit->MethodText(*method));
    result.records.push_back(std::move(rec));
  }
  spdlog::info("loaded {} of {} corpus rows ({} dropped)", result.records.size(),
               result.input_rows, result.dropped.size());
  return result;
}

LoadResult LoadCorpus(const std::filesystem::path& index_csv,
                      const std::filesystem::path& sources_root,
                      CorpusFormat format,
                      const java::TestConventions& conventions) {
  return LoadCorpusFromText(ReadFile(index_csv), sources_root, format,
                            conventions);
}

std::size_t ConvertPublishedLayout(const std::filesystem::path& input_csv,
                                   const std::filesystem::path& out_dir,
                                   std::string_view code_column) {
  const std::vector<CsvRow> rows = ParseCsv(ReadFile(input_csv));
  if (rows.empty()) throw MalformedCsvError("empty input", 1);
  const auto header = HeaderIndex(rows.front());
  const std::size_t hline = rows.front().line;
  const std::size_t c_project = RequireColumn(header, "project", hline);
  const std::size_t c_name = RequireColumn(header, "test_name", hline);
  const std::size_t c_flaky = RequireColumn(header, "flaky", hline);
  const std::size_t c_code = RequireColumn(header, std::string(code_column), hline);

  std::string index = "project,test_class,test_method,label,source_path\n";
  std::size_t written = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() != rows.front().fields.size()) {
      throw MalformedCsvError("field count differs from header", row.line);
    }
    std::string name = Trim(row.fields[c_name]);
    std::string cls;
    std::string method = name;
    if (const auto hash = name.find('#'); hash != std::string::npos) {
      cls = name.substr(0, hash);
      method = name.substr(hash + 1);
    } else if (const auto dot = name.rfind('.'); dot != std::string::npos) {
      cls = name.substr(0, dot);
      method = name.substr(dot + 1);
    }
    if (cls.empty() || method.empty()) {
      throw MalformedCsvError("test_name must be Class.method", row.line);
    }
    auto label = ParseLabel(row.fields[c_flaky]);
    if (!label) throw InvalidLabelError(row.fields[c_flaky], row.line);
    const std::string rel = "sources/" + std::to_string(r) + ".txt";
    WriteFile(out_dir / rel, row.fields[c_code]);
    index += CsvJoin({Trim(row.fields[c_project]), cls, method,
                      std::string(ToString(*label)), rel});
    index += '\n';
    ++written;
  }
  WriteFile(out_dir / "index.csv", index);
  return written;
}

}  // namespace flakylens
