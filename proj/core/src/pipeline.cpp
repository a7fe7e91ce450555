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

#include "flakylens/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "flakylens/classifier.hpp"
#include "flakylens/csv.hpp"
#include "flakylens/embeddings.hpp"
#include "flakylens/errors.hpp"
#include "flakylens/io.hpp"
#include "json.hpp"

namespace flakylens {
namespace {

constexpr std::string_view kFilePrefix = "file:";

template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(jobs, 1)), 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(worker);
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Eigen::VectorXd ToVector(const std::vector<float>& row) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(row.size()));
  for (std::size_t i = 0; i < row.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = row[i];
  }
  return v;
}

}  // namespace

void ConfigureLogging() {
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("FLAKY_LENS_LOG")) {
    const auto parsed = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept "off" when asked.
    if (parsed != spdlog::level::off || std::string_view(env) == "off") {
      level = parsed;
    }
  }
  // Logs go to stderr so that stdout carries only command output.
  auto logger = spdlog::get("flakylens");
  if (!logger) logger = spdlog::stderr_color_mt("flakylens");
  spdlog::set_default_logger(logger);
  spdlog::set_level(level);
}

ClassContext ContextFor(const CorpusRecord& record,
                        const java::TestConventions& conventions) {
  if (!record.unit || !record.method || !record.owner) {
    throw InvalidArgumentError("record " + record.test_id + " has no parse");
  }
  return BuildClassContext(*record.unit, *record.owner, record.init_method,
                           conventions);
}

ProcessedTest ProcessRecord(const CorpusRecord& record, const Vocabulary& vocab,
                            const PipelineOptions& options) {
  const ClassContext ctx = ContextFor(record, options.conventions);
  ProcessedTest out;
  out.smells = DetectSmells(*record.method, ctx, options.smells);
  PreprocessPolicy policy;
  policy.mode = options.mode;
  policy.vocab = &vocab;
  policy.max_len = options.max_len;
  out.preprocessed = Preprocess(*record.unit, *record.method, out.smells,
                                policy, record.test_id);
  out.stats =
      ComputeReductionStats(record.source_text, out.preprocessed.text, vocab);
  out.encoded =
      Encode(Tokenize(out.preprocessed.text, vocab), vocab, options.max_len);
  out.features = ExtractFeatures(*record.unit, *record.method, out.smells);
  out.features.execution_time = record.execution_time;
  return out;
}

std::vector<ProcessedTest> ProcessCorpus(
    const std::vector<CorpusRecord>& records, const Vocabulary& vocab,
    const PipelineOptions& options) {
  std::vector<ProcessedTest> out(records.size());
  ParallelFor(records.size(), options.jobs, [&](std::size_t i) {
    out[i] = ProcessRecord(records[i], vocab, options);
  });
  std::size_t reduced = 0;
  for (const ProcessedTest& p : out) reduced += p.preprocessed.reduced ? 1 : 0;
  spdlog::info("processed {} tests, {} reduced", out.size(), reduced);
  return out;
}

std::optional<EmbeddingSource> ParseEmbeddingSource(std::string_view text) {
  if (text == "fallback") return EmbeddingSource{};
  if (text.starts_with(kFilePrefix) && text.size() > kFilePrefix.size()) {
    return EmbeddingSource{
        std::filesystem::path(std::string(text.substr(kFilePrefix.size())))};
  }
  return std::nullopt;
}

std::vector<Eigen::VectorXd> BuildInputs(
    const std::vector<CorpusRecord>& records,
    const std::vector<ProcessedTest>& processed, const EmbeddingSource& source,
    int dim) {
  if (records.size() != processed.size()) {
    throw LengthMismatchError("records and processed tests differ in length");
  }
  std::optional<EmbeddingTable> table;
  std::map<std::string, std::size_t> index;
  if (source.file) {
    table = ReadEmbeddings(*source.file, dim);
    index = table->Index();
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const CorpusRecord& r = records[i];
    if (r.embedding) {
      if (r.embedding->size() != static_cast<std::size_t>(dim)) {
        throw DimensionMismatchError(static_cast<std::size_t>(dim),
                                     r.embedding->size());
      }
      out.push_back(ToVector(*r.embedding));
    } else if (table) {
      auto it = index.find(r.test_id);
      if (it == index.end()) {
        throw FormatError("embedding file has no row for " + r.test_id);
      }
      out.push_back(ToVector(table->rows[it->second]));
    } else {
      out.push_back(EmbedFallback(processed[i].encoded, dim));
    }
  }
  return out;
}

std::string SafeFileStem(std::string_view test_id) {
  std::string out;
  out.reserve(test_id.size());
  for (char c : test_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

std::string EncodedCsvRow(std::string_view test_id, const EncodedInput& input) {
  std::string out = CsvEscape(test_id);
  for (std::int32_t id : input.input_ids) {
    out.push_back(',');
    out += std::to_string(id);
  }
  for (std::uint8_t m : input.attention_mask) {
    out.push_back(',');
    out.push_back(m ? '1' : '0');
  }
  return out;
}

std::string ManifestJsonLine(const ManifestEntry& e) {
  nlohmann::json j;
  j["test_id"] = e.test_id;
  j["project"] = e.project;
  j["label"] = std::string(ToString(e.label));
  j["origin"] = std::string(ToString(e.origin));
  j["text_file"] = e.text_file;
  j["text_sha256"] = e.text_sha256;
  j["encoded_sha256"] = e.encoded_sha256;
  j["features_sha256"] = e.features_sha256;
  j["original_tokens"] = e.original_tokens;
  j["reduced_tokens"] = e.reduced_tokens;
  j["reduced"] = e.reduced;
  return j.dump();
}

ExportManifest ExportArtifacts(const std::vector<CorpusRecord>& records,
                               const std::vector<ProcessedTest>& processed,
                               const std::filesystem::path& out_dir) {
  if (records.size() != processed.size()) {
    throw LengthMismatchError("records and processed tests differ in length");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "preprocessed", ec);
  if (ec) {
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  }

  ExportManifest manifest;
  std::string pre_csv =
      "test_id,original_tokens,reduced_tokens,retained,original_count\n";
  std::string encoded_csv = "test_id";
  if (!processed.empty()) {
    const std::size_t len = processed.front().encoded.input_ids.size();
    for (std::size_t i = 0; i < len; ++i) {
      encoded_csv += ",id" + std::to_string(i);
    }
    for (std::size_t i = 0; i < len; ++i) {
      encoded_csv += ",mask" + std::to_string(i);
    }
  }
  encoded_csv.push_back('\n');
  std::string features_csv = std::string(kFeatureCsvHeader) + "\n";
  std::string jsonl;

  std::set<std::string> used_stems;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const CorpusRecord& r = records[i];
    const ProcessedTest& p = processed[i];
    std::string stem = SafeFileStem(r.test_id);
    if (!used_stems.insert(stem).second) {
      stem += "-" + Sha256Hex(r.test_id).substr(0, 12);
      used_stems.insert(stem);
    }
    ManifestEntry e;
    e.test_id = r.test_id;
    e.project = r.project;
    e.label = r.label;
    e.origin = r.origin;
    e.text_file = "preprocessed/" + stem + ".java.txt";
    e.original_tokens = p.stats.original_tokens;
    e.reduced_tokens = p.stats.reduced_tokens;
    e.reduced = p.preprocessed.reduced;

    WriteFile(out_dir / e.text_file, p.preprocessed.text);
    e.text_sha256 = Sha256Hex(p.preprocessed.text);
    const std::string encoded_row = EncodedCsvRow(r.test_id, p.encoded);
    e.encoded_sha256 = Sha256Hex(encoded_row);
    const std::string feature_row = FeatureCsvRow(r.test_id, p.features);
    e.features_sha256 = Sha256Hex(feature_row);

    pre_csv += CsvJoin({r.test_id, std::to_string(e.original_tokens),
                        std::to_string(e.reduced_tokens),
                        std::to_string(p.preprocessed.retained_statement_count),
                        std::to_string(p.preprocessed.original_statement_count)});
    pre_csv.push_back('\n');
    encoded_csv += encoded_row + "\n";
    features_csv += feature_row + "\n";
    jsonl += ManifestJsonLine(e) + "\n";
    manifest.entries.push_back(std::move(e));
  }

  WriteFile(out_dir / "preprocess_manifest.csv", pre_csv);
  WriteFile(out_dir / "encoded.csv", encoded_csv);
  WriteFile(out_dir / "features.csv", features_csv);
  WriteFile(out_dir / "manifest.jsonl", jsonl);
  spdlog::info("exported {} tests to {}", manifest.entries.size(),
               out_dir.string());
  return manifest;
}

}  // namespace flakylens
