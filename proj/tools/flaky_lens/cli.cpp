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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <string_view>

#include "CLI11.hpp"
#include "flakylens/classifier.hpp"
#include "flakylens/errors.hpp"
#include "flakylens/evaluation.hpp"
#include "flakylens/features.hpp"
#include "flakylens/ingestion.hpp"
#include "flakylens/io.hpp"
#include "flakylens/java_parser.hpp"
#include "flakylens/pipeline.hpp"
#include "flakylens/preprocessor.hpp"
#include "flakylens/random.hpp"
#include "flakylens/report.hpp"
#include "flakylens/smells.hpp"
#include "flakylens/tokenizer.hpp"
#include "json.hpp"

namespace flakylens::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct CorpusArgs {
  std::string in;
  std::string sources;
  std::string format = "flakeflagger";
  bool strict = false;
  int jobs = 1;
};

struct ModelArgs {
  ModelConfig config;
  std::string embeddings = "fallback";
};

struct Options {
  CorpusArgs corpus;
  ModelArgs model;
  std::string in;
  std::string out;
  std::string markdown;
  std::string vocab;
  int max_len = kDefaultMaxLen;
  std::string preprocess = "over-budget";
  std::string protocol = "cv";
  int k = 10;
  double val_fraction = 0.2;
  std::string code_column = "full_code";
};

void Emit(const std::string& out_path, const std::string& content,
          std::ostream& out) {
  if (out_path.empty()) {
    out << content;
  } else {
    WriteFile(out_path, content);
  }
}

PipelineOptions MakePipelineOptions(const Options& o) {
  PipelineOptions p;
  p.mode = *ParsePreprocessMode(o.preprocess);
  p.max_len = o.max_len;
  p.smells.strict = o.corpus.strict;
  p.jobs = o.corpus.jobs;
  return p;
}

LoadResult LoadFromArgs(const CorpusArgs& a) {
  const fs::path index(a.in);
  const fs::path root = a.sources.empty() ? index.parent_path() : fs::path(a.sources);
  LoadResult loaded = LoadCorpus(index, root.empty() ? fs::path(".") : root,
                                 *ParseCorpusFormat(a.format));
  if (loaded.records.empty()) {
    throw EmptyDatasetError("no usable records in " + a.in);
  }
  return loaded;
}

std::map<std::string, std::size_t> DropSummary(const LoadResult& loaded) {
  std::map<std::string, std::size_t> out;
  for (const auto& [reason, count] : loaded.DropCounts()) {
    out[std::string(ToString(reason))] = count;
  }
  return out;
}

json StatementJson(const java::Statement& s) {
  json children = json::array();
  for (const java::Statement& c : s.children) children.push_back(StatementJson(c));
  return {{"kind", std::string(java::ToString(s.kind))},
          {"line", s.line},
          {"end_line", s.end_line},
          {"children", children}};
}

json MethodJson(const java::ClassDecl& owner, const java::MethodDecl& m) {
  json statements = json::array();
  for (const java::Statement& s : m.statements) statements.push_back(StatementJson(s));
  return {{"name", m.name},
          {"annotations", m.annotations},
          {"start_line", m.source_span.start_line},
          {"end_line", m.source_span.end_line},
          {"is_test", java::IsTestMethod(owner, m)},
          {"statement_count", java::CountStatements(m.statements)},
          {"statements", statements}};
}

json ClassJson(const java::ClassDecl& c) {
  json methods = json::array();
  for (const java::MethodDecl& m : c.methods) methods.push_back(MethodJson(c, m));
  json nested = json::array();
  for (const java::ClassDecl& n : c.nested) nested.push_back(ClassJson(n));
  return {{"name", c.name}, {"line", c.line}, {"methods", methods},
          {"nested", nested}};
}

java::CompilationUnit ParseAny(const std::string& source) {
  if (LooksLikeJava(source)) return java::ParseCompilationUnit(source);
  return java::ParseMethodSnippet(source, "Snippet");
}

int CmdParse(const Options& o, std::ostream& out) {
  const java::CompilationUnit unit = ParseAny(ReadFile(o.in));
  json classes = json::array();
  for (const java::ClassDecl& c : unit.type_decls) classes.push_back(ClassJson(c));
  const json doc = {
      {"package", unit.package_name ? json(*unit.package_name) : json(nullptr)},
      {"imports", unit.imports},
      {"static_imports", unit.static_imports},
      {"classes", classes}};
  Emit(o.out, doc.dump(2) + "\n", out);
  return kExitOk;
}

std::vector<fs::path> JavaFilesUnder(const fs::path& root) {
  std::vector<fs::path> files;
  if (fs::is_regular_file(root)) return {root};
  if (!fs::is_directory(root)) throw IoError("no such file or directory: " + root.string());
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int CmdSmells(const Options& o, std::ostream& out) {
  const fs::path root(o.in);
  SmellOptions smell_options;
  smell_options.strict = o.corpus.strict;
  json tests = json::array();
  json errors = json::array();
  for (const fs::path& file : JavaFilesUnder(root)) {
    const std::string rel =
        fs::is_directory(root) ? fs::relative(file, root).generic_string()
                               : file.filename().generic_string();
    try {
      const java::CompilationUnit unit = ParseAny(ReadFile(file));
      const java::TestExtraction found = java::ExtractTestMethods(unit);
      for (const java::TestMethodRef& t : found.tests) {
        const ClassContext ctx =
            BuildClassContext(unit, *t.owner, found.InitMethodFor(*t.owner));
        json smells = json::array();
        for (const SmellAnnotation& a : DetectSmells(*t.method, ctx, smell_options)) {
          smells.push_back({{"line", a.line},
                            {"kind", std::string(ToString(a.kind))},
                            {"flag", a.flag ? json(*a.flag) : json(nullptr)}});
        }
        tests.push_back({{"test_id", t.owner->name + "#" + t.method->name},
                         {"file", rel},
                         {"smells", smells}});
      }
    } catch (const Error& e) {
      errors.push_back({{"file", rel}, {"message", e.what()}});
    }
  }
  const json doc = {{"strict", o.corpus.strict}, {"tests", tests}, {"errors", errors}};
  Emit(o.out, doc.dump(2) + "\n", out);
  return kExitOk;
}

int CmdPreprocess(const Options& o, std::ostream& out) {
  const Vocabulary vocab = LoadVocabulary(o.vocab);
  const LoadResult loaded = LoadFromArgs(o.corpus);
  const std::vector<ProcessedTest> processed =
      ProcessCorpus(loaded.records, vocab, MakePipelineOptions(o));
  const ExportManifest manifest = ExportArtifacts(loaded.records, processed, o.out);
  std::size_t reduced = 0;
  for (const ManifestEntry& e : manifest.entries) reduced += e.reduced ? 1 : 0;
  out << "exported " << manifest.entries.size() << " tests (" << reduced
      << " reduced, " << loaded.dropped.size() << " rows dropped) to " << o.out
      << "\n";
  return kExitOk;
}

int CmdTokenize(const Options& o, std::ostream& out) {
  const Vocabulary vocab = LoadVocabulary(o.vocab);
  const std::string text = ReadFile(o.in);
  const TokenSequence seq = Tokenize(text, vocab);
  const EncodedInput enc = Encode(seq, vocab, o.max_len);
  const json doc = {{"pieces", seq.tokens},
                    {"tokens", Decode(enc, vocab)},
                    {"input_ids", enc.input_ids},
                    {"attention_mask", enc.attention_mask},
                    {"truncated", enc.truncated}};
  Emit(o.out, doc.dump(2) + "\n", out);
  return kExitOk;
}

int CmdFeatures(const Options& o, std::ostream& out) {
  const LoadResult loaded = LoadFromArgs(o.corpus);
  SmellOptions smell_options;
  smell_options.strict = o.corpus.strict;
  std::string csv = std::string(kFeatureCsvHeader) + "\n";
  for (const CorpusRecord& r : loaded.records) {
    const std::vector<SmellAnnotation> smells =
        DetectSmells(*r.method, ContextFor(r), smell_options);
    FeatureVector f = ExtractFeatures(*r.unit, *r.method, smells);
    f.execution_time = r.execution_time;
    csv += FeatureCsvRow(r.test_id, f) + "\n";
  }
  Emit(o.out, csv, out);
  return kExitOk;
}

struct PreparedCorpus {
  LoadResult loaded;
  std::vector<Eigen::VectorXd> inputs;
  std::vector<Label> labels;
};

PreparedCorpus Prepare(const Options& o) {
  const std::optional<EmbeddingSource> source =
      ParseEmbeddingSource(o.model.embeddings);
  const Vocabulary vocab = LoadVocabulary(o.vocab);
  PreparedCorpus p;
  p.loaded = LoadFromArgs(o.corpus);
  const std::vector<ProcessedTest> processed =
      ProcessCorpus(p.loaded.records, vocab, MakePipelineOptions(o));
  p.inputs = BuildInputs(p.loaded.records, processed, *source,
                         o.model.config.input_dim);
  for (const CorpusRecord& r : p.loaded.records) p.labels.push_back(r.label);
  return p;
}

int CmdTrain(const Options& o, std::ostream& out) {
  const PreparedCorpus p = Prepare(o);
  const ModelConfig& cfg = o.model.config;
  const Fold fold = HoldoutSplit(p.labels, o.val_fraction, DeriveSeed(cfg.seed, 2000));
  const FoldData data = MaterializeFold(fold, p.labels, DeriveSeed(cfg.seed, 3000));
  auto examples = [&](const std::vector<TaggedIndex>& tagged) {
    std::vector<Example> ex;
    for (const TaggedIndex& t : tagged) ex.push_back({p.inputs[t.index], p.labels[t.index]});
    return ex;
  };
  const std::vector<Example> train = examples(data.train);
  std::vector<Example> val = examples(data.val);
  if (val.empty()) val = train;
  const TrainResult trained = Train(cfg, train, val);
  SaveCheckpoint(o.out, trained.params, cfg);

  std::vector<Label> preds;
  std::vector<Label> truth;
  for (std::size_t i : fold.train) {
    preds.push_back(Predict(trained.params, p.inputs[i], cfg.threshold));
    truth.push_back(p.labels[i]);
  }
  const Evaluation e = EvaluatePredictions(preds, truth);
  out << "trained on " << fold.train.size() << " tests (" << fold.val.size()
      << " validation), best epoch " << trained.log.best_epoch << ", stopped at "
      << trained.log.stopped_epoch << "; training accuracy "
      << static_cast<double>(e.confusion.Correct()) /
             static_cast<double>(std::max<std::int64_t>(e.confusion.Total(), 1))
      << "; checkpoint " << o.out << " sha256 " << Sha256Hex(ReadFile(o.out))
      << "\n";
  return kExitOk;
}

int CmdEvaluate(const Options& o, std::ostream& out) {
  const PreparedCorpus p = Prepare(o);
  const ModelConfig& cfg = o.model.config;
  std::vector<std::string> ids;
  std::vector<std::string> projects;
  for (const CorpusRecord& r : p.loaded.records) {
    ids.push_back(r.test_id);
    projects.push_back(r.project);
  }
  const SplitPlan plan =
      o.protocol == "cv"
          ? StratifiedKFold(p.labels, o.k, o.val_fraction, cfg.seed)
          : PerProjectSplits(projects, p.labels, o.val_fraction, cfg.seed);
  const ExperimentResult result =
      RunExperiment(p.inputs, p.labels, plan, cfg, o.corpus.jobs);

  ReportContext ctx;
  ctx.test_ids = ids;
  ctx.projects = projects;
  ctx.labels = p.labels;
  ctx.config = cfg;
  ctx.k = o.k;
  ctx.val_fraction = o.val_fraction;
  ctx.preprocess_mode = o.preprocess;
  ctx.embeddings = o.model.embeddings == "fallback" ? "fallback" : "file";
  ctx.input_rows = p.loaded.input_rows;
  ctx.dropped = DropSummary(p.loaded);
  const std::string report = BuildReportJson(result, ctx);
  WriteFile(o.out, report);
  fs::path md = o.markdown.empty() ? fs::path(o.out).replace_extension(".md")
                                   : fs::path(o.markdown);
  WriteFile(md, RenderMarkdown(report));

  const Metrics& m = result.pooled.metrics;
  const Metrics& b = result.majority_pooled.metrics;
  auto fmt = [](const std::optional<double>& v) {
    return v ? std::to_string(*v) : std::string("undefined");
  };
  out << "model F1 " << fmt(m.f1) << ", majority F1 " << fmt(b.f1)
      << "; report " << o.out << ", summary " << md.string() << "\n";
  return kExitOk;
}

int CmdReport(const Options& o, std::ostream& out) {
  Emit(o.out, RenderMarkdown(ReadFile(o.in)), out);
  return kExitOk;
}

int CmdConvert(const Options& o, std::ostream& out) {
  const std::size_t n = ConvertPublishedLayout(o.in, o.out, o.code_column);
  out << "converted " << n << " rows into " << o.out << "\n";
  return kExitOk;
}

void AddCorpusOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--in", o.corpus.in, "Index CSV")->required();
  cmd->add_option("--sources", o.corpus.sources,
                  "Sources root (default: the index's directory)");
  cmd->add_option("--format", o.corpus.format, "Index format")
      ->check(CLI::IsMember({"flakeflagger", "idoft"}));
  cmd->add_flag("--strict", o.corpus.strict,
                "Literal smell heuristics (init-method path checks only)");
  cmd->add_option("--jobs", o.corpus.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
}

void AddPreprocessOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--vocab", o.vocab, "Vocabulary (.txt or .json)")->required();
  cmd->add_option("--max-len", o.max_len, "Token budget")
      ->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--preprocess", o.preprocess, "Statement retention policy")
      ->check(CLI::IsMember({"over-budget", "all", "off"}));
}

void AddModelOptions(CLI::App* cmd, Options& o) {
  ModelConfig& c = o.model.config;
  cmd->add_option("--embeddings", o.model.embeddings, "fallback or file:PATH")
      ->check(CLI::Validator(
          [](std::string& v) {
            return ParseEmbeddingSource(v) ? std::string()
                                           : "expected fallback or file:PATH";
          },
          "fallback|file:PATH"));
  cmd->add_option("--seed", c.seed, "Seed for every random choice");
  cmd->add_option("--threshold", c.threshold, "Flaky if p >= threshold")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--val-frac", o.val_fraction, "Validation share of training data")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--lr", c.learning_rate, "Learning rate");
  cmd->add_option("--epochs", c.max_epochs, "Maximum epochs");
  cmd->add_option("--patience", c.patience, "Early-stopping patience");
  cmd->add_option("--batch-size", c.batch_size, "Batch size");
  cmd->add_option("--hidden", c.hidden_dim, "Hidden layer width");
  cmd->add_option("--dropout", c.dropout_rate, "Dropout rate");
  cmd->add_option("--weight-decay", c.weight_decay, "AdamW weight decay");
  cmd->add_option("--dim", c.input_dim, "Input embedding dimension");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  ConfigureLogging();
  CLI::App app{"Black-box flaky test prediction from test code", "flaky_lens"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Options o;
  std::function<int()> action;

  CLI::App* parse = app.add_subcommand("parse", "Dump the parse of a Java file");
  parse->add_option("--in", o.in, "Java file or method snippet")->required();
  parse->add_option("--out", o.out, "Output JSON (default: stdout)");
  parse->callback([&] { action = [&] { return CmdParse(o, out); }; });

  CLI::App* smells = app.add_subcommand("smells", "Detect test smells");
  smells->add_option("--in", o.in, "Java file or directory")->required();
  smells->add_option("--out", o.out, "Output JSON (default: stdout)");
  smells->add_flag("--strict", o.corpus.strict, "Literal smell heuristics");
  smells->callback([&] { action = [&] { return CmdSmells(o, out); }; });

  CLI::App* pre = app.add_subcommand("preprocess", "Export preprocessed artifacts");
  AddCorpusOptions(pre, o);
  AddPreprocessOptions(pre, o);
  pre->add_option("--out", o.out, "Output directory")->required();
  pre->callback([&] { action = [&] { return CmdPreprocess(o, out); }; });

  CLI::App* tok = app.add_subcommand("tokenize", "Tokenize and encode a text file");
  tok->add_option("--in", o.in, "Text file")->required();
  tok->add_option("--vocab", o.vocab, "Vocabulary (.txt or .json)")->required();
  tok->add_option("--max-len", o.max_len, "Token budget")
      ->check(CLI::Range(2, 1 << 20));
  tok->add_option("--out", o.out, "Output JSON (default: stdout)");
  tok->callback([&] { action = [&] { return CmdTokenize(o, out); }; });

  CLI::App* feat = app.add_subcommand("features", "Black-box feature CSV");
  AddCorpusOptions(feat, o);
  feat->add_option("--out", o.out, "Output CSV (default: stdout)");
  feat->callback([&] { action = [&] { return CmdFeatures(o, out); }; });

  CLI::App* train = app.add_subcommand("train", "Train a classifier checkpoint");
  AddCorpusOptions(train, o);
  AddPreprocessOptions(train, o);
  AddModelOptions(train, o);
  train->add_option("--out", o.out, "Checkpoint JSON")->required();
  train->callback([&] { action = [&] { return CmdTrain(o, out); }; });

  CLI::App* eval = app.add_subcommand("evaluate", "Cross-validated evaluation");
  AddCorpusOptions(eval, o);
  AddPreprocessOptions(eval, o);
  AddModelOptions(eval, o);
  eval->add_option("--protocol", o.protocol, "Split protocol")
      ->check(CLI::IsMember({"cv", "per-project"}));
  eval->add_option("--k", o.k, "Folds for cv")->check(CLI::Range(2, 1000));
  eval->add_option("--out", o.out, "Report JSON")->required();
  eval->add_option("--markdown", o.markdown,
                   "Markdown summary (default: report path with .md)");
  eval->callback([&] { action = [&] { return CmdEvaluate(o, out); }; });

  CLI::App* report = app.add_subcommand("report", "Render a report as Markdown");
  report->add_option("--in", o.in, "Report JSON")->required();
  report->add_option("--out", o.out, "Output Markdown (default: stdout)");
  report->callback([&] { action = [&] { return CmdReport(o, out); }; });

  CLI::App* convert = app.add_subcommand(
      "convert", "Convert a published single-file dataset to index + sources");
  convert->add_option("--in", o.in, "Published CSV")->required();
  convert->add_option("--out", o.out, "Output directory")->required();
  convert->add_option("--code-column", o.code_column, "Column holding the code");
  convert->callback([&] { action = [&] { return CmdConvert(o, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    o.model.config.Validate();
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgumentError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MalformedCsvError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SourcesRootMissingError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const KTooLargeError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingleClassError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace flakylens::cli
