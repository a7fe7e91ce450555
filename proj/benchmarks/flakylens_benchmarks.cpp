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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "flakylens/classifier.hpp"
#include "flakylens/evaluation.hpp"
#include "flakylens/io.hpp"
#include "flakylens/java_parser.hpp"
#include "flakylens/random.hpp"
#include "flakylens/smells.hpp"
#include "flakylens/tokenizer.hpp"

namespace flakylens {
namespace {

const std::string& Source() {
  static const std::string source = ReadFile(FLAKYLENS_BENCH_SOURCE);
  return source;
}

const Vocabulary& Vocab() {
  static const Vocabulary vocab = LoadVocabulary(FLAKYLENS_BENCH_VOCAB);
  return vocab;
}

void BM_ParseCompilationUnit(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(java::ParseCompilationUnit(Source()));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(Source().size()));
}
BENCHMARK(BM_ParseCompilationUnit);

void BM_DetectSmells(benchmark::State& state) {
  const java::CompilationUnit unit = java::ParseCompilationUnit(Source());
  const java::TestExtraction found = java::ExtractTestMethods(unit);
  for (auto _ : state) {
    for (const auto& t : found.tests) {
      const ClassContext ctx = BuildClassContext(unit, *t.owner, found.InitMethodFor(*t.owner));
      benchmark::DoNotOptimize(DetectSmells(*t.method, ctx));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(found.tests.size()));
}
BENCHMARK(BM_DetectSmells);

void BM_TokenizeAndEncode(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(Encode(Tokenize(Source(), Vocab()), Vocab()));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(Source().size()));
}
BENCHMARK(BM_TokenizeAndEncode);

void BM_FisherExact(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(FisherExact(n / 2, n / 4, n / 8, n / 3));
  }
}
BENCHMARK(BM_FisherExact)->Arg(40)->Arg(400)->Arg(4000);

void BM_TrainStep(benchmark::State& state) {
  ModelConfig cfg;
  cfg.hidden_dim = static_cast<int>(state.range(0));
  const ModelParams params = InitModel(cfg);
  Rng rng(1);
  std::vector<Example> batch(static_cast<std::size_t>(cfg.batch_size));
  std::vector<const Example*> ptrs;
  for (Example& e : batch) {
    e.x = Eigen::VectorXd(cfg.input_dim);
    for (Eigen::Index i = 0; i < e.x.size(); ++i) e.x[i] = rng.Uniform(-1, 1);
    ptrs.push_back(&e);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(LossAndGradients(params, ptrs, cfg.dropout_rate, &rng));
  }
}
BENCHMARK(BM_TrainStep)->Arg(64)->Arg(512);

}  // namespace
}  // namespace flakylens

BENCHMARK_MAIN();
