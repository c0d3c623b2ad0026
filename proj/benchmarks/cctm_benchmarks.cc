#include <benchmark/benchmark.h>

#include "cctm/decision_tree.h"
#include "cctm/extraction.h"
#include "cctm/features.h"
#include "cctm/multilabel.h"
#include "cctm/synthetic.h"
#include "cctm/textproc.h"

namespace cctm {
namespace {

const std::vector<LabeledComment>& Corpus() {
  static const auto corpus = GenerateSynthetic({.n_per_category = 100});
  return corpus;
}

void BM_PorterStem(benchmark::State& state) {
  const std::vector<std::string> words = {"generalizations", "caresses", "relational",
                                          "hopefulness",     "agreed",   "conditional"};
  for (auto _ : state) {
    for (const std::string& w : words) benchmark::DoNotOptimize(PorterStem(w));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(words.size()));
}
BENCHMARK(BM_PorterStem);

void BM_PrepareText(benchmark::State& state) {
  const auto& corpus = Corpus();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        PrepareText(corpus[i++ % corpus.size()].comment.raw_text, DefaultPatternLibrary()));
  }
}
BENCHMARK(BM_PrepareText);

void BM_TfidfVectors(benchmark::State& state) {
  std::vector<TokenStream> docs;
  for (const LabeledComment& lc : Corpus()) docs.push_back(Preprocess(lc.comment.raw_text));
  const Vocabulary vocab = BuildVocabulary(docs);
  for (auto _ : state) {
    for (const TokenStream& d : docs) benchmark::DoNotOptimize(TfidfVector(d, vocab));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(docs.size()));
}
BENCHMARK(BM_TfidfVectors);

void BM_TrainTree(benchmark::State& state) {
  std::vector<TokenStream> docs;
  for (const LabeledComment& lc : Corpus()) docs.push_back(Preprocess(lc.comment.raw_text));
  const Vocabulary vocab = BuildVocabulary(docs);
  std::vector<Example> data;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    data.push_back({TfidfVector(docs[i], vocab), Corpus()[i].HasLabel("Summary")});
  }
  for (auto _ : state) benchmark::DoNotOptimize(TrainTree(data));
}
BENCHMARK(BM_TrainTree)->Unit(benchmark::kMillisecond);

void BM_TrainForestModel(benchmark::State& state) {
  TrainOptions options;
  options.forest.n_trees = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        TrainMultiLabel(Corpus(), DefaultTaxonomy(), DefaultPatternLibrary(), options));
  }
}
BENCHMARK(BM_TrainForestModel)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ExtractJava(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < 200; ++i) {
    text += "/**\n * I am class " + std::to_string(i) + ".\n * \"/** not a comment\"\n */\n" +
            "@Deprecated\npublic class C" + std::to_string(i) +
            " {\n  String s = \"/* x */\";\n  int f() { return 1; }\n}\n";
  }
  const SourceFile file = MakeSourceFile("Big.java", text);
  for (auto _ : state) benchmark::DoNotOptimize(ExtractClassComments(file));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ExtractJava);

}  // namespace
}  // namespace cctm

BENCHMARK_MAIN();
