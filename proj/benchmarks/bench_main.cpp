#include <benchmark/benchmark.h>

#include <map>

#include "lhgat/corpus/synthetic.hpp"
#include "lhgat/diff/tape.hpp"
#include "lhgat/labeler/crf.hpp"
#include "lhgat/train/model.hpp"

using namespace lhgat;

namespace {

struct Fixture {
  corpus::SyntheticCorpus syn;
  train::Model model;
  std::vector<train::PreparedSentence> prepared;

  explicit Fixture(std::size_t dim) {
    corpus::SyntheticSpec spec;
    spec.dim = dim;
    spec.min_length = 20;
    spec.max_length = 40;
    syn = corpus::generate_synthetic_corpus(spec);
    train::TrainConfig config;
    config.d = dim;
    model = train::make_model(config, syn.labels, syn.vocabulary, lexgraph::Lexicon::from_table(syn.vocabulary.words),
                              syn.sentences);
    for (const auto& s : syn.sentences) prepared.push_back(train::prepare(model, s));
  }
};

Fixture& fixture(std::size_t dim) {
  static std::map<std::size_t, Fixture> cache;
  return cache.try_emplace(dim, dim).first->second;
}

void BM_Forward(benchmark::State& state) {
  Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    diff::Tape tape(false);
    benchmark::DoNotOptimize(train::total_loss(tape, f.model, f.prepared[i++ % f.prepared.size()], 0).item());
  }
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State& state) {
  Fixture& f = fixture(static_cast<std::size_t>(state.range(0)));
  const auto params = f.model.named_parameters();
  std::size_t i = 0;
  for (auto _ : state) {
    for (const auto& [name, t] : params) t->zero_grad();
    diff::Tape tape;
    tape.backward(train::total_loss(tape, f.model, f.prepared[i++ % f.prepared.size()], 0));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Viterbi(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), k = 7;
  Rng rng(1);
  diff::Tensor em = diff::Tensor::zeros({n, k}), tr = diff::Tensor::zeros({k, k}), st = diff::Tensor::zeros({1, k});
  for (auto* t : {&em, &tr, &st}) {
    for (double& v : t->data) v = rng.uniform(-1, 1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(labeler::viterbi(em, tr, st));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Viterbi)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oN);

void BM_LexiconMatch(benchmark::State& state) {
  Fixture& f = fixture(32);
  std::vector<std::string> chars;
  for (const auto& s : f.syn.sentences) chars.insert(chars.end(), s.chars.begin(), s.chars.end());
  for (auto _ : state) benchmark::DoNotOptimize(f.model.lexicon.match(chars));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * chars.size()));
}
BENCHMARK(BM_LexiconMatch);

}  // namespace

BENCHMARK_MAIN();
