#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lhgat/corpus/synthetic.hpp"
#include "lhgat/diff/tape.hpp"
#include "lhgat/errors.hpp"
#include "lhgat/labeler/crf.hpp"
#include "lhgat/labeler/label_embeddings.hpp"
#include "lhgat/labeler/matcher.hpp"
#include "fixtures.hpp"

using namespace lhgat;
using namespace lhgat::labeler;
using corpus::LabelSet;
using diff::Tensor;
namespace oracle = lhgat::testing;

namespace {

Tensor random_matrix(std::size_t r, std::size_t c, Rng& rng, double scale = 2.0) {
  Tensor t = Tensor::zeros({r, c});
  for (double& v : t.data) v = rng.uniform(-scale, scale);
  return t;
}

std::vector<double> row_of(const Tensor& t) { return t.data; }

double crf_nll(const Tensor& scores, const std::vector<std::size_t>& gold, const CrfParams& crf) {
  diff::Tape tape;
  return crf_negative_log_likelihood(tape.constant(scores), gold, tape.constant(crf.transform),
                                     tape.constant(crf.transitions), tape.constant(crf.start))
      .item();
}

double log_partition(const Tensor& emissions, const Tensor& transitions, const Tensor& start) {
  diff::Tape tape;
  return crf_log_partition(tape.constant(emissions), tape.constant(transitions), tape.constant(start)).item();
}

}  // namespace

TEST(LabelEmbeddings, MeanOfTwoSeeds) {
  Rng rng(1);
  corpus::EmbeddingTable chars(2, rng);
  chars.set("a", {1, 0});
  chars.set("b", {0, 1});
  chars.set("x", {9, 9});
  const LabelSet labels({"Attack"});
  const std::vector<corpus::Sentence> data = {oracle::make_sentence({"a", "x"}, {{1, 1, "Attack"}}),
                                              oracle::make_sentence({"x", "b"}, {{2, 2, "Attack"}})};
  const LabelEmbeddings e = init_label_embeddings(data, chars, labels, rng);
  EXPECT_EQ(e.table.at(1, 0), 0.5);
  EXPECT_EQ(e.table.at(1, 1), 0.5);
  EXPECT_EQ(e.seed_counts, (std::vector<std::size_t>{0, 2, 0}));
  EXPECT_TRUE(e.table.requires_grad);
}

TEST(LabelEmbeddings, UnseenTypeIsRandomWithZeroSeeds) {
  Rng rng(2);
  corpus::EmbeddingTable chars(4, rng);
  chars.set("a", {1, 1, 1, 1});
  const LabelSet labels({"Attack", "Die"});
  const LabelEmbeddings e =
      init_label_embeddings({oracle::make_sentence({"a"}, {{1, 1, "Attack"}})}, chars, labels, rng);
  const double bound = std::sqrt(3.0 / 4.0);
  for (std::size_t label : {0u, 2u, 3u, 4u}) {
    EXPECT_EQ(e.seed_counts[label], 0u);
    EXPECT_TRUE(e.seed_chars[label].empty());
    for (std::size_t j = 0; j < 4; ++j) EXPECT_LE(std::abs(e.table.at(label, j)), bound);
  }
  EXPECT_NE(e.table.at(3, 0), e.table.at(4, 0));
}

TEST(LabelEmbeddings, RepeatedTriggerCharacterIsOccurrenceWeighted) {
  Rng rng(3);
  corpus::EmbeddingTable chars(1, rng);
  chars.set("a", {3});
  chars.set("b", {0});
  const LabelSet labels({"Attack"});
  const std::vector<corpus::Sentence> data = {
      oracle::make_sentence({"a", "b", "a"}, {{1, 1, "Attack"}, {3, 3, "Attack"}}),
      oracle::make_sentence({"a", "b"}, {{1, 1, "Attack"}, {2, 2, "Attack"}})};
  const LabelEmbeddings e = init_label_embeddings(data, chars, labels, rng);
  EXPECT_EQ(e.seed_counts[1], 4u);
  EXPECT_EQ(e.seed_chars[1].at("a"), 3u);
  EXPECT_EQ(e.table.at(1, 0), 9.0 / 4.0);
}

TEST(LabelEmbeddings, HandCountOracleOnSyntheticCorpus) {
  corpus::SyntheticSpec spec;
  spec.dim = 16;
  const corpus::SyntheticCorpus syn = corpus::generate_synthetic_corpus(spec);
  const auto& chars = syn.vocabulary.chars;
  const std::size_t k = syn.labels.size();
  std::vector<std::vector<double>> sums(k, std::vector<double>(spec.dim, 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (const corpus::Sentence& s : syn.sentences) {
    for (const corpus::Span& t : s.triggers) {
      const std::size_t type = *syn.labels.type_index(t.event_type);
      for (std::size_t p = t.begin; p <= t.end; ++p) {
        const std::size_t label = p == t.begin ? LabelSet::begin_label(type) : LabelSet::inside_label(type);
        const std::size_t row = chars.id(s.chars[p - 1]);
        for (std::size_t j = 0; j < spec.dim; ++j) sums[label][j] += chars.vectors().at(row, j);
        ++counts[label];
      }
    }
  }
  Rng rng(1);
  const LabelEmbeddings e = init_label_embeddings(syn.sentences, chars, syn.labels, rng);
  EXPECT_EQ(e.seed_counts, counts);
  std::size_t seeded = 0;
  for (std::size_t label = 0; label < k; ++label) {
    if (counts[label] == 0) continue;
    ++seeded;
    for (std::size_t j = 0; j < spec.dim; ++j) {
      EXPECT_EQ(e.table.at(label, j), sums[label][j] / static_cast<double>(counts[label]))
          << syn.labels.name(label) << " column " << j;
    }
  }
  EXPECT_GE(seeded, syn.labels.num_event_types());
  Rng again(1);
  EXPECT_EQ(init_label_embeddings(syn.sentences, chars, syn.labels, again).table.data, e.table.data);
}

TEST(Matcher, ScoresAreDotProducts) {
  diff::Tape tape;
  const auto s = matching_scores(tape.constant(Tensor::matrix({{1, 2}})), tape.constant(Tensor::identity(2)));
  EXPECT_EQ(s.value().data, (std::vector<double>{1, 2}));
  const auto z = matching_scores(tape.constant(Tensor::zeros({1, 3})), tape.constant(Tensor::filled({4, 3}, 1.5)));
  for (double v : z.value().data) EXPECT_EQ(v, 0.0);
}

TEST(Matcher, ScoresMatchNaiveDoubleLoop) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.below(10), k = 2 + rng.below(6), d = 1 + rng.below(8);
    const Tensor h = random_matrix(n, d, rng), e = random_matrix(k, d, rng);
    diff::Tape tape;
    const Tensor s = matching_scores(tape.constant(h), tape.constant(e)).value();
    ASSERT_EQ(s.shape, (diff::Shape{n, k}));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t y = 0; y < k; ++y) {
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) dot += h.at(i, j) * e.at(y, j);
        EXPECT_NEAR(s.at(i, y), dot, 1e-12);
      }
    }
  }
}

TEST(MarginLoss, Examples) {
  diff::Tape tape;
  EXPECT_EQ(margin_loss(tape.constant(Tensor::matrix({{5, 2}})), {0}, 2.0).item(), 0.0);
  EXPECT_EQ(margin_loss(tape.constant(Tensor::matrix({{1, 3}})), {0}, 2.0).item(), 4.0);
  // Runner-up is the maximum over every non-gold label, "O" included.
  EXPECT_EQ(margin_loss(tape.constant(Tensor::matrix({{3, 1, 0}, {0, 5, 1}})), {1, 1}, 2.0).item(), 4.0);
  EXPECT_THROW(margin_loss(tape.constant(Tensor::matrix({{1, 3}})), {0}, 0.0), ContractError);
}

TEST(MarginLoss, TiesGoToLowestLabel) {
  const Tensor s = Tensor::matrix({{1, 4, 4, 4}, {4, 4, 0, 4}});
  EXPECT_EQ(runner_up(s, 0, 0), 1u);
  EXPECT_EQ(runner_up(s, 0, 1), 2u);
  EXPECT_EQ(runner_up(s, 1, 0), 1u);
  EXPECT_EQ(runner_up(s, 1, 3), 0u);
}

TEST(MarginLoss, ZeroExactlyWhenEveryGapReachesMargin) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(5), k = 2 + rng.below(4);
    const Tensor s = random_matrix(n, k, rng, 4.0);
    std::vector<std::size_t> gold(n);
    bool all_clear = true;
    for (std::size_t i = 0; i < n; ++i) {
      gold[i] = rng.below(k);
      for (std::size_t y = 0; y < k; ++y) {
        if (y != gold[i] && s.at(i, gold[i]) - s.at(i, y) < 2.0) all_clear = false;
      }
    }
    diff::Tape tape;
    EXPECT_EQ(margin_loss(tape.constant(s), gold, 2.0).item() == 0.0, all_clear);
  }
}

TEST(MarginLoss, GradientMatchesFiniteDifferencesOffKink) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3, k = 4;
    Tensor s = random_matrix(n, k, rng, 3.0);
    s.requires_grad = true;
    std::vector<std::size_t> gold = {rng.below(k), rng.below(k), rng.below(k)};
    // Skip instances near a hinge or a runner-up tie, where the loss is not differentiable.
    bool smooth = true;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = runner_up(s, i, gold[i]);
      if (std::abs(2.0 + s.at(i, r) - s.at(i, gold[i])) < 1e-2) smooth = false;
      for (std::size_t y = 0; y < k; ++y) {
        if (y != r && y != gold[i] && std::abs(s.at(i, y) - s.at(i, r)) < 1e-2) smooth = false;
      }
    }
    if (!smooth) continue;
    const std::vector<encoder::NamedTensor> params{{"scores", &s}};
    const auto r = oracle::check_gradients(
        params,
        [&] {
          diff::Tape t(false);
          return margin_loss(t.param(s), gold, 2.0).item();
        },
        [&] {
          s.zero_grad();
          diff::Tape t;
          t.backward(margin_loss(t.param(s), gold, 2.0));
        });
    EXPECT_LT(r.worst_relative_error, 1e-6);
  }
}

TEST(MarginLoss, ShiftingARowLeavesLossUnchanged) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor s = random_matrix(4, 5, rng);
    const std::vector<std::size_t> gold = {0, 1, 4, 2};
    diff::Tape tape;
    const double before = margin_loss(tape.constant(s), gold, 2.0).item();
    const double c = rng.uniform(-10, 10);
    for (std::size_t j = 0; j < 5; ++j) s.at(2, j) += c;
    EXPECT_NEAR(margin_loss(tape.constant(s), gold, 2.0).item(), before, 1e-9);
  }
}

TEST(Crf, UniformSingleStepIsLn2) {
  CrfParams crf = CrfParams::make(2);
  std::fill(crf.transform.data.begin(), crf.transform.data.end(), 0.0);
  EXPECT_NEAR(crf_nll(Tensor::zeros({1, 2}), {0}, crf), std::log(2.0), 1e-15);
  EXPECT_NEAR(crf_nll(Tensor::zeros({1, 2}), {1}, crf), std::log(2.0), 1e-15);
}

TEST(Crf, InitialParameters) {
  const CrfParams crf = CrfParams::make(3);
  EXPECT_EQ(crf.transform.data, Tensor::identity(3).data);
  EXPECT_EQ(crf.transitions.shape, (diff::Shape{3, 3}));
  EXPECT_EQ(crf.start.shape, (diff::Shape{1, 3}));
  EXPECT_TRUE(crf.transform.requires_grad && crf.transitions.requires_grad && crf.start.requires_grad);
}

TEST(Crf, EmissionsApplyTransformRows) {
  const Tensor scores = Tensor::matrix({{1, 2}});
  const Tensor w = Tensor::matrix({{1, 1}, {2, -1}});
  EXPECT_EQ(emissions_of(scores, w).data, (std::vector<double>{3, 0}));
}

TEST(Crf, MatchesExhaustiveEnumeration) {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(4), k = 2 + rng.below(4);
    const Tensor em = random_matrix(n, k, rng), tr = random_matrix(k, k, rng), st = random_matrix(1, k, rng);
    const auto e = oracle::enumerate_paths(oracle::to_rows(em), oracle::to_rows(tr), row_of(st));
    double total = 0.0;
    for (double p : e.probabilities) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_NEAR(log_partition(em, tr, st), e.log_partition, 1e-9);
    EXPECT_EQ(viterbi(em, tr, st), e.argmax);
    const auto& path = e.paths[rng.below(e.paths.size())];
    EXPECT_NEAR(path_score(em, tr, st, path),
                oracle::naive_path_score(oracle::to_rows(em), oracle::to_rows(tr), row_of(st), path), 1e-12);
  }
}

TEST(Crf, NegativeLogLikelihoodMatchesEnumeration) {
  Rng rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(4), k = 2 + rng.below(4);
    CrfParams crf = CrfParams::make(k);
    crf.transform = random_matrix(k, k, rng, 1.0);
    crf.transitions = random_matrix(k, k, rng);
    crf.start = random_matrix(1, k, rng);
    const Tensor scores = random_matrix(n, k, rng);
    const Tensor em = emissions_of(scores, crf.transform);
    const auto e = oracle::enumerate_paths(oracle::to_rows(em), oracle::to_rows(crf.transitions), row_of(crf.start));
    const std::size_t pick = rng.below(e.paths.size());
    EXPECT_NEAR(crf_nll(scores, e.paths[pick], crf), -std::log(e.probabilities[pick]), 1e-9);
  }
}

TEST(Crf, GradientMatchesFiniteDifferences) {
  Rng rng(11);
  CrfParams crf = CrfParams::make(3);
  crf.transitions = random_matrix(3, 3, rng);
  crf.start = random_matrix(1, 3, rng);
  crf.transform.requires_grad = crf.transitions.requires_grad = crf.start.requires_grad = true;
  Tensor scores = random_matrix(4, 3, rng);
  scores.requires_grad = true;
  const std::vector<std::size_t> gold = {0, 1, 2, 0};
  auto params = crf.named_parameters();
  params.emplace_back("scores", &scores);
  auto forward = [&](diff::Tape& t) {
    return crf_negative_log_likelihood(t.param(scores), gold, t.param(crf.transform), t.param(crf.transitions),
                                       t.param(crf.start));
  };
  const auto r = oracle::check_gradients(
      params,
      [&] {
        diff::Tape t(false);
        return forward(t).item();
      },
      [&] {
        for (auto& [n, p] : params) p->zero_grad();
        diff::Tape t;
        t.backward(forward(t));
      });
  EXPECT_LT(r.worst_relative_error, 1e-6) << r.worst_parameter;
}

TEST(Viterbi, SingleStepIsArgmaxOfStartPlusEmission) {
  const Tensor em = Tensor::matrix({{1, 3, 2}});
  const Tensor tr = Tensor::zeros({3, 3});
  EXPECT_EQ(viterbi(em, tr, Tensor::matrix({{0, 0, 0}})), (std::vector<std::size_t>{1}));
  EXPECT_EQ(viterbi(em, tr, Tensor::matrix({{0, -2, 0}})), (std::vector<std::size_t>{2}));
  EXPECT_EQ(viterbi(em, tr, Tensor::matrix({{2, 0, 0}})), (std::vector<std::size_t>{0}));
  EXPECT_EQ(viterbi(em, tr, Tensor::matrix({{1, -1, 0}})), (std::vector<std::size_t>{0}));
}

TEST(Viterbi, ForcedChain) {
  const double ninf = -std::numeric_limits<double>::infinity();
  Rng rng(12);
  const std::size_t k = 4;
  Tensor tr = Tensor::filled({k, k}, ninf);
  tr.at(2, 0) = tr.at(0, 3) = tr.at(3, 1) = tr.at(1, 2) = 0.0;
  Tensor st = Tensor::filled({1, k}, ninf);
  st.at(0, 2) = 0.0;
  const Tensor em = random_matrix(6, k, rng, 5.0);
  EXPECT_EQ(viterbi(em, tr, st), (std::vector<std::size_t>{2, 0, 3, 1, 2, 0}));
}

TEST(Viterbi, BeatsRandomPaths) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(12), k = 2 + rng.below(6);
    const Tensor em = random_matrix(n, k, rng), tr = random_matrix(k, k, rng), st = random_matrix(1, k, rng);
    const double best = path_score(em, tr, st, viterbi(em, tr, st));
    for (int p = 0; p < 100; ++p) {
      std::vector<std::size_t> path(n);
      for (auto& y : path) y = rng.below(k);
      EXPECT_GE(best, path_score(em, tr, st, path));
    }
  }
}

TEST(Viterbi, TiesResolveToLowestLabels) {
  EXPECT_EQ(viterbi(Tensor::zeros({3, 3}), Tensor::zeros({3, 3}), Tensor::zeros({1, 3})),
            (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Viterbi, DecodeAppliesTransform) {
  CrfParams crf = CrfParams::make(2);
  crf.transform = Tensor::matrix({{0, 0}, {0, 0}});
  crf.start = Tensor::matrix({{0, 1}});
  EXPECT_EQ(viterbi_decode(Tensor::matrix({{5, -5}}), crf), (std::vector<std::size_t>{1}));
  crf.transform = Tensor::identity(2);
  EXPECT_EQ(viterbi_decode(Tensor::matrix({{5, -5}}), crf), (std::vector<std::size_t>{0}));
}
