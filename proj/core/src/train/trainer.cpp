#include "lhgat/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "lhgat/errors.hpp"
#include "lhgat/random.hpp"
#include "lhgat/train/optimizer.hpp"

namespace lhgat::train {
namespace {

nlohmann::json scores_json(const eval::PrecisionRecall& pr) {
  return {{"p", pr.precision}, {"r", pr.recall}, {"f1", pr.f1}};
}

// Distinct stream from the one used for initialisation.
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

}  // namespace

std::string to_json_line(const EpochMetrics& m) {
  nlohmann::json j = {{"epoch", m.epoch},
                      {"alpha", m.alpha},
                      {"train_loss", m.train_loss},
                      {"dev_ti", scores_json(m.dev.identification)},
                      {"dev_tc", scores_json(m.dev.classification)},
                      {"dev_ti_f1", m.dev.identification.f1},
                      {"dev_tc_f1", m.dev.classification.f1},
                      {"best", m.best}};
  return j.dump();
}

std::vector<std::vector<corpus::Span>> predict_all(Model& model, const std::vector<corpus::Sentence>& sentences) {
  std::vector<std::vector<corpus::Span>> out;
  out.reserve(sentences.size());
  for (const corpus::Sentence& s : sentences) out.push_back(predict(model, s));
  return out;
}

TrainResult train(Model model, const std::vector<corpus::Sentence>& train_corpus,
                  const std::vector<corpus::Sentence>& dev, const EpochCallback& on_epoch) {
  if (train_corpus.empty()) throw DataError("training corpus is empty");
  model.config.validate();
  const std::vector<corpus::Sentence>& selection = dev.empty() ? train_corpus : dev;

  std::vector<PreparedSentence> prepared;
  prepared.reserve(train_corpus.size());
  for (const corpus::Sentence& s : train_corpus) prepared.push_back(prepare(model, s));

  std::vector<NamedTensor> params = model.named_parameters();
  OptimizerState state = make_optimizer_state(params);
  Rng shuffle_rng(model.config.seed ^ kShuffleStream);
  std::vector<std::size_t> order(prepared.size());

  TrainResult result{.best = model, .best_epoch = 0, .history = {}};
  double best_f1 = -1.0;
  for (std::size_t epoch = 0; epoch < model.config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(order);

    double epoch_loss = 0.0;
    for (std::size_t idx : order) {
      for (const auto& [name, t] : params) t->zero_grad();
      diff::Tape tape;
      const diff::Var loss = total_loss(tape, model, prepared[idx], epoch);
      if (!std::isfinite(loss.item())) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", sentence " +
                            std::to_string(idx));
      }
      tape.backward(loss);
      for (const auto& [name, t] : params) {
        if (!t->all_finite() || (t->grad && !std::all_of(t->grad->begin(), t->grad->end(),
                                                           [](double g) { return std::isfinite(g); }))) {
          throw TrainingError("non-finite gradient for " + name + " at epoch " + std::to_string(epoch) +
                              ", sentence " + std::to_string(idx));
        }
      }
      clip_gradients(params, model.config.clip_norm);
      sgd_momentum_step(params, state, model.config.lr, model.config.momentum);
      epoch_loss += loss.item();
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.alpha = model.config.ablation.no_margin_loss ? 0.0 : model.config.alpha(epoch);
    metrics.train_loss = epoch_loss;
    metrics.dev = eval::evaluate(selection, predict_all(model, selection));
    if (metrics.dev.classification.f1 > best_f1) {
      best_f1 = metrics.dev.classification.f1;
      metrics.best = true;
      result.best = model;
      result.best_epoch = epoch;
    }
    result.history.push_back(metrics);
    if (on_epoch && !on_epoch(metrics)) break;
  }
  for (const auto& [name, t] : result.best.named_parameters()) t->grad.reset();
  return result;
}

}  // namespace lhgat::train
