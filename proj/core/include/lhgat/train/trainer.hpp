#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhgat/eval/metrics.hpp"
#include "lhgat/train/model.hpp"

namespace lhgat::train {

// Raised when a loss or gradient turns non-finite.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double alpha = 0.0;
  double train_loss = 0.0;
  eval::EvalReport dev;
  bool best = false;
};

std::string to_json_line(const EpochMetrics& metrics);

struct TrainResult {
  // Parameters of the epoch with the best dev classification F1.
  Model best;
  std::size_t best_epoch = 0;
  std::vector<EpochMetrics> history;
};

// Returning false stops training after the current epoch.
using EpochCallback = std::function<bool(const EpochMetrics&)>;

// One sentence per SGD step, epoch order shuffled from config.seed. When
// `dev` is empty the training corpus doubles as the selection set.
TrainResult train(Model model, const std::vector<corpus::Sentence>& train_corpus,
                  const std::vector<corpus::Sentence>& dev, const EpochCallback& on_epoch = {});

std::vector<std::vector<corpus::Span>> predict_all(Model& model, const std::vector<corpus::Sentence>& sentences);

}  // namespace lhgat::train
