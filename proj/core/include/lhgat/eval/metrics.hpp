#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lhgat/corpus/sentence.hpp"
#include "lhgat/lexgraph/lexicon.hpp"

namespace lhgat::eval {

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro-averaged span scores. Identification (TI) matches (begin, end);
// classification (TC) also requires the event type.
struct EvalReport {
  PrecisionRecall identification;
  PrecisionRecall classification;
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t ti_correct = 0;
  std::size_t tc_correct = 0;
};

PrecisionRecall precision_recall(std::size_t correct, std::size_t predicted, std::size_t gold);

// Predictions are taken in position order and each credits the first unused
// gold span it matches, so no gold span is credited twice.
EvalReport evaluate(const std::vector<std::vector<corpus::Span>>& gold,
                    const std::vector<std::vector<corpus::Span>>& predicted);
EvalReport evaluate(const std::vector<corpus::Sentence>& gold,
                    const std::vector<std::vector<corpus::Span>>& predicted);

struct MismatchRecall {
  // Gold triggers whose span equals no lexicon match in their sentence.
  std::size_t subset = 0;
  std::size_t found = 0;
  // Empty when the subset is empty.
  std::optional<double> recall;
};

// Identification recall restricted to word-trigger-mismatch triggers.
MismatchRecall mismatch_recall(const std::vector<corpus::Sentence>& gold,
                               const std::vector<std::vector<corpus::Span>>& predicted,
                               const lexgraph::Lexicon& lexicon);

}  // namespace lhgat::eval
