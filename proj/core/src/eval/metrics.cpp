#include "lhgat/eval/metrics.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "lhgat/errors.hpp"

namespace lhgat::eval {

PrecisionRecall precision_recall(std::size_t correct, std::size_t predicted, std::size_t gold) {
  PrecisionRecall pr;
  pr.precision = predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0;
  pr.recall = gold ? static_cast<double>(correct) / static_cast<double>(gold) : 0.0;
  const double denom = pr.precision + pr.recall;
  pr.f1 = denom > 0 ? 2.0 * pr.precision * pr.recall / denom : 0.0;
  return pr;
}

EvalReport evaluate(const std::vector<std::vector<corpus::Span>>& gold,
                    const std::vector<std::vector<corpus::Span>>& predicted) {
  if (gold.size() != predicted.size()) {
    throw ContractError("evaluate: " + std::to_string(predicted.size()) + " predictions for " +
                        std::to_string(gold.size()) + " sentences");
  }
  EvalReport report;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const auto& g = gold[s];
    auto p = predicted[s];
    std::sort(p.begin(), p.end());
    report.gold += g.size();
    report.predicted += p.size();
    std::vector<bool> ti_used(g.size(), false);
    std::vector<bool> tc_used(g.size(), false);
    for (const corpus::Span& span : p) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (!ti_used[j] && g[j].begin == span.begin && g[j].end == span.end) {
          ti_used[j] = true;
          ++report.ti_correct;
          break;
        }
      }
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (!tc_used[j] && g[j] == span) {
          tc_used[j] = true;
          ++report.tc_correct;
          break;
        }
      }
    }
  }
  report.identification = precision_recall(report.ti_correct, report.predicted, report.gold);
  report.classification = precision_recall(report.tc_correct, report.predicted, report.gold);
  return report;
}

EvalReport evaluate(const std::vector<corpus::Sentence>& gold,
                    const std::vector<std::vector<corpus::Span>>& predicted) {
  std::vector<std::vector<corpus::Span>> spans;
  spans.reserve(gold.size());
  for (const auto& s : gold) spans.push_back(s.triggers);
  return evaluate(spans, predicted);
}

MismatchRecall mismatch_recall(const std::vector<corpus::Sentence>& gold,
                               const std::vector<std::vector<corpus::Span>>& predicted,
                               const lexgraph::Lexicon& lexicon) {
  if (gold.size() != predicted.size()) throw ContractError("mismatch_recall: prediction count mismatch");
  MismatchRecall out;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    std::set<std::pair<std::size_t, std::size_t>> matched;
    for (const auto& w : lexicon.match(gold[s].chars)) matched.emplace(w.begin, w.end);
    std::set<std::pair<std::size_t, std::size_t>> found;
    for (const auto& p : predicted[s]) found.emplace(p.begin, p.end);
    for (const corpus::Span& g : gold[s].triggers) {
      if (matched.count({g.begin, g.end})) continue;
      ++out.subset;
      if (found.count({g.begin, g.end})) ++out.found;
    }
  }
  if (out.subset > 0) out.recall = static_cast<double>(out.found) / static_cast<double>(out.subset);
  return out;
}

}  // namespace lhgat::eval
