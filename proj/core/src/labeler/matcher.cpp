#include "lhgat/labeler/matcher.hpp"

#include "lhgat/errors.hpp"

namespace lhgat::labeler {

diff::Var matching_scores(diff::Var final_chars, diff::Var label_embeddings) {
  return diff::matmul(final_chars, diff::transpose(label_embeddings));
}

std::size_t runner_up(const diff::Tensor& scores, std::size_t row, std::size_t gold) {
  const std::size_t k = scores.cols();
  std::size_t best = gold == 0 ? 1 : 0;
  for (std::size_t y = best + 1; y < k; ++y) {
    if (y != gold && scores.at(row, y) > scores.at(row, best)) best = y;
  }
  return best;
}

diff::Var margin_loss(diff::Var scores, const std::vector<std::size_t>& gold, double margin) {
  if (!(margin > 0)) throw ContractError("margin must be positive");
  const diff::Tensor& s = scores.value();
  if (s.rank() != 2 || s.rows() != gold.size()) {
    throw DimensionError("margin_loss: scores " + diff::to_string(s.shape) + " for " +
                         std::to_string(gold.size()) + " gold labels");
  }
  if (s.cols() < 2) throw ContractError("margin_loss needs at least two labels");
  std::vector<std::pair<std::size_t, std::size_t>> gold_cells;
  std::vector<std::pair<std::size_t, std::size_t>> rival_cells;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= s.cols()) throw ContractError("gold label out of range");
    gold_cells.emplace_back(i, gold[i]);
    rival_cells.emplace_back(i, runner_up(s, i, gold[i]));
  }
  const diff::Var gap = diff::sub(diff::pick(scores, rival_cells), diff::pick(scores, gold_cells));
  return diff::sum(diff::relu(diff::add_scalar(gap, margin)));
}

}  // namespace lhgat::labeler
