#pragma once

#include <cstddef>
#include <vector>

#include "lhgat/diff/ops.hpp"

namespace lhgat::labeler {

// I = H E^T: one row of k label scores per character.
diff::Var matching_scores(diff::Var final_chars, diff::Var label_embeddings);

// Highest-scoring label other than `gold` in one row; ties go to the lowest id.
std::size_t runner_up(const diff::Tensor& scores, std::size_t row, std::size_t gold);

// Sum over characters of max(margin + s_runner_up - s_gold, 0).
diff::Var margin_loss(diff::Var scores, const std::vector<std::size_t>& gold, double margin);

}  // namespace lhgat::labeler
