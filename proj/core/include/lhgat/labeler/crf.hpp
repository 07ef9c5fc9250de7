#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lhgat/diff/ops.hpp"

namespace lhgat::labeler {

// Linear-chain CRF over label scores. The emission potential of label y at
// step i is transform[y] . I_i; transitions[y', y] scores y' -> y and start[y]
// scores the first label.
struct CrfParams {
  diff::Tensor transform;    // [k, k], identity at init
  diff::Tensor transitions;  // [k, k]
  diff::Tensor start;        // [1, k]

  static CrfParams make(std::size_t labels);
  std::vector<std::pair<std::string, diff::Tensor*>> named_parameters();
};

// Emission potentials [n, k] = I transform^T.
diff::Var crf_emissions(diff::Var scores, diff::Var transform);
// Forward algorithm in log space; returns log Z as a [1, 1] value.
diff::Var crf_log_partition(diff::Var emissions, diff::Var transitions, diff::Var start);
diff::Var crf_path_score(diff::Var emissions, diff::Var transitions, diff::Var start,
                         const std::vector<std::size_t>& path);
// -log P(gold | sentence).
diff::Var crf_negative_log_likelihood(diff::Var scores, const std::vector<std::size_t>& gold,
                                      diff::Var transform, diff::Var transitions, diff::Var start);

// Plain-value helpers used at inference time.
diff::Tensor emissions_of(const diff::Tensor& scores, const diff::Tensor& transform);
double path_score(const diff::Tensor& emissions, const diff::Tensor& transitions, const diff::Tensor& start,
                  const std::vector<std::size_t>& path);
// Exact argmax path. Ties resolve to the lowest label id, both for the final
// label and for every back-pointer.
std::vector<std::size_t> viterbi(const diff::Tensor& emissions, const diff::Tensor& transitions,
                                 const diff::Tensor& start);
std::vector<std::size_t> viterbi_decode(const diff::Tensor& scores, const CrfParams& crf);

}  // namespace lhgat::labeler
