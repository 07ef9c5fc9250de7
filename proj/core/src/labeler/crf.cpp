#include "lhgat/labeler/crf.hpp"

#include <limits>

#include "lhgat/errors.hpp"

namespace lhgat::labeler {
namespace {

void check_potentials(const diff::Tensor& emissions, const diff::Tensor& transitions, const diff::Tensor& start) {
  if (emissions.rank() != 2 || emissions.rows() == 0) {
    throw ContractError("CRF needs at least one position, got emissions " + diff::to_string(emissions.shape));
  }
  const std::size_t k = emissions.cols();
  if (transitions.shape != diff::Shape{k, k} || start.shape != diff::Shape{1, k}) {
    throw DimensionError("CRF potentials " + diff::to_string(transitions.shape) + " / " +
                         diff::to_string(start.shape) + " do not match " + std::to_string(k) + " labels");
  }
}

}  // namespace

CrfParams CrfParams::make(std::size_t labels) {
  CrfParams p;
  p.transform = diff::Tensor::identity(labels);
  p.transitions = diff::Tensor::zeros({labels, labels});
  p.start = diff::Tensor::zeros({1, labels});
  p.transform.requires_grad = true;
  p.transitions.requires_grad = true;
  p.start.requires_grad = true;
  return p;
}

std::vector<std::pair<std::string, diff::Tensor*>> CrfParams::named_parameters() {
  return {{"crf.transform", &transform}, {"crf.transitions", &transitions}, {"crf.start", &start}};
}

diff::Var crf_emissions(diff::Var scores, diff::Var transform) {
  return diff::matmul(scores, diff::transpose(transform));
}

diff::Var crf_log_partition(diff::Var emissions, diff::Var transitions, diff::Var start) {
  check_potentials(emissions.value(), transitions.value(), start.value());
  const std::size_t n = emissions.value().rows();
  diff::Var alpha = diff::add(start, diff::slice(emissions, 0, 0, 1));
  for (std::size_t i = 1; i < n; ++i) {
    // scores[y', y] = alpha[y'] + transitions[y', y]; reduce over y'.
    const diff::Var scores = diff::add(diff::transpose(alpha), transitions);
    alpha = diff::add(diff::log_sum_exp(scores, 0), diff::slice(emissions, 0, i, 1));
  }
  return diff::log_sum_exp(alpha, 1);
}

diff::Var crf_path_score(diff::Var emissions, diff::Var transitions, diff::Var start,
                         const std::vector<std::size_t>& path) {
  check_potentials(emissions.value(), transitions.value(), start.value());
  const std::size_t n = emissions.value().rows();
  const std::size_t k = emissions.value().cols();
  if (path.size() != n) throw ContractError("path length does not match sentence length");
  std::vector<std::pair<std::size_t, std::size_t>> emit_cells;
  std::vector<std::pair<std::size_t, std::size_t>> trans_cells;
  for (std::size_t i = 0; i < n; ++i) {
    if (path[i] >= k) throw ContractError("label id out of range in path");
    emit_cells.emplace_back(i, path[i]);
    if (i > 0) trans_cells.emplace_back(path[i - 1], path[i]);
  }
  diff::Var total = diff::add(diff::sum(diff::pick(emissions, emit_cells)),
                              diff::sum(diff::pick(start, {{0, path[0]}})));
  if (!trans_cells.empty()) total = diff::add(total, diff::sum(diff::pick(transitions, trans_cells)));
  return total;
}

diff::Var crf_negative_log_likelihood(diff::Var scores, const std::vector<std::size_t>& gold,
                                      diff::Var transform, diff::Var transitions, diff::Var start) {
  const diff::Var emissions = crf_emissions(scores, transform);
  const diff::Var log_z = diff::reshape(crf_log_partition(emissions, transitions, start), {});
  return diff::sub(log_z, crf_path_score(emissions, transitions, start, gold));
}

diff::Tensor emissions_of(const diff::Tensor& scores, const diff::Tensor& transform) {
  const std::size_t n = scores.rows();
  const std::size_t k = transform.rows();
  if (transform.cols() != scores.cols()) {
    throw DimensionError("CRF transform " + diff::to_string(transform.shape) + " does not match scores " +
                         diff::to_string(scores.shape));
  }
  diff::Tensor out = diff::Tensor::zeros({n, k});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t y = 0; y < k; ++y) {
      double acc = 0.0;
      for (std::size_t j = 0; j < scores.cols(); ++j) acc += transform.at(y, j) * scores.at(i, j);
      out.at(i, y) = acc;
    }
  }
  return out;
}

double path_score(const diff::Tensor& emissions, const diff::Tensor& transitions, const diff::Tensor& start,
                  const std::vector<std::size_t>& path) {
  check_potentials(emissions, transitions, start);
  double total = start.at(0, path.at(0));
  for (std::size_t i = 0; i < path.size(); ++i) {
    total += emissions.at(i, path[i]);
    if (i > 0) total += transitions.at(path[i - 1], path[i]);
  }
  return total;
}

std::vector<std::size_t> viterbi(const diff::Tensor& emissions, const diff::Tensor& transitions,
                                 const diff::Tensor& start) {
  check_potentials(emissions, transitions, start);
  const std::size_t n = emissions.rows();
  const std::size_t k = emissions.cols();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> best(k);
  std::vector<double> next(k);
  std::vector<std::size_t> back(n * k, 0);
  for (std::size_t y = 0; y < k; ++y) best[y] = start.at(0, y) + emissions.at(0, y);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t y = 0; y < k; ++y) {
      double top = kNegInf;
      std::size_t arg = 0;
      for (std::size_t prev = 0; prev < k; ++prev) {
        const double s = best[prev] + transitions.at(prev, y);
        if (s > top) {
          top = s;
          arg = prev;
        }
      }
      next[y] = top + emissions.at(i, y);
      back[i * k + y] = arg;
    }
    best.swap(next);
  }
  std::size_t last = 0;
  for (std::size_t y = 1; y < k; ++y) {
    if (best[y] > best[last]) last = y;
  }
  std::vector<std::size_t> path(n);
  path[n - 1] = last;
  for (std::size_t i = n - 1; i > 0; --i) path[i - 1] = back[i * k + path[i]];
  return path;
}

std::vector<std::size_t> viterbi_decode(const diff::Tensor& scores, const CrfParams& crf) {
  return viterbi(emissions_of(scores, crf.transform), crf.transitions, crf.start);
}

}  // namespace lhgat::labeler
