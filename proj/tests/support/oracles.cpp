#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lhgat::testing {

double relative_error(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

GradCheckResult check_gradients(const std::vector<encoder::NamedTensor>& params,
                                const std::function<double()>& loss, const std::function<void()>& backward,
                                double step, double floor) {
  backward();
  std::vector<std::vector<double>> analytic;
  for (const auto& [name, t] : params) {
    analytic.push_back(t->grad ? *t->grad : std::vector<double>(t->size(), 0.0));
  }
  GradCheckResult result;
  for (std::size_t p = 0; p < params.size(); ++p) {
    diff::Tensor& t = *params[p].second;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double saved = t.data[i];
      t.data[i] = saved + step;
      const double up = loss();
      t.data[i] = saved - step;
      const double down = loss();
      t.data[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double err = relative_error(analytic[p][i], numeric, floor);
      ++result.checked;
      if (err > result.worst_relative_error || result.worst_parameter.empty()) {
        result.worst_relative_error = err;
        result.worst_parameter = params[p].first;
        result.worst_index = i;
        result.analytic = analytic[p][i];
        result.numeric = numeric;
      }
    }
  }
  return result;
}

std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> brute_force_matches(
    const std::vector<std::string>& chars, const std::vector<std::vector<std::string>>& words) {
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> out;
  const std::size_t n = chars.size();
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t e = b + 1; e < n; ++e) {
      const std::vector<std::string> sub(chars.begin() + static_cast<std::ptrdiff_t>(b),
                                         chars.begin() + static_cast<std::ptrdiff_t>(e) + 1);
      // Later duplicates of the same word take precedence, as with re-insertion.
      std::optional<std::size_t> id;
      for (std::size_t w = 0; w < words.size(); ++w) {
        if (words[w] == sub) id = w;
      }
      if (id) out.emplace_back(*id, b + 1, e + 1);
    }
  }
  return out;
}

double naive_path_score(const std::vector<std::vector<double>>& emissions,
                        const std::vector<std::vector<double>>& transitions, const std::vector<double>& start,
                        const std::vector<std::size_t>& path) {
  double s = start[path[0]] + emissions[0][path[0]];
  for (std::size_t i = 1; i < path.size(); ++i) s += transitions[path[i - 1]][path[i]] + emissions[i][path[i]];
  return s;
}

Enumeration enumerate_paths(const std::vector<std::vector<double>>& emissions,
                            const std::vector<std::vector<double>>& transitions, const std::vector<double>& start) {
  const std::size_t n = emissions.size();
  const std::size_t k = start.size();
  Enumeration out;
  std::vector<std::size_t> path(n, 0);
  std::vector<double> scores;
  while (true) {
    out.paths.push_back(path);
    scores.push_back(naive_path_score(emissions, transitions, start, path));
    std::size_t pos = n;
    while (pos > 0 && path[pos - 1] + 1 == k) path[--pos] = 0;
    if (pos == 0) break;
    ++path[pos - 1];
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double s : scores) total += std::exp(s - top);
  out.log_partition = top + std::log(total);
  std::size_t best = 0;
  for (std::size_t p = 0; p < scores.size(); ++p) {
    out.probabilities.push_back(std::exp(scores[p] - out.log_partition));
    if (scores[p] > scores[best]) best = p;
  }
  out.argmax = out.paths[best];
  out.best_score = scores[best];
  return out;
}

std::vector<std::vector<double>> to_rows(const diff::Tensor& t) {
  std::vector<std::vector<double>> rows(t.rows(), std::vector<double>(t.cols()));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) rows[r][c] = t.data[r * t.cols() + c];
  }
  return rows;
}

NaiveCounts naive_score(const std::vector<std::vector<corpus::Span>>& gold,
                        const std::vector<std::vector<corpus::Span>>& predicted) {
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> gold_ti, pred_ti;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t, std::string>> gold_tc, pred_tc;
  NaiveCounts c;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (const auto& sp : gold[s]) {
      gold_ti.emplace(s, sp.begin, sp.end);
      gold_tc.emplace(s, sp.begin, sp.end, sp.event_type);
      ++c.gold;
    }
    for (const auto& sp : predicted[s]) {
      pred_ti.emplace(s, sp.begin, sp.end);
      pred_tc.emplace(s, sp.begin, sp.end, sp.event_type);
      ++c.predicted;
    }
  }
  for (const auto& t : pred_ti) c.ti += gold_ti.count(t);
  for (const auto& t : pred_tc) c.tc += gold_tc.count(t);
  return c;
}

std::vector<std::vector<double>> naive_similarity(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.size();
  std::vector<std::vector<double>> cos(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double dot = 0.0, ni = 0.0, nj = 0.0;
      for (std::size_t c = 0; c < rows[i].size(); ++c) {
        dot += rows[i][c] * rows[j][c];
        ni += rows[i][c] * rows[i][c];
        nj += rows[j][c] * rows[j][c];
      }
      cos[i][j] = dot / (std::sqrt(ni) * std::sqrt(nj));
    }
  }
  std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    double z = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) z += std::exp(cos[i][j]);
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) out[i][j] = std::exp(cos[i][j]) / z;
    }
  }
  return out;
}

std::vector<corpus::Span> random_spans(std::size_t n, const std::vector<std::string>& types, Rng& rng,
                                       double density) {
  std::vector<corpus::Span> out;
  std::size_t pos = 1;
  while (pos <= n) {
    if (rng.bernoulli(density)) {
      const std::size_t len = 1 + rng.below(3);
      const std::size_t end = std::min(n, pos + len - 1);
      out.push_back({pos, end, types[rng.below(types.size())]});
      pos = end + 1 + rng.below(2);
    } else {
      ++pos;
    }
  }
  return out;
}

}  // namespace lhgat::testing
