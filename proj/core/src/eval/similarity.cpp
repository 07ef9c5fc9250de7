#include "lhgat/eval/similarity.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "lhgat/errors.hpp"

namespace lhgat::eval {

SimilarityMatrix export_similarity(const diff::Tensor& label_embeddings, const corpus::LabelSet& labels,
                                   LabelSubset subset, corpus::Warnings* warnings) {
  const diff::Tensor& e = label_embeddings;
  if (e.rank() != 2 || e.rows() != labels.size()) {
    throw DimensionError("label embeddings " + diff::to_string(e.shape) + " do not match " +
                         std::to_string(labels.size()) + " labels");
  }
  const std::size_t d = e.cols();
  std::vector<std::size_t> rows;
  std::vector<double> norms;
  SimilarityMatrix out;
  for (std::size_t t = 0; t < labels.num_event_types(); ++t) {
    const std::size_t row =
        subset == LabelSubset::kBegin ? corpus::LabelSet::begin_label(t) : corpus::LabelSet::inside_label(t);
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) sq += e.at(row, j) * e.at(row, j);
    if (!(sq > 0)) {
      if (warnings) warnings->push_back("label " + labels.name(row) + " has a zero embedding; excluded");
      continue;
    }
    rows.push_back(row);
    norms.push_back(std::sqrt(sq));
    out.labels.push_back(labels.name(row));
  }
  const std::size_t k = rows.size();
  if (k < 2) throw ContractError("similarity export needs at least two labels with non-zero embeddings");

  out.values = diff::Tensor::zeros({k, k});
  std::vector<double> logits(k);
  for (std::size_t a = 0; a < k; ++a) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) {
        logits[b] = -std::numeric_limits<double>::infinity();
        continue;
      }
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += e.at(rows[a], j) * e.at(rows[b], j);
      logits[b] = dot / (norms[a] * norms[b]);
      mx = std::max(mx, logits[b]);
    }
    double total = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      const double v = a == b ? 0.0 : std::exp(logits[b] - mx);
      out.values.at(a, b) = v;
      total += v;
    }
    for (std::size_t b = 0; b < k; ++b) out.values.at(a, b) /= total;
  }
  return out;
}

void write_similarity_csv(std::ostream& out, const SimilarityMatrix& matrix) {
  out << "label";
  for (const auto& name : matrix.labels) out << ',' << name;
  out << '\n';
  std::ostringstream cell;
  cell << std::setprecision(17);
  for (std::size_t a = 0; a < matrix.labels.size(); ++a) {
    out << matrix.labels[a];
    for (std::size_t b = 0; b < matrix.labels.size(); ++b) {
      cell.str("");
      cell << matrix.values.at(a, b);
      out << ',' << cell.str();
    }
    out << '\n';
  }
}

}  // namespace lhgat::eval
