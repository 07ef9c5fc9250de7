#include "lhgat/labeler/label_embeddings.hpp"

#include <cmath>

#include "lhgat/corpus/bio.hpp"
#include "lhgat/errors.hpp"

namespace lhgat::labeler {
namespace {

void fill_random_row(diff::Tensor& table, std::size_t row, Rng& rng) {
  const std::size_t d = table.cols();
  const double bound = std::sqrt(3.0 / static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) table.at(row, j) = rng.uniform(-bound, bound);
}

}  // namespace

LabelEmbeddings init_label_embeddings(const std::vector<corpus::Sentence>& corpus,
                                      const corpus::EmbeddingTable& chars, const corpus::LabelSet& labels,
                                      Rng& rng) {
  const std::size_t k = labels.size();
  const std::size_t d = chars.dim();
  LabelEmbeddings out;
  out.table = diff::Tensor::zeros({k, d});
  out.seed_counts.assign(k, 0);
  out.seed_chars.assign(k, {});

  for (const corpus::Sentence& s : corpus) {
    const std::vector<std::size_t> bio = corpus::encode_bio(s, labels);
    for (std::size_t i = 0; i < bio.size(); ++i) {
      const std::size_t label = bio[i];
      if (label == corpus::LabelSet::kOutside) continue;
      const std::size_t row = chars.id(s.chars[i]);
      for (std::size_t j = 0; j < d; ++j) out.table.at(label, j) += chars.vectors().at(row, j);
      ++out.seed_counts[label];
      ++out.seed_chars[label][s.chars[i]];
    }
  }
  for (std::size_t label = 0; label < k; ++label) {
    const std::size_t z = out.seed_counts[label];
    if (z == 0) {
      fill_random_row(out.table, label, rng);
      continue;
    }
    for (std::size_t j = 0; j < d; ++j) out.table.at(label, j) /= static_cast<double>(z);
  }
  out.table.requires_grad = true;
  return out;
}

LabelEmbeddings random_label_embeddings(std::size_t labels, std::size_t dim, Rng& rng) {
  LabelEmbeddings out;
  out.table = diff::Tensor::zeros({labels, dim});
  for (std::size_t label = 0; label < labels; ++label) fill_random_row(out.table, label, rng);
  out.seed_counts.assign(labels, 0);
  out.seed_chars.assign(labels, {});
  out.table.requires_grad = true;
  return out;
}

}  // namespace lhgat::labeler
