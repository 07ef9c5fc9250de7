#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lhgat/corpus/embeddings.hpp"
#include "lhgat/corpus/label_set.hpp"
#include "lhgat/corpus/sentence.hpp"
#include "lhgat/diff/tensor.hpp"
#include "lhgat/random.hpp"

namespace lhgat::labeler {

struct LabelEmbeddings {
  diff::Tensor table;  // [k, d], trainable
  // Per label: number of seed character occurrences and which characters they were.
  std::vector<std::size_t> seed_counts;
  std::vector<std::map<std::string, std::size_t>> seed_chars;
};

// Trigger-prototype initialisation. Row B-X is the mean embedding of every
// character occurrence that begins an X trigger in `corpus`, row I-X the mean
// over inside characters. Occurrences are summed in corpus order and divided
// by their count. Rows without seeds (always "O") are drawn uniform in
// ±sqrt(3/d), in label order.
LabelEmbeddings init_label_embeddings(const std::vector<corpus::Sentence>& corpus,
                                      const corpus::EmbeddingTable& chars, const corpus::LabelSet& labels,
                                      Rng& rng);

// Every row drawn uniform in ±sqrt(3/d); no seeds recorded.
LabelEmbeddings random_label_embeddings(std::size_t labels, std::size_t dim, Rng& rng);

}  // namespace lhgat::labeler
