#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lhgat/corpus/label_set.hpp"
#include "lhgat/corpus/sentence.hpp"
#include "lhgat/diff/tensor.hpp"

namespace lhgat::eval {

enum class LabelSubset { kBegin, kInside };

// Row-normalised label similarity: cosine between label embeddings, diagonal
// masked, softmax over each row. Masked cells hold 0.
struct SimilarityMatrix {
  std::vector<std::string> labels;
  diff::Tensor values;  // [k', k']
};

// Rows with zero norm are left out (with a warning). Needs two usable rows.
SimilarityMatrix export_similarity(const diff::Tensor& label_embeddings, const corpus::LabelSet& labels,
                                   LabelSubset subset, corpus::Warnings* warnings = nullptr);

// Header row and first column carry label names.
void write_similarity_csv(std::ostream& out, const SimilarityMatrix& matrix);

}  // namespace lhgat::eval
