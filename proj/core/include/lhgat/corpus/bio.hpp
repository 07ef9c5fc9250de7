#pragma once

#include <cstddef>
#include <vector>

#include "lhgat/corpus/label_set.hpp"
#include "lhgat/corpus/sentence.hpp"

namespace lhgat::corpus {

std::vector<std::size_t> encode_bio(const Sentence& sentence, const LabelSet& labels);

// Maximal B-X (I-X)* runs become spans. An I-X that does not continue a run of
// type X opens a new span of type X.
std::vector<Span> decode_bio(const std::vector<std::size_t>& label_ids, const LabelSet& labels);

}  // namespace lhgat::corpus
