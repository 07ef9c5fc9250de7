#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "lhgat/corpus/label_set.hpp"
#include "lhgat/corpus/sentence.hpp"

namespace lhgat::corpus {

inline constexpr std::size_t kDefaultMaxLen = 250;

// JSONL, one object per line:
//   {"text": ["九","名",...], "triggers": [{"start":1,"end":2,"type":"Attack"}]}
// `text` may also be a plain UTF-8 string. Positions are 1-based inclusive.
// Sentences longer than max_len are cut; triggers reaching past the cut are
// dropped and reported in `warnings`.
std::vector<Sentence> read_corpus(std::istream& in, const LabelSet& labels,
                                  std::size_t max_len = kDefaultMaxLen, Warnings* warnings = nullptr);
std::vector<Sentence> load_corpus(const std::string& path, const LabelSet& labels,
                                  std::size_t max_len = kDefaultMaxLen, Warnings* warnings = nullptr);

void write_corpus(std::ostream& out, const std::vector<Sentence>& sentences);
std::string sentence_to_json(const Sentence& sentence);

// {"event_types": [...]}
LabelSet read_label_set(std::istream& in);
LabelSet load_label_set(const std::string& path);
void write_label_set(std::ostream& out, const LabelSet& labels);

}  // namespace lhgat::corpus
