#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lhgat/corpus/embeddings.hpp"
#include "lhgat/corpus/label_set.hpp"
#include "lhgat/corpus/sentence.hpp"

namespace lhgat::corpus {

struct SyntheticSpec {
  std::uint64_t seed = 7;
  std::size_t event_types = 3;
  std::size_t sentences = 20;
  // Grown when too small to give every event type its own trigger characters
  // plus a handful of filler characters.
  std::size_t alphabet = 40;
  std::size_t lexicon_size = 12;
  std::size_t dim = 100;
  std::size_t min_length = 6;
  std::size_t max_length = 14;
};

struct SyntheticCorpus {
  LabelSet labels;
  std::vector<Sentence> sentences;
  // Multi-character lexicon words, in vocabulary order.
  std::vector<std::string> lexicon;
  Vocabulary vocabulary;
  // Trigger strings per event type (index-aligned with labels.event_types()).
  std::vector<std::vector<std::string>> trigger_tokens;
  // Per sentence, per trigger: true when the trigger string is not a lexicon
  // word, i.e. no lexicon match can coincide with its span.
  std::vector<std::vector<bool>> mismatch;
  std::size_t mismatch_count = 0;
};

// Deterministic in `spec`. Every event type gets four trigger strings: a single
// character that sits inside a compound lexicon word, a free-standing single
// character, a two-character lexicon word, and a two-character string whose
// first character ends another lexicon word.
SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec);

}  // namespace lhgat::corpus
