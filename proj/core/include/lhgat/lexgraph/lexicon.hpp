#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lhgat/corpus/embeddings.hpp"
#include "lhgat/corpus/sentence.hpp"

namespace lhgat::lexgraph {

// A lexicon word occurrence over 1-based inclusive character positions.
struct MatchedWord {
  std::size_t word_id = 0;
  std::size_t begin = 1;
  std::size_t end = 2;

  auto operator<=>(const MatchedWord&) const = default;
};

// Character trie of multi-character words. Each word carries the id of its
// row in the word embedding table.
class Lexicon {
 public:
  Lexicon();

  // Returns false (and stores nothing) for words shorter than two characters.
  // Re-inserting a word replaces its id.
  bool insert(const std::vector<std::string>& chars, std::size_t word_id);
  bool insert(const std::string& utf8_word, std::size_t word_id);

  std::optional<std::size_t> find(const std::vector<std::string>& chars) const;
  std::size_t size() const { return size_; }
  std::size_t max_word_length() const { return max_length_; }
  // Stored words in insertion order.
  const std::vector<std::string>& words() const { return words_; }

  // Every occurrence of every stored word, sorted by (begin, end).
  std::vector<MatchedWord> match(const std::vector<std::string>& chars) const;

  // All multi-character tokens of the word table (UNK excluded).
  static Lexicon from_table(const corpus::EmbeddingTable& words);
  // One UTF-8 word per line. Words without a row in `words` cannot become
  // graph nodes and are skipped with a warning.
  static Lexicon load(const std::string& path, const corpus::EmbeddingTable& words,
                      corpus::Warnings* warnings = nullptr);

 private:
  struct Node {
    std::map<std::string, std::size_t> children;
    std::optional<std::size_t> word_id;
  };
  std::vector<Node> nodes_;
  std::vector<std::string> words_;
  std::size_t size_ = 0;
  std::size_t max_length_ = 0;
};

inline std::vector<MatchedWord> match_lexicon(const corpus::Sentence& sentence, const Lexicon& lexicon) {
  return lexicon.match(sentence.chars);
}

}  // namespace lhgat::lexgraph
