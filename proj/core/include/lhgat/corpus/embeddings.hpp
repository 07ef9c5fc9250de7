#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lhgat/corpus/sentence.hpp"
#include "lhgat/diff/tensor.hpp"
#include "lhgat/random.hpp"

namespace lhgat::corpus {

inline constexpr const char* kUnknownToken = "<unk>";

// Token inventory with one embedding row per id. Id 0 is the UNK row.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  // Creates a table holding only the UNK row, drawn uniform in ±sqrt(3/dim).
  EmbeddingTable(std::size_t dim, Rng& rng);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const diff::Tensor& vectors() const { return vectors_; }
  diff::Tensor& vectors() { return vectors_; }

  std::optional<std::size_t> find(const std::string& token) const;
  // Falls back to the UNK id.
  std::size_t id(const std::string& token) const;

  // Adds or overwrites a row. Returns true when the token already existed.
  bool set(const std::string& token, const std::vector<double>& row);

  // Rebuilds a table from an id-ordered token list and matching matrix.
  static EmbeddingTable from_rows(std::vector<std::string> tokens, diff::Tensor vectors);

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  diff::Tensor vectors_;
};

struct Vocabulary {
  EmbeddingTable chars;
  EmbeddingTable words;
};

// Text format: "token v1 ... vd" per line, whitespace separated, with an
// optional leading "count dim" header. A repeated token keeps its last row.
EmbeddingTable read_embeddings(std::istream& in, std::size_t dim, Rng& rng, Warnings* warnings = nullptr);
EmbeddingTable load_embeddings(const std::string& path, std::size_t dim, Rng& rng,
                               Warnings* warnings = nullptr);
// Writes every row except UNK, with a "count dim" header.
void write_embeddings(std::ostream& out, const EmbeddingTable& table);

}  // namespace lhgat::corpus
