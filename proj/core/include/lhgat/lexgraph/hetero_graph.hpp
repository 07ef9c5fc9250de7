#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lhgat/lexgraph/lexicon.hpp"

namespace lhgat::lexgraph {

enum class NodeType { kChar, kWord };

// Node reference with a 0-based index within its type.
struct NodeRef {
  NodeType type = NodeType::kChar;
  std::size_t index = 0;
};

// Directed edge between 0-based node indices (source, target).
using Edge = std::pair<std::size_t, std::size_t>;

// Sentence graph with character and word nodes.
//   c2c: character -> character, neighbours only; self-loops are flagged separately.
//   w2c: word -> each character it covers.
//   c2w: character -> word.
// Word nodes are ordered by (begin, end, word_id), one per occurrence.
struct HeteroGraph {
  std::size_t num_chars = 0;
  std::vector<MatchedWord> words;
  std::vector<Edge> c2c;
  std::vector<Edge> w2c;
  std::vector<Edge> c2w;
  std::vector<bool> self_loop;

  std::size_t num_words() const { return words.size(); }
  std::size_t num_self_loops() const;
};

HeteroGraph build_graph(std::size_t num_chars, std::vector<MatchedWord> matches);
inline HeteroGraph build_graph(const corpus::Sentence& sentence, std::vector<MatchedWord> matches) {
  return build_graph(sentence.size(), std::move(matches));
}

// Incoming τ-type neighbours of `node`, ascending:
//   char, τ=char: c2c sources plus itself when it has a self-loop;
//   char, τ=word: w2c sources (covering words);
//   word, τ=char: c2w sources; word, τ=word: empty.
std::vector<std::size_t> neighbor_set(const HeteroGraph& graph, NodeRef node, NodeType type);

// Per-node neighbour lists for every node, equal to calling neighbor_set on each.
struct Neighborhoods {
  std::vector<std::vector<std::size_t>> char_chars;
  std::vector<std::vector<std::size_t>> char_words;
  std::vector<std::vector<std::size_t>> word_chars;
};
Neighborhoods index_neighborhoods(const HeteroGraph& graph);

// Throws ContractError naming the first violated structural invariant.
void validate(const HeteroGraph& graph);

}  // namespace lhgat::lexgraph
