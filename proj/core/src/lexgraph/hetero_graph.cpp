#include "lhgat/lexgraph/hetero_graph.hpp"

#include <algorithm>
#include <tuple>

#include "lhgat/errors.hpp"

namespace lhgat::lexgraph {

std::size_t HeteroGraph::num_self_loops() const {
  return static_cast<std::size_t>(std::count(self_loop.begin(), self_loop.end(), true));
}

HeteroGraph build_graph(std::size_t num_chars, std::vector<MatchedWord> matches) {
  for (const MatchedWord& w : matches) {
    if (w.begin < 1 || w.end > num_chars || w.end <= w.begin) {
      throw ContractError("matched word (" + std::to_string(w.begin) + "," + std::to_string(w.end) +
                          ") invalid for a sentence of length " + std::to_string(num_chars));
    }
  }
  std::sort(matches.begin(), matches.end(), [](const MatchedWord& x, const MatchedWord& y) {
    return std::tie(x.begin, x.end, x.word_id) < std::tie(y.begin, y.end, y.word_id);
  });
  matches.erase(std::unique(matches.begin(), matches.end()), matches.end());

  HeteroGraph g;
  g.num_chars = num_chars;
  g.self_loop.assign(num_chars, true);
  for (std::size_t i = 0; i < num_chars; ++i) {
    if (i > 0) g.c2c.emplace_back(i, i - 1);
    if (i + 1 < num_chars) g.c2c.emplace_back(i, i + 1);
  }
  for (std::size_t w = 0; w < matches.size(); ++w) {
    for (std::size_t j = matches[w].begin - 1; j < matches[w].end; ++j) {
      g.w2c.emplace_back(w, j);
      g.c2w.emplace_back(j, w);
    }
  }
  g.words = std::move(matches);
  return g;
}

std::vector<std::size_t> neighbor_set(const HeteroGraph& graph, NodeRef node, NodeType type) {
  std::vector<std::size_t> out;
  if (node.type == NodeType::kChar) {
    if (node.index >= graph.num_chars) {
      throw ContractError("character node " + std::to_string(node.index) + " does not exist");
    }
    if (type == NodeType::kChar) {
      for (const Edge& e : graph.c2c) {
        if (e.second == node.index) out.push_back(e.first);
      }
      if (graph.self_loop[node.index]) out.push_back(node.index);
    } else {
      for (const Edge& e : graph.w2c) {
        if (e.second == node.index) out.push_back(e.first);
      }
    }
  } else {
    if (node.index >= graph.num_words()) {
      throw ContractError("word node " + std::to_string(node.index) + " does not exist");
    }
    if (type == NodeType::kChar) {
      for (const Edge& e : graph.c2w) {
        if (e.second == node.index) out.push_back(e.first);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Neighborhoods index_neighborhoods(const HeteroGraph& graph) {
  Neighborhoods nb;
  nb.char_chars.resize(graph.num_chars);
  nb.char_words.resize(graph.num_chars);
  nb.word_chars.resize(graph.num_words());
  for (const Edge& e : graph.c2c) nb.char_chars[e.second].push_back(e.first);
  for (std::size_t i = 0; i < graph.num_chars; ++i) {
    if (graph.self_loop[i]) nb.char_chars[i].push_back(i);
  }
  for (const Edge& e : graph.w2c) nb.char_words[e.second].push_back(e.first);
  for (const Edge& e : graph.c2w) nb.word_chars[e.second].push_back(e.first);
  for (auto* lists : {&nb.char_chars, &nb.char_words, &nb.word_chars}) {
    for (auto& l : *lists) std::sort(l.begin(), l.end());
  }
  return nb;
}

void validate(const HeteroGraph& graph) {
  const std::size_t n = graph.num_chars;
  const std::size_t m = graph.num_words();
  if (graph.self_loop.size() != n) throw ContractError("self-loop flags do not cover every character");
  auto check_unique = [](std::vector<Edge> edges, const char* kind) {
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      throw ContractError(std::string("duplicate ") + kind + " edge");
    }
  };
  check_unique(graph.c2c, "c2c");
  check_unique(graph.w2c, "w2c");
  check_unique(graph.c2w, "c2w");
  for (const Edge& e : graph.c2c) {
    if (e.first >= n || e.second >= n) throw ContractError("c2c edge endpoint out of range");
    if (e.first == e.second) throw ContractError("c2c self-loop stored as an edge");
    if (e.first + 1 != e.second && e.second + 1 != e.first) throw ContractError("c2c edge between non-adjacent characters");
  }
  for (const Edge& e : graph.w2c) {
    if (e.first >= m || e.second >= n) throw ContractError("w2c edge endpoint out of range");
    const MatchedWord& w = graph.words[e.first];
    if (e.second + 1 < w.begin || e.second + 1 > w.end) throw ContractError("w2c edge to an uncovered character");
  }
  for (const Edge& e : graph.c2w) {
    if (e.first >= n || e.second >= m) throw ContractError("c2w edge endpoint out of range");
    const MatchedWord& w = graph.words[e.second];
    if (e.first + 1 < w.begin || e.first + 1 > w.end) throw ContractError("c2w edge from an uncovered character");
  }
}

}  // namespace lhgat::lexgraph
