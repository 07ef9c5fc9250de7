#include "lhgat/lexgraph/lexicon.hpp"

#include <algorithm>
#include <fstream>

#include "lhgat/corpus/utf8.hpp"
#include "lhgat/errors.hpp"

namespace lhgat::lexgraph {

Lexicon::Lexicon() : nodes_(1) {}

bool Lexicon::insert(const std::vector<std::string>& chars, std::size_t word_id) {
  if (chars.size() < 2) return false;
  std::size_t node = 0;
  for (const std::string& c : chars) {
    auto it = nodes_[node].children.find(c);
    if (it == nodes_[node].children.end()) {
      nodes_.emplace_back();
      it = nodes_[node].children.emplace(c, nodes_.size() - 1).first;
    }
    node = it->second;
  }
  if (!nodes_[node].word_id) {
    ++size_;
    std::string joined;
    for (const auto& c : chars) joined += c;
    words_.push_back(std::move(joined));
  }
  nodes_[node].word_id = word_id;
  max_length_ = std::max(max_length_, chars.size());
  return true;
}

bool Lexicon::insert(const std::string& utf8_word, std::size_t word_id) {
  return insert(corpus::split_utf8(utf8_word), word_id);
}

std::optional<std::size_t> Lexicon::find(const std::vector<std::string>& chars) const {
  std::size_t node = 0;
  for (const std::string& c : chars) {
    auto it = nodes_[node].children.find(c);
    if (it == nodes_[node].children.end()) return std::nullopt;
    node = it->second;
  }
  return nodes_[node].word_id;
}

std::vector<MatchedWord> Lexicon::match(const std::vector<std::string>& chars) const {
  std::vector<MatchedWord> out;
  for (std::size_t b = 0; b < chars.size(); ++b) {
    std::size_t node = 0;
    for (std::size_t e = b; e < chars.size(); ++e) {
      auto it = nodes_[node].children.find(chars[e]);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      if (nodes_[node].word_id) out.push_back(MatchedWord{*nodes_[node].word_id, b + 1, e + 1});
    }
  }
  return out;
}

Lexicon Lexicon::from_table(const corpus::EmbeddingTable& words) {
  Lexicon lex;
  for (std::size_t id = 1; id < words.size(); ++id) lex.insert(words.tokens()[id], id);
  return lex;
}

Lexicon Lexicon::load(const std::string& path, const corpus::EmbeddingTable& words,
                      corpus::Warnings* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lexicon file '" + path + "'");
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  std::size_t missing = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    const std::string word = line.substr(start);
    std::vector<std::string> chars;
    try {
      chars = corpus::split_utf8(word);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (chars.size() < 2) continue;
    const auto id = words.find(word);
    if (!id) {
      ++missing;
      continue;
    }
    lex.insert(chars, *id);
  }
  if (missing > 0 && warnings) {
    warnings->push_back(std::to_string(missing) + " lexicon word(s) without an embedding row skipped");
  }
  return lex;
}

}  // namespace lhgat::lexgraph
