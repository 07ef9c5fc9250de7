#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace lhgat::corpus {

// Trigger span over 1-based inclusive character positions.
struct Span {
  std::size_t begin = 1;
  std::size_t end = 1;
  std::string event_type;

  auto operator<=>(const Span&) const = default;
};

struct Sentence {
  std::vector<std::string> chars;
  std::vector<Span> triggers;

  std::size_t size() const { return chars.size(); }
};

using Warnings = std::vector<std::string>;

}  // namespace lhgat::corpus
