#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lhgat::corpus {

// Splits UTF-8 text into one string per code point. Throws ParseError on
// malformed sequences.
std::vector<std::string> split_utf8(std::string_view text);

std::string join(const std::vector<std::string>& chars, std::size_t begin, std::size_t end);

}  // namespace lhgat::corpus
