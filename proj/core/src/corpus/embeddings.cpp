#include "lhgat/corpus/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "lhgat/errors.hpp"

namespace lhgat::corpus {
namespace {

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_unsigned(std::string_view s, std::size_t& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(value);
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, Rng& rng) : dim_(dim) {
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
  const double bound = std::sqrt(3.0 / static_cast<double>(dim));
  std::vector<double> unk(dim);
  for (double& v : unk) v = rng.uniform(-bound, bound);
  tokens_.push_back(kUnknownToken);
  index_.emplace(kUnknownToken, 0);
  vectors_ = diff::Tensor({1, dim}, std::move(unk));
}

std::optional<std::size_t> EmbeddingTable::find(const std::string& token) const {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t EmbeddingTable::id(const std::string& token) const { return find(token).value_or(0); }

bool EmbeddingTable::set(const std::string& token, const std::vector<double>& row) {
  if (row.size() != dim_) {
    throw DimensionError("embedding row for '" + token + "' has " + std::to_string(row.size()) +
                         " values, expected " + std::to_string(dim_));
  }
  if (auto existing = find(token)) {
    std::copy(row.begin(), row.end(), vectors_.data.begin() + static_cast<std::ptrdiff_t>(*existing * dim_));
    return true;
  }
  index_.emplace(token, tokens_.size());
  tokens_.push_back(token);
  vectors_.data.insert(vectors_.data.end(), row.begin(), row.end());
  vectors_.shape = {tokens_.size(), dim_};
  return false;
}

EmbeddingTable EmbeddingTable::from_rows(std::vector<std::string> tokens, diff::Tensor vectors) {
  if (vectors.rank() != 2 || vectors.rows() != tokens.size()) {
    throw DimensionError("embedding matrix " + diff::to_string(vectors.shape) + " does not match " +
                         std::to_string(tokens.size()) + " tokens");
  }
  if (tokens.empty() || tokens.front() != kUnknownToken) {
    throw DataError("embedding table must start with the UNK row");
  }
  EmbeddingTable t;
  t.dim_ = vectors.cols();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!t.index_.emplace(tokens[i], i).second) throw DataError("duplicate token '" + tokens[i] + "'");
  }
  t.tokens_ = std::move(tokens);
  t.vectors_ = std::move(vectors);
  return t;
}

EmbeddingTable read_embeddings(std::istream& in, std::size_t dim, Rng& rng, Warnings* warnings) {
  EmbeddingTable table(dim, rng);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  std::vector<double> row(dim);
  while (std::getline(in, line)) {
    ++line_no;
    const auto parts = fields(line);
    if (parts.empty()) continue;
    if (first) {
      first = false;
      std::size_t count = 0;
      std::size_t header_dim = 0;
      if (parts.size() == 2 && parse_unsigned(parts[0], count) && parse_unsigned(parts[1], header_dim)) {
        if (header_dim == dim) continue;
        // With d = 1 the line is also a valid row; otherwise it is a header for another size.
        if (dim != 1) {
          throw DataError("line 1: header declares dimension " + std::to_string(header_dim) + ", expected " +
                          std::to_string(dim));
        }
      }
    }
    if (parts.size() != dim + 1) {
      throw ParseError("expected token and " + std::to_string(dim) + " values, found " +
                           std::to_string(parts.size() - 1),
                       line_no);
    }
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_double(parts[k + 1], row[k])) {
        throw ParseError("bad number '" + std::string(parts[k + 1]) + "'", line_no);
      }
    }
    const std::string token(parts[0]);
    if (table.set(token, row) && warnings) {
      warnings->push_back("line " + std::to_string(line_no) + ": token '" + token +
                          "' repeated; last occurrence wins");
    }
  }
  return table;
}

EmbeddingTable load_embeddings(const std::string& path, std::size_t dim, Rng& rng, Warnings* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embedding file '" + path + "'");
  return read_embeddings(in, dim, rng, warnings);
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  out << (table.size() - 1) << ' ' << table.dim() << '\n';
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 1; i < table.size(); ++i) {
    os.str("");
    os << table.tokens()[i];
    for (std::size_t k = 0; k < table.dim(); ++k) os << ' ' << table.vectors().at(i, k);
    out << os.str() << '\n';
  }
}

}  // namespace lhgat::corpus
