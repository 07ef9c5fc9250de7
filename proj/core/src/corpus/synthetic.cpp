#include "lhgat/corpus/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lhgat/errors.hpp"
#include "lhgat/random.hpp"

namespace lhgat::corpus {
namespace {

constexpr std::size_t kCharsPerType = 6;
constexpr std::size_t kMinFiller = 8;

const char* const kTypeNames[] = {"Attack", "Die",   "Transport", "Meet",  "Injure",
                                  "Arrest", "Sue",   "Charge",    "Elect", "Marry"};

std::string encode_code_point(char32_t cp) {
  std::string s;
  if (cp < 0x80) {
    s += static_cast<char>(cp);
  } else if (cp < 0x800) {
    s += static_cast<char>(0xC0 | (cp >> 6));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    s += static_cast<char>(0xE0 | (cp >> 12));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return s;
}

std::vector<double> random_row(std::size_t dim, Rng& rng) {
  const double bound = std::sqrt(3.0 / static_cast<double>(dim));
  std::vector<double> row(dim);
  for (double& v : row) v = rng.uniform(-bound, bound);
  return row;
}

// One trigger occurrence laid out with its surrounding lexicon context.
struct Segment {
  std::vector<std::string> chars;
  std::size_t trigger_offset = 0;
  std::size_t trigger_length = 0;
  std::size_t type = 0;
  std::string token;
};

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.event_types == 0 || spec.sentences == 0 || spec.alphabet == 0 || spec.lexicon_size == 0 ||
      spec.dim == 0) {
    throw ConfigError("synthetic corpus sizes must be >= 1");
  }
  if (spec.min_length == 0 || spec.min_length > spec.max_length) {
    throw ConfigError("synthetic sentence length range is empty");
  }
  Rng rng(spec.seed);
  SyntheticCorpus out;

  const std::size_t ne = spec.event_types;
  const std::size_t trigger_chars = kCharsPerType * ne;
  const std::size_t alphabet = std::max(spec.alphabet, trigger_chars + kMinFiller);
  std::vector<std::string> chars;
  for (std::size_t i = 0; i < alphabet; ++i) chars.push_back(encode_code_point(0x4E00 + static_cast<char32_t>(i)));
  const std::vector<std::string> filler(chars.begin() + static_cast<std::ptrdiff_t>(trigger_chars), chars.end());

  std::vector<std::string> type_names;
  for (std::size_t t = 0; t < ne; ++t) {
    type_names.push_back(t < std::size(kTypeNames) ? kTypeNames[t] : "Event" + std::to_string(t));
  }
  out.labels = LabelSet(type_names);

  // Per type: A (single, sits inside a compound word), B (single, free-standing),
  // C (two-character lexicon word), D (two characters crossed by a lexicon word).
  struct TypeTokens {
    std::string a, b, c0, c1, d0, d1;
    std::string compound_tail, crossing_head;
  };
  std::vector<TypeTokens> tokens(ne);
  for (std::size_t t = 0; t < ne; ++t) {
    const std::size_t base = kCharsPerType * t;
    tokens[t] = {chars[base], chars[base + 1], chars[base + 2], chars[base + 3], chars[base + 4],
                 chars[base + 5], filler[t % filler.size()], filler[(t + ne) % filler.size()]};
    out.trigger_tokens.push_back(
        {tokens[t].a, tokens[t].b, tokens[t].c0 + tokens[t].c1, tokens[t].d0 + tokens[t].d1});
  }

  std::vector<std::string> priority;
  for (const auto& tt : tokens) priority.push_back(tt.c0 + tt.c1);
  for (const auto& tt : tokens) priority.push_back(tt.a + tt.compound_tail);
  for (const auto& tt : tokens) priority.push_back(tt.crossing_head + tt.d0);
  std::set<std::string> lexicon_set;
  for (const std::string& w : priority) {
    if (out.lexicon.size() == spec.lexicon_size) break;
    if (lexicon_set.insert(w).second) out.lexicon.push_back(w);
  }
  std::vector<std::vector<std::string>> filler_words;
  for (std::size_t attempts = 0; out.lexicon.size() < spec.lexicon_size; ++attempts) {
    if (attempts > 100000) throw ConfigError("cannot generate enough distinct lexicon words");
    const std::size_t len = 2 + rng.below(2);
    std::vector<std::string> w;
    for (std::size_t i = 0; i < len; ++i) w.push_back(filler[rng.below(filler.size())]);
    std::string joined;
    for (const auto& c : w) joined += c;
    if (lexicon_set.insert(joined).second) {
      out.lexicon.push_back(joined);
      filler_words.push_back(std::move(w));
    }
  }

  Vocabulary& vocab = out.vocabulary;
  vocab.chars = EmbeddingTable(spec.dim, rng);
  for (const std::string& c : chars) vocab.chars.set(c, random_row(spec.dim, rng));
  vocab.words = EmbeddingTable(spec.dim, rng);
  for (const std::string& w : out.lexicon) vocab.words.set(w, random_row(spec.dim, rng));

  auto make_segment = [&](std::size_t type, std::size_t form) {
    const TypeTokens& tt = tokens[type];
    Segment seg;
    seg.type = type;
    switch (form) {
      case 0:
        seg.chars = {tt.a};
        if (lexicon_set.count(tt.a + tt.compound_tail)) seg.chars.push_back(tt.compound_tail);
        seg.trigger_length = 1;
        seg.token = tt.a;
        break;
      case 1:
        seg.chars = {tt.b};
        seg.trigger_length = 1;
        seg.token = tt.b;
        break;
      case 2:
        seg.chars = {tt.c0, tt.c1};
        seg.trigger_length = 2;
        seg.token = tt.c0 + tt.c1;
        break;
      default:
        if (lexicon_set.count(tt.crossing_head + tt.d0)) {
          seg.chars = {tt.crossing_head};
          seg.trigger_offset = 1;
        }
        seg.chars.push_back(tt.d0);
        seg.chars.push_back(tt.d1);
        seg.trigger_length = 2;
        seg.token = tt.d0 + tt.d1;
        break;
    }
    return seg;
  };

  auto append_filler = [&](std::vector<std::string>& dst, std::size_t count) {
    while (count > 0) {
      if (!filler_words.empty() && count >= 3 && rng.bernoulli(0.3)) {
        const auto& w = filler_words[rng.below(filler_words.size())];
        if (w.size() <= count) {
          dst.insert(dst.end(), w.begin(), w.end());
          count -= w.size();
          continue;
        }
      }
      dst.push_back(filler[rng.below(filler.size())]);
      --count;
    }
  };

  for (std::size_t s = 0; s < spec.sentences; ++s) {
    const std::size_t length = spec.min_length + rng.below(spec.max_length - spec.min_length + 1);
    const std::size_t n_triggers = 1 + rng.below(2);
    std::vector<Segment> segments;
    std::size_t used = 0;
    for (std::size_t k = 0; k < n_triggers; ++k) {
      segments.push_back(make_segment(rng.below(ne), rng.below(4)));
      used += segments.back().chars.size();
    }
    // At least one filler character between consecutive segments.
    const std::size_t min_filler = segments.size() - 1;
    const std::size_t total_filler = std::max(length > used ? length - used : 0, min_filler);
    std::vector<std::size_t> gaps(segments.size() + 1, 0);
    for (std::size_t k = 1; k + 1 < gaps.size(); ++k) gaps[k] = 1;
    for (std::size_t r = min_filler; r < total_filler; ++r) ++gaps[rng.below(gaps.size())];

    Sentence sentence;
    std::vector<bool> flags;
    for (std::size_t k = 0; k < segments.size(); ++k) {
      append_filler(sentence.chars, gaps[k]);
      const Segment& seg = segments[k];
      const std::size_t begin = sentence.chars.size() + seg.trigger_offset + 1;
      sentence.chars.insert(sentence.chars.end(), seg.chars.begin(), seg.chars.end());
      sentence.triggers.push_back(Span{begin, begin + seg.trigger_length - 1, type_names[seg.type]});
      const bool mismatch = lexicon_set.count(seg.token) == 0;
      flags.push_back(mismatch);
      out.mismatch_count += mismatch ? 1 : 0;
    }
    append_filler(sentence.chars, gaps.back());
    out.sentences.push_back(std::move(sentence));
    out.mismatch.push_back(std::move(flags));
  }
  return out;
}

}  // namespace lhgat::corpus
