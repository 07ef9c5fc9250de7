#include "lhgat/corpus/bio.hpp"

#include "lhgat/errors.hpp"

namespace lhgat::corpus {

std::vector<std::size_t> encode_bio(const Sentence& sentence, const LabelSet& labels) {
  std::vector<std::size_t> ids(sentence.size(), LabelSet::kOutside);
  for (const Span& span : sentence.triggers) {
    const auto type = labels.type_index(span.event_type);
    if (!type) throw DataError("unknown event type '" + span.event_type + "'");
    if (span.begin < 1 || span.begin > span.end || span.end > sentence.size()) {
      throw DataError("span (" + std::to_string(span.begin) + "," + std::to_string(span.end) +
                      ") outside sentence of length " + std::to_string(sentence.size()));
    }
    ids[span.begin - 1] = LabelSet::begin_label(*type);
    for (std::size_t i = span.begin; i < span.end; ++i) ids[i] = LabelSet::inside_label(*type);
  }
  return ids;
}

std::vector<Span> decode_bio(const std::vector<std::size_t>& label_ids, const LabelSet& labels) {
  std::vector<Span> spans;
  bool open = false;
  std::size_t open_type = 0;
  for (std::size_t i = 0; i < label_ids.size(); ++i) {
    const std::size_t id = label_ids[i];
    if (id >= labels.size()) throw ContractError("label id " + std::to_string(id) + " out of range");
    const std::size_t pos = i + 1;
    if (id == LabelSet::kOutside) {
      open = false;
      continue;
    }
    const std::size_t type = LabelSet::type_of(id);
    if (LabelSet::is_inside(id) && open && open_type == type) {
      spans.back().end = pos;
      continue;
    }
    spans.push_back(Span{pos, pos, labels.event_types()[type]});
    open = true;
    open_type = type;
  }
  return spans;
}

}  // namespace lhgat::corpus
