#include "lhgat/corpus/label_set.hpp"

#include "lhgat/errors.hpp"

namespace lhgat::corpus {

LabelSet::LabelSet(std::vector<std::string> event_types) : types_(std::move(event_types)) {
  for (std::size_t t = 0; t < types_.size(); ++t) {
    if (types_[t].empty()) throw DataError("empty event type name");
    if (!index_.emplace(types_[t], t).second) {
      throw DataError("duplicate event type '" + types_[t] + "'");
    }
  }
}

std::optional<std::size_t> LabelSet::type_index(const std::string& event_type) const {
  if (auto it = index_.find(event_type); it != index_.end()) return it->second;
  return std::nullopt;
}

std::string LabelSet::name(std::size_t label) const {
  if (label == kOutside) return "O";
  if (label >= size()) throw ContractError("label id " + std::to_string(label) + " out of range");
  return (is_begin(label) ? "B-" : "I-") + types_[type_of(label)];
}

std::vector<std::string> LabelSet::names() const {
  std::vector<std::string> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(name(i));
  return out;
}

}  // namespace lhgat::corpus
