#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lhgat::corpus {

// BIO label inventory: id 0 is "O", then B-X and I-X for each event type X in
// declaration order, so B-X = 1 + 2t and I-X = 2 + 2t for type index t.
class LabelSet {
 public:
  static constexpr std::size_t kOutside = 0;

  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> event_types);

  // k = 2 * event types + 1.
  std::size_t size() const { return 2 * types_.size() + 1; }
  std::size_t num_event_types() const { return types_.size(); }
  const std::vector<std::string>& event_types() const { return types_; }

  std::optional<std::size_t> type_index(const std::string& event_type) const;
  bool contains(const std::string& event_type) const { return type_index(event_type).has_value(); }

  static std::size_t begin_label(std::size_t type) { return 1 + 2 * type; }
  static std::size_t inside_label(std::size_t type) { return 2 + 2 * type; }
  static bool is_begin(std::size_t label) { return label % 2 == 1; }
  static bool is_inside(std::size_t label) { return label != 0 && label % 2 == 0; }
  // Event-type index of a B-/I- label.
  static std::size_t type_of(std::size_t label) { return (label - 1) / 2; }

  std::string name(std::size_t label) const;
  std::vector<std::string> names() const;

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<std::string> types_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace lhgat::corpus
