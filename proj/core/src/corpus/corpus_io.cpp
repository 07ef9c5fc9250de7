#include "lhgat/corpus/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "lhgat/corpus/utf8.hpp"
#include "lhgat/errors.hpp"

namespace lhgat::corpus {
namespace {

using nlohmann::json;

std::string at_line(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::size_t position(const json& trigger, const char* key, std::size_t line) {
  if (!trigger.contains(key) || !trigger[key].is_number_integer()) {
    throw ParseError(std::string("trigger field '") + key + "' missing or not an integer", line);
  }
  const auto v = trigger[key].get<long long>();
  if (v < 1) throw DataError(at_line(line, std::string("trigger ") + key + " must be >= 1"));
  return static_cast<std::size_t>(v);
}

Sentence parse_record(const json& rec, const LabelSet& labels, std::size_t line) {
  if (!rec.is_object()) throw ParseError("record is not a JSON object", line);
  Sentence s;
  if (!rec.contains("text")) throw ParseError("missing field 'text'", line);
  const json& text = rec["text"];
  if (text.is_string()) {
    s.chars = split_utf8(text.get<std::string>());
  } else if (text.is_array()) {
    for (const json& c : text) {
      if (!c.is_string() || c.get<std::string>().empty()) {
        throw ParseError("'text' entries must be non-empty strings", line);
      }
      s.chars.push_back(c.get<std::string>());
    }
  } else {
    throw ParseError("'text' must be a string or an array of strings", line);
  }
  if (s.chars.empty()) throw DataError(at_line(line, "empty sentence"));

  if (rec.contains("triggers")) {
    const json& triggers = rec["triggers"];
    if (!triggers.is_array()) throw ParseError("'triggers' must be an array", line);
    for (const json& t : triggers) {
      if (!t.is_object()) throw ParseError("trigger is not an object", line);
      Span span;
      span.begin = position(t, "start", line);
      span.end = position(t, "end", line);
      if (!t.contains("type") || !t["type"].is_string()) {
        throw ParseError("trigger field 'type' missing or not a string", line);
      }
      span.event_type = t["type"].get<std::string>();
      if (span.begin > span.end) throw DataError(at_line(line, "trigger start after end"));
      if (span.end > s.chars.size()) {
        throw DataError(at_line(line, "trigger end " + std::to_string(span.end) +
                                          " exceeds sentence length " + std::to_string(s.chars.size())));
      }
      if (!labels.contains(span.event_type)) {
        throw DataError(at_line(line, "unknown event type '" + span.event_type + "'"));
      }
      s.triggers.push_back(std::move(span));
    }
  }
  std::sort(s.triggers.begin(), s.triggers.end());
  for (std::size_t i = 1; i < s.triggers.size(); ++i) {
    if (s.triggers[i].begin <= s.triggers[i - 1].end) {
      throw DataError(at_line(line, "overlapping trigger spans"));
    }
  }
  return s;
}

}  // namespace

std::vector<Sentence> read_corpus(std::istream& in, const LabelSet& labels, std::size_t max_len,
                                  Warnings* warnings) {
  if (max_len == 0) throw ConfigError("max_len must be positive");
  std::vector<Sentence> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dropped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    Sentence s = parse_record(rec, labels, line_no);
    if (s.size() > max_len) {
      s.chars.resize(max_len);
      const auto keep = std::remove_if(s.triggers.begin(), s.triggers.end(),
                                       [max_len](const Span& sp) { return sp.end > max_len; });
      dropped += static_cast<std::size_t>(std::distance(keep, s.triggers.end()));
      s.triggers.erase(keep, s.triggers.end());
    }
    out.push_back(std::move(s));
  }
  if (dropped > 0 && warnings) {
    warnings->push_back(std::to_string(dropped) + " trigger(s) dropped by truncation to " +
                        std::to_string(max_len) + " characters");
  }
  return out;
}

std::vector<Sentence> load_corpus(const std::string& path, const LabelSet& labels, std::size_t max_len,
                                  Warnings* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file '" + path + "'");
  return read_corpus(in, labels, max_len, warnings);
}

std::string sentence_to_json(const Sentence& sentence) {
  json triggers = json::array();
  for (const Span& s : sentence.triggers) {
    triggers.push_back({{"start", s.begin}, {"end", s.end}, {"type", s.event_type}});
  }
  json rec = {{"text", sentence.chars}, {"triggers", std::move(triggers)}};
  return rec.dump();
}

void write_corpus(std::ostream& out, const std::vector<Sentence>& sentences) {
  for (const Sentence& s : sentences) out << sentence_to_json(s) << '\n';
}

LabelSet read_label_set(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed label set: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("event_types") || !doc["event_types"].is_array()) {
    throw ParseError("label set must be an object with an 'event_types' array");
  }
  std::vector<std::string> types;
  for (const json& t : doc["event_types"]) {
    if (!t.is_string()) throw ParseError("event type names must be strings");
    types.push_back(t.get<std::string>());
  }
  return LabelSet(std::move(types));
}

LabelSet load_label_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open label set '" + path + "'");
  return read_label_set(in);
}

void write_label_set(std::ostream& out, const LabelSet& labels) {
  out << json{{"event_types", labels.event_types()}}.dump(2) << '\n';
}

}  // namespace lhgat::corpus
