#include "lhgat/train/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "lhgat/errors.hpp"
#include "lhgat/random.hpp"

namespace lhgat::train {
namespace {

constexpr const char* kFormat = "lhgat-checkpoint";

using nlohmann::json;

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("checkpoint: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: bad field '") + key + "': " + e.what());
  }
}

}  // namespace

void write_checkpoint(std::ostream& out, Model& model) {
  json config = json::object();
  for (const std::string& key : TrainConfig::keys()) config[key] = model.config.get(key);
  json params = json::array();
  for (const auto& [name, t] : model.named_parameters()) {
    params.push_back({{"name", name}, {"shape", t->shape}, {"data", t->data}});
  }
  const json j = {{"format", kFormat},
                  {"version", kCheckpointVersion},
                  {"config", config},
                  {"event_types", model.labels.event_types()},
                  {"char_tokens", model.vocab.chars.tokens()},
                  {"word_tokens", model.vocab.words.tokens()},
                  {"lexicon", model.lexicon.words()},
                  {"label_seed_counts", model.label_embeddings.seed_counts},
                  {"parameters", params}};
  out << j.dump() << '\n';
  if (!out) throw DataError("failed to write checkpoint");
}

void save_checkpoint(const std::string& path, Model& model) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  write_checkpoint(out, model);
}

Model read_checkpoint(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", std::string()) != kFormat) {
    throw ParseError("not an lhgat checkpoint");
  }
  const int version = field<int>(j, "version");
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version));
  }

  TrainConfig config;
  for (const auto& [key, value] : field<std::map<std::string, std::string>>(j, "config")) {
    try {
      config.set(key, value);
    } catch (const ConfigError& e) {
      throw ParseError(std::string("checkpoint config: ") + e.what());
    }
  }
  const corpus::LabelSet labels(field<std::vector<std::string>>(j, "event_types"));
  const auto char_tokens = field<std::vector<std::string>>(j, "char_tokens");
  const auto word_tokens = field<std::vector<std::string>>(j, "word_tokens");

  std::map<std::string, std::pair<diff::Shape, std::vector<double>>> stored;
  for (const json& p : field<json>(j, "parameters")) {
    stored[field<std::string>(p, "name")] = {field<diff::Shape>(p, "shape"), field<std::vector<double>>(p, "data")};
  }
  auto take = [&](const std::string& name) -> const std::pair<diff::Shape, std::vector<double>>& {
    const auto it = stored.find(name);
    if (it == stored.end()) throw ParseError("checkpoint: missing parameter " + name);
    if (diff::num_elements(it->second.first) != it->second.second.size()) {
      throw ParseError("checkpoint: parameter " + name + " data does not match its shape");
    }
    return it->second;
  };

  const auto& chars = take("char_embeddings");
  const auto& words = take("word_embeddings");
  corpus::Vocabulary vocab;
  vocab.chars = corpus::EmbeddingTable::from_rows(char_tokens, diff::Tensor(chars.first, chars.second));
  vocab.words = corpus::EmbeddingTable::from_rows(word_tokens, diff::Tensor(words.first, words.second));

  lexgraph::Lexicon lexicon;
  for (const std::string& w : field<std::vector<std::string>>(j, "lexicon")) {
    const auto id = vocab.words.find(w);
    if (!id) throw ParseError("checkpoint: lexicon word without an embedding row");
    lexicon.insert(w, *id);
  }

  // Shapes come from a fresh skeleton; values are then overwritten by name.
  TrainConfig skeleton_config = config;
  skeleton_config.ablation.no_prototype_init = true;
  Model model = make_model(skeleton_config, labels, std::move(vocab), std::move(lexicon), {});
  model.config = config;
  for (const auto& [name, t] : model.named_parameters()) {
    const auto& [shape, data] = take(name);
    if (shape != t->shape) {
      throw ParseError("checkpoint: parameter " + name + " has shape " + diff::to_string(shape) + ", expected " +
                       diff::to_string(t->shape));
    }
    t->data = data;
  }
  if (stored.size() != model.named_parameters().size()) {
    throw ParseError("checkpoint holds parameters this model does not define");
  }
  model.label_embeddings.seed_counts = field<std::vector<std::size_t>>(j, "label_seed_counts");
  return model;
}

Model load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint " + path);
  return read_checkpoint(in);
}

}  // namespace lhgat::train
