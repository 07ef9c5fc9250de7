#include "fixtures.hpp"

#include "lhgat/diff/tape.hpp"

namespace lhgat::testing {

corpus::Vocabulary random_vocabulary(std::size_t dim, const std::vector<std::string>& chars,
                                     const std::vector<std::string>& words, Rng& rng) {
  corpus::Vocabulary vocab{corpus::EmbeddingTable(dim, rng), corpus::EmbeddingTable(dim, rng)};
  auto row = [&] {
    std::vector<double> r(dim);
    for (double& v : r) v = rng.uniform(-0.5, 0.5);
    return r;
  };
  for (const auto& c : chars) vocab.chars.set(c, row());
  for (const auto& w : words) vocab.words.set(w, row());
  return vocab;
}

lexgraph::Lexicon lexicon_of(const corpus::Vocabulary& vocab) { return lexgraph::Lexicon::from_table(vocab.words); }

corpus::Sentence make_sentence(const std::vector<std::string>& chars, std::vector<corpus::Span> triggers) {
  corpus::Sentence s;
  s.chars = chars;
  s.triggers = std::move(triggers);
  return s;
}

GradientInstance gradient_instance(const train::AblationFlags& flags, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  const corpus::LabelSet labels({"Attack", "Die"});
  corpus::Vocabulary vocab = random_vocabulary(dim, {"甲", "乙", "丙"}, {"甲乙"}, rng);
  lexgraph::Lexicon lexicon = lexicon_of(vocab);
  corpus::Sentence sentence = make_sentence({"甲", "乙", "丙"}, {{1, 1, "Attack"}, {2, 3, "Die"}});
  train::TrainConfig config;
  config.d = dim;
  config.seed = seed;
  config.ablation = flags;
  train::Model model = train::make_model(config, labels, std::move(vocab), std::move(lexicon), {sentence});
  train::PreparedSentence prepared = train::prepare(model, sentence);
  return {std::move(model), std::move(sentence), std::move(prepared)};
}

GradCheckResult check_model_gradients(train::Model& model, const train::PreparedSentence& sentence,
                                      std::size_t epoch, double step) {
  const auto params = model.named_parameters();
  auto loss = [&] {
    diff::Tape tape(false);
    return train::total_loss(tape, model, sentence, epoch).item();
  };
  auto backward = [&] {
    for (const auto& [name, t] : params) t->zero_grad();
    diff::Tape tape;
    tape.backward(train::total_loss(tape, model, sentence, epoch));
  };
  return check_gradients(params, loss, backward, step);
}

corpus::Sentence four_char_sentence() { return make_sentence({"贩", "毒", "集", "团"}); }

lexgraph::HeteroGraph four_char_graph() {
  return lexgraph::build_graph(4, {lexgraph::MatchedWord{0, 1, 2}});
}

std::vector<std::pair<std::string, train::AblationFlags>> single_ablations() {
  std::vector<std::pair<std::string, train::AblationFlags>> out;
  train::AblationFlags f;
  f.no_Wtau = true;
  out.emplace_back("no_Wtau", f);
  f = {};
  f.no_c2c = true;
  out.emplace_back("no_c2c", f);
  f = {};
  f.last_char_only = true;
  out.emplace_back("last_char_only", f);
  f = {};
  f.no_c2w = true;
  out.emplace_back("no_c2w", f);
  f = {};
  f.no_word = true;
  out.emplace_back("no_word", f);
  f = {};
  f.no_margin_loss = true;
  out.emplace_back("no_margin_loss", f);
  f = {};
  f.no_prototype_init = true;
  out.emplace_back("no_prototype_init", f);
  return out;
}

}  // namespace lhgat::testing
