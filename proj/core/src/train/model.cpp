#include "lhgat/train/model.hpp"

#include "lhgat/corpus/bio.hpp"
#include "lhgat/labeler/matcher.hpp"
#include "lhgat/random.hpp"

namespace lhgat::train {

std::vector<NamedTensor> Model::named_parameters() {
  std::vector<NamedTensor> out = encoder.named_parameters();
  out.emplace_back("label_embeddings", &label_embeddings.table);
  for (auto& p : crf.named_parameters()) out.push_back(p);
  return out;
}

std::size_t Model::num_parameters() {
  std::size_t n = 0;
  for (const auto& [name, t] : named_parameters()) n += t->size();
  return n;
}

Model make_model(const TrainConfig& config, const corpus::LabelSet& labels, corpus::Vocabulary vocab,
                 lexgraph::Lexicon lexicon, const std::vector<corpus::Sentence>& train_corpus) {
  config.validate();
  Rng rng(config.seed);
  Model model{.config = config,
              .labels = labels,
              .vocab = std::move(vocab),
              .lexicon = std::move(lexicon),
              .encoder = {},
              .label_embeddings = {},
              .crf = labeler::CrfParams::make(labels.size())};
  model.encoder = encoder::make_encoder_params(config.d, config.hgat_layers, model.vocab.chars.vectors(),
                                               model.vocab.words.vectors(), config.ablation.no_Wtau, rng);
  model.label_embeddings =
      config.ablation.no_prototype_init
          ? labeler::random_label_embeddings(labels.size(), config.d, rng)
          : labeler::init_label_embeddings(train_corpus, model.vocab.chars, labels, rng);
  return model;
}

lexgraph::HeteroGraph apply_ablation(const lexgraph::HeteroGraph& graph, const AblationFlags& flags) {
  flags.validate();
  lexgraph::HeteroGraph out = graph;
  if (flags.no_c2c) out.c2c.clear();
  if (flags.no_word) {
    out.words.clear();
    out.w2c.clear();
    out.c2w.clear();
    return out;
  }
  if (flags.last_char_only) {
    out.w2c.clear();
    for (std::size_t w = 0; w < out.words.size(); ++w) out.w2c.emplace_back(w, out.words[w].end - 1);
  }
  if (flags.no_c2w) out.c2w.clear();
  return out;
}

PreparedSentence prepare(const Model& model, const corpus::Sentence& sentence) {
  PreparedSentence out;
  out.char_ids.reserve(sentence.size());
  for (const std::string& c : sentence.chars) out.char_ids.push_back(model.vocab.chars.id(c));
  out.graph = apply_ablation(lexgraph::build_graph(sentence, lexgraph::match_lexicon(sentence, model.lexicon)),
                             model.config.ablation);
  out.gold = corpus::encode_bio(sentence, model.labels);
  return out;
}

diff::Var total_loss(diff::Tape& tape, Model& model, const PreparedSentence& sentence, std::size_t epoch,
                     LossParts* parts) {
  const encoder::EncoderOutput enc = encode(tape, model.encoder, sentence.char_ids, sentence.graph);
  const diff::Var scores = labeler::matching_scores(enc.final_chars(), tape.param(model.label_embeddings.table));
  diff::Var loss = labeler::crf_negative_log_likelihood(scores, sentence.gold, tape.param(model.crf.transform),
                                                        tape.param(model.crf.transitions),
                                                        tape.param(model.crf.start));
  LossParts local;
  local.crf = loss.item();
  if (!model.config.ablation.no_margin_loss) {
    local.alpha = model.config.alpha(epoch);
    const diff::Var margin = labeler::margin_loss(scores, sentence.gold, model.config.margin);
    local.margin = margin.item();
    loss = diff::add(loss, diff::scale(margin, local.alpha));
  }
  if (model.config.l2 > 0.0) {
    std::vector<diff::Var> squares;
    for (auto& [name, t] : model.named_parameters()) {
      const diff::Var p = tape.param(*t);
      squares.push_back(diff::reshape(diff::sum(diff::mul(p, p)), {1}));
    }
    const diff::Var penalty = diff::scale(diff::sum(diff::concat(squares, 0)), 0.5 * model.config.l2);
    local.l2 = penalty.item();
    loss = diff::add(loss, penalty);
  }
  local.total = loss.item();
  if (parts) *parts = local;
  return loss;
}

diff::Tensor score_matrix(Model& model, const PreparedSentence& sentence, encoder::EncoderTrace* trace) {
  diff::Tape tape(false);
  const encoder::EncoderOutput enc = encode(tape, model.encoder, sentence.char_ids, sentence.graph, trace);
  return labeler::matching_scores(enc.final_chars(), tape.param(model.label_embeddings.table)).value();
}

std::vector<corpus::Span> predict(Model& model, const corpus::Sentence& sentence) {
  if (sentence.size() == 0) return {};
  const diff::Tensor scores = score_matrix(model, prepare(model, sentence));
  return corpus::decode_bio(labeler::viterbi_decode(scores, model.crf), model.labels);
}

}  // namespace lhgat::train
