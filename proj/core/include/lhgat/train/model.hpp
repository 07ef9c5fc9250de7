#pragma once

#include <cstddef>
#include <vector>

#include "lhgat/corpus/embeddings.hpp"
#include "lhgat/corpus/label_set.hpp"
#include "lhgat/corpus/sentence.hpp"
#include "lhgat/diff/ops.hpp"
#include "lhgat/encoder/encoder.hpp"
#include "lhgat/labeler/crf.hpp"
#include "lhgat/labeler/label_embeddings.hpp"
#include "lhgat/lexgraph/hetero_graph.hpp"
#include "lhgat/train/config.hpp"

namespace lhgat::train {

using encoder::NamedTensor;

struct Model {
  TrainConfig config;
  corpus::LabelSet labels;
  // Token inventories with their pre-trained rows; the trainable copies live in `encoder`.
  corpus::Vocabulary vocab;
  lexgraph::Lexicon lexicon;
  encoder::EncoderParams encoder;
  labeler::LabelEmbeddings label_embeddings;
  labeler::CrfParams crf;

  // Every trainable tensor, in a fixed order.
  std::vector<NamedTensor> named_parameters();
  std::size_t num_parameters();
};

// Seeded initialisation. Label embeddings are trigger prototypes over
// `train_corpus` unless config.ablation.no_prototype_init is set.
Model make_model(const TrainConfig& config, const corpus::LabelSet& labels, corpus::Vocabulary vocab,
                 lexgraph::Lexicon lexicon, const std::vector<corpus::Sentence>& train_corpus);

lexgraph::HeteroGraph apply_ablation(const lexgraph::HeteroGraph& graph, const AblationFlags& flags);

struct PreparedSentence {
  std::vector<std::size_t> char_ids;
  lexgraph::HeteroGraph graph;
  std::vector<std::size_t> gold;
};

// Lexicon matching, graph construction under the configured ablation, BIO labels.
PreparedSentence prepare(const Model& model, const corpus::Sentence& sentence);

struct LossParts {
  double crf = 0.0;
  double margin = 0.0;
  double alpha = 0.0;
  double l2 = 0.0;
  double total = 0.0;
};

// L = L_crf + alpha(epoch) * L_margin + 0.5 * l2 * sum ||theta||^2.
diff::Var total_loss(diff::Tape& tape, Model& model, const PreparedSentence& sentence, std::size_t epoch,
                     LossParts* parts = nullptr);

// Matching scores [n, k] of the final layer, without gradient tracking.
diff::Tensor score_matrix(Model& model, const PreparedSentence& sentence,
                          encoder::EncoderTrace* trace = nullptr);
std::vector<corpus::Span> predict(Model& model, const corpus::Sentence& sentence);

}  // namespace lhgat::train
