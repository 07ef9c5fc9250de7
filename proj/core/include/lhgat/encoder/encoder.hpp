#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lhgat/diff/ops.hpp"
#include "lhgat/lexgraph/hetero_graph.hpp"
#include "lhgat/random.hpp"

namespace lhgat::encoder {

using diff::Tensor;
using diff::Var;
using NamedTensor = std::pair<std::string, Tensor*>;

// Standard LSTM cell, gate order (input, forget, cell, output) along columns.
struct LstmParams {
  Tensor input_weight;      // [in, 4h]
  Tensor recurrent_weight;  // [h, 4h]
  Tensor bias;              // [1, 4h]
};

struct HgatLayerParams {
  Tensor char_projection;  // [d, d]
  // Empty when node types share one projection.
  std::optional<Tensor> word_projection;
  // Attention vectors [2d, 1] per edge kind: top half scores the centre node,
  // bottom half the neighbour.
  Tensor c2c_attention;
  Tensor w2c_attention;
  Tensor c2w_attention;
  Tensor type_query;   // [d, 1]
  Tensor type_weight;  // [d, d]
  Tensor type_bias;    // [1, d]
};

struct EncoderParams {
  std::size_t dim = 0;
  Tensor char_embeddings;  // [chars, d]
  Tensor word_embeddings;  // [words, d]
  LstmParams forward;
  LstmParams backward;
  std::vector<HgatLayerParams> layers;

  const Tensor& word_projection(std::size_t layer) const;
  Tensor& word_projection(std::size_t layer);

  std::vector<NamedTensor> named_parameters();
};

// Uniform ±sqrt(3/fan_in) weights, zero biases. Embedding tables are copied
// from the given matrices; `dim` must be even so each LSTM direction has d/2 units.
EncoderParams make_encoder_params(std::size_t dim, std::size_t layers, const Tensor& char_table,
                                  const Tensor& word_table, bool shared_projection, Rng& rng);

// Node states of one layer: characters [n, d], words [m, d] (absent when m = 0).
struct NodeStates {
  Var chars;
  std::optional<Var> words;
};

// Attention weights of one node over one neighbour type.
struct NeighborWeights {
  std::vector<std::size_t> neighbors;
  std::vector<double> weights;
};

struct CharTrace {
  std::optional<NeighborWeights> char_attention;
  std::optional<NeighborWeights> word_attention;
  // Type-level weights, in order (char, word) over the types present.
  std::vector<double> type_weights;
};

struct LayerTrace {
  std::vector<CharTrace> chars;
  std::vector<std::optional<NeighborWeights>> words;
};

struct EncoderTrace {
  std::vector<LayerTrace> layers;
};

// Embedding lookup, BiLSTM over characters; words keep their raw embedding rows.
NodeStates input_layer(diff::Tape& tape, EncoderParams& params, const std::vector<std::size_t>& char_ids,
                       const std::vector<std::size_t>& word_ids);

// Per-layer projections and attention score columns shared by every node.
struct ProjectedLayer {
  Var chars;                 // W_char H_c
  std::optional<Var> words;  // W_word H_w
  Var c2c_center, c2c_neighbor;
  std::optional<Var> w2c_center, w2c_neighbor;
  std::optional<Var> c2w_center, c2w_neighbor;
};

ProjectedLayer project_layer(diff::Tape& tape, const NodeStates& states, EncoderParams& params,
                             std::size_t layer);

// Softmax attention of `center` over its `type` neighbours, then ELU:
// z = ELU(sum_j a_j W h_j). Throws ContractError for an empty neighbourhood.
Var node_attention(const ProjectedLayer& projected, const lexgraph::Neighborhoods& neighborhoods,
                   lexgraph::NodeRef center, lexgraph::NodeType type, NeighborWeights* trace = nullptr);

// Fuses per-type embeddings [1, d] with semantic-level attention. One present
// type is returned unchanged.
Var type_attention(diff::Tape& tape, const std::vector<Var>& by_type, HgatLayerParams& params,
                   std::vector<double>* weights = nullptr);

NodeStates hgat_layer(diff::Tape& tape, const NodeStates& states, const lexgraph::HeteroGraph& graph,
                      const lexgraph::Neighborhoods& neighborhoods, EncoderParams& params,
                      std::size_t layer, LayerTrace* trace = nullptr);

struct EncoderOutput {
  // layers[0] is the input layer; back() feeds the matcher.
  std::vector<NodeStates> layers;

  Var final_chars() const { return layers.back().chars; }
};

EncoderOutput encode(diff::Tape& tape, EncoderParams& params, const std::vector<std::size_t>& char_ids,
                     const lexgraph::HeteroGraph& graph, EncoderTrace* trace = nullptr);

}  // namespace lhgat::encoder
