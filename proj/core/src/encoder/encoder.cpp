#include "lhgat/encoder/encoder.hpp"

#include <cmath>

#include "lhgat/errors.hpp"

namespace lhgat::encoder {
namespace {

using lexgraph::NodeRef;
using lexgraph::NodeType;

constexpr double kLeakySlope = 0.2;

Tensor uniform_matrix(std::size_t rows, std::size_t cols, std::size_t fan_in, Rng& rng) {
  const double bound = std::sqrt(3.0 / static_cast<double>(fan_in));
  Tensor t = Tensor::zeros({rows, cols});
  for (double& v : t.data) v = rng.uniform(-bound, bound);
  t.requires_grad = true;
  return t;
}

Tensor zero_bias(std::size_t cols) {
  Tensor t = Tensor::zeros({1, cols});
  t.requires_grad = true;
  return t;
}

Tensor trainable_copy(const Tensor& source) {
  Tensor t(source.shape, source.data);
  t.requires_grad = true;
  return t;
}

LstmParams make_lstm(std::size_t in, std::size_t hidden, Rng& rng) {
  return LstmParams{uniform_matrix(in, 4 * hidden, in, rng), uniform_matrix(hidden, 4 * hidden, hidden, rng),
                    zero_bias(4 * hidden)};
}

// Runs one LSTM direction over the rows of `inputs`, visiting them in `order`;
// returns hidden states indexed by row.
std::vector<Var> run_lstm(diff::Tape& tape, LstmParams& p, Var inputs, const std::vector<std::size_t>& order) {
  const std::size_t hidden = p.recurrent_weight.rows();
  const Var wx = tape.param(p.input_weight);
  const Var wh = tape.param(p.recurrent_weight);
  const Var b = tape.param(p.bias);
  const Var projected = diff::add(diff::matmul(inputs, wx), b);

  Var h = tape.constant(Tensor::zeros({1, hidden}));
  Var c = tape.constant(Tensor::zeros({1, hidden}));
  std::vector<Var> out(order.size());
  for (std::size_t t : order) {
    const Var gates = diff::add(diff::slice(projected, 0, t, 1), diff::matmul(h, wh));
    const Var in_gate = diff::sigmoid(diff::slice(gates, 1, 0, hidden));
    const Var forget_gate = diff::sigmoid(diff::slice(gates, 1, hidden, hidden));
    const Var cell_input = diff::tanh(diff::slice(gates, 1, 2 * hidden, hidden));
    const Var out_gate = diff::sigmoid(diff::slice(gates, 1, 3 * hidden, hidden));
    c = diff::add(diff::mul(forget_gate, c), diff::mul(in_gate, cell_input));
    h = diff::mul(out_gate, diff::tanh(c));
    out[t] = h;
  }
  return out;
}

Var attention_halves(diff::Tape& tape, Tensor& vector, std::size_t dim, bool center) {
  return diff::slice(tape.param(vector), 0, center ? 0 : dim, dim);
}

}  // namespace

const Tensor& EncoderParams::word_projection(std::size_t layer) const {
  const HgatLayerParams& l = layers.at(layer);
  return l.word_projection ? *l.word_projection : l.char_projection;
}

Tensor& EncoderParams::word_projection(std::size_t layer) {
  HgatLayerParams& l = layers.at(layer);
  return l.word_projection ? *l.word_projection : l.char_projection;
}

std::vector<NamedTensor> EncoderParams::named_parameters() {
  std::vector<NamedTensor> out{{"char_embeddings", &char_embeddings}, {"word_embeddings", &word_embeddings}};
  for (auto [name, lstm] : {std::pair<const char*, LstmParams*>{"forward", &forward}, {"backward", &backward}}) {
    const std::string prefix = std::string("lstm.") + name + ".";
    out.emplace_back(prefix + "input_weight", &lstm->input_weight);
    out.emplace_back(prefix + "recurrent_weight", &lstm->recurrent_weight);
    out.emplace_back(prefix + "bias", &lstm->bias);
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string prefix = "hgat." + std::to_string(l) + ".";
    HgatLayerParams& p = layers[l];
    out.emplace_back(prefix + "char_projection", &p.char_projection);
    if (p.word_projection) out.emplace_back(prefix + "word_projection", &*p.word_projection);
    out.emplace_back(prefix + "c2c_attention", &p.c2c_attention);
    out.emplace_back(prefix + "w2c_attention", &p.w2c_attention);
    out.emplace_back(prefix + "c2w_attention", &p.c2w_attention);
    out.emplace_back(prefix + "type_query", &p.type_query);
    out.emplace_back(prefix + "type_weight", &p.type_weight);
    out.emplace_back(prefix + "type_bias", &p.type_bias);
  }
  return out;
}

EncoderParams make_encoder_params(std::size_t dim, std::size_t layers, const Tensor& char_table,
                                  const Tensor& word_table, bool shared_projection, Rng& rng) {
  if (dim == 0 || dim % 2 != 0) throw ConfigError("hidden dimension must be positive and even");
  if (char_table.rank() != 2 || char_table.cols() != dim) {
    throw DimensionError("character embeddings " + diff::to_string(char_table.shape) + " do not have width " +
                         std::to_string(dim));
  }
  if (word_table.rank() != 2 || word_table.cols() != dim) {
    throw DimensionError("word embeddings " + diff::to_string(word_table.shape) + " do not have width " +
                         std::to_string(dim));
  }
  EncoderParams p;
  p.dim = dim;
  p.char_embeddings = trainable_copy(char_table);
  p.word_embeddings = trainable_copy(word_table);
  const std::size_t half = dim / 2;
  p.forward = make_lstm(dim, half, rng);
  p.backward = make_lstm(dim, half, rng);
  for (std::size_t l = 0; l < layers; ++l) {
    HgatLayerParams layer;
    layer.char_projection = uniform_matrix(dim, dim, dim, rng);
    if (!shared_projection) layer.word_projection = uniform_matrix(dim, dim, dim, rng);
    layer.c2c_attention = uniform_matrix(2 * dim, 1, 2 * dim, rng);
    layer.w2c_attention = uniform_matrix(2 * dim, 1, 2 * dim, rng);
    layer.c2w_attention = uniform_matrix(2 * dim, 1, 2 * dim, rng);
    layer.type_query = uniform_matrix(dim, 1, dim, rng);
    layer.type_weight = uniform_matrix(dim, dim, dim, rng);
    layer.type_bias = zero_bias(dim);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

NodeStates input_layer(diff::Tape& tape, EncoderParams& params, const std::vector<std::size_t>& char_ids,
                       const std::vector<std::size_t>& word_ids) {
  if (char_ids.empty()) throw ContractError("input_layer: empty sentence");
  const Var embedded = diff::gather_rows(tape.param(params.char_embeddings), char_ids);
  const std::size_t n = char_ids.size();
  std::vector<std::size_t> forward_order(n);
  std::vector<std::size_t> backward_order(n);
  for (std::size_t i = 0; i < n; ++i) {
    forward_order[i] = i;
    backward_order[i] = n - 1 - i;
  }
  const std::vector<Var> fwd = run_lstm(tape, params.forward, embedded, forward_order);
  const std::vector<Var> bwd = run_lstm(tape, params.backward, embedded, backward_order);
  NodeStates states;
  states.chars = diff::concat({diff::concat(fwd, 0), diff::concat(bwd, 0)}, 1);
  if (!word_ids.empty()) states.words = diff::gather_rows(tape.param(params.word_embeddings), word_ids);
  return states;
}

ProjectedLayer project_layer(diff::Tape& tape, const NodeStates& states, EncoderParams& params,
                             std::size_t layer) {
  HgatLayerParams& p = params.layers.at(layer);
  const std::size_t d = params.dim;
  ProjectedLayer out;
  out.chars = diff::matmul(states.chars, tape.param(p.char_projection));
  out.c2c_center = diff::matmul(out.chars, attention_halves(tape, p.c2c_attention, d, true));
  out.c2c_neighbor = diff::matmul(out.chars, attention_halves(tape, p.c2c_attention, d, false));
  if (states.words) {
    out.words = diff::matmul(*states.words, tape.param(params.word_projection(layer)));
    out.w2c_center = diff::matmul(out.chars, attention_halves(tape, p.w2c_attention, d, true));
    out.w2c_neighbor = diff::matmul(*out.words, attention_halves(tape, p.w2c_attention, d, false));
    out.c2w_center = diff::matmul(*out.words, attention_halves(tape, p.c2w_attention, d, true));
    out.c2w_neighbor = diff::matmul(out.chars, attention_halves(tape, p.c2w_attention, d, false));
  }
  return out;
}

Var node_attention(const ProjectedLayer& projected, const lexgraph::Neighborhoods& neighborhoods,
                   NodeRef center, NodeType type, NeighborWeights* trace) {
  const std::vector<std::size_t>* neighbors = nullptr;
  Var center_scores;
  Var neighbor_scores;
  Var neighbor_states;
  if (center.type == NodeType::kChar && type == NodeType::kChar) {
    neighbors = &neighborhoods.char_chars.at(center.index);
    center_scores = projected.c2c_center;
    neighbor_scores = projected.c2c_neighbor;
    neighbor_states = projected.chars;
  } else if (center.type == NodeType::kChar) {
    neighbors = &neighborhoods.char_words.at(center.index);
    if (!neighbors->empty()) {
      center_scores = *projected.w2c_center;
      neighbor_scores = *projected.w2c_neighbor;
      neighbor_states = *projected.words;
    }
  } else if (type == NodeType::kChar) {
    neighbors = &neighborhoods.word_chars.at(center.index);
    center_scores = *projected.c2w_center;
    neighbor_scores = *projected.c2w_neighbor;
    neighbor_states = projected.chars;
  }
  if (neighbors == nullptr || neighbors->empty()) {
    throw ContractError("node_attention: empty neighbourhood");
  }
  const Var logits = diff::leaky_relu(
      diff::add(diff::gather_rows(neighbor_scores, *neighbors), diff::gather_rows(center_scores, {center.index})),
      kLeakySlope);
  const Var weights = diff::softmax(logits, 0);
  const Var aggregated = diff::matmul(diff::transpose(weights), diff::gather_rows(neighbor_states, *neighbors));
  if (trace) {
    trace->neighbors = *neighbors;
    trace->weights = weights.value().data;
  }
  return diff::elu(aggregated);
}

Var type_attention(diff::Tape& tape, const std::vector<Var>& by_type, HgatLayerParams& params,
                   std::vector<double>* weights) {
  if (by_type.empty()) throw ContractError("type_attention: no neighbour types");
  if (by_type.size() == 1) {
    if (weights) *weights = {1.0};
    return by_type.front();
  }
  const Var w = tape.param(params.type_weight);
  const Var b = tape.param(params.type_bias);
  const Var q = tape.param(params.type_query);
  const double inv_types = 1.0 / static_cast<double>(by_type.size());
  std::vector<Var> scores;
  for (const Var& z : by_type) {
    scores.push_back(diff::scale(diff::matmul(diff::tanh(diff::add(diff::matmul(z, w), b)), q), inv_types));
  }
  const Var beta = diff::softmax(diff::concat(scores, 0), 0);
  if (weights) *weights = beta.value().data;
  return diff::matmul(diff::transpose(beta), diff::concat(by_type, 0));
}

NodeStates hgat_layer(diff::Tape& tape, const NodeStates& states, const lexgraph::HeteroGraph& graph,
                      const lexgraph::Neighborhoods& neighborhoods, EncoderParams& params,
                      std::size_t layer, LayerTrace* trace) {
  const ProjectedLayer projected = project_layer(tape, states, params, layer);
  HgatLayerParams& p = params.layers.at(layer);
  const std::size_t n = graph.num_chars;
  const std::size_t m = graph.num_words();
  if (trace) {
    trace->chars.assign(n, {});
    trace->words.assign(m, std::nullopt);
  }

  std::vector<Var> char_rows;
  char_rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CharTrace* ct = trace ? &trace->chars[i] : nullptr;
    std::vector<Var> by_type;
    if (!neighborhoods.char_chars[i].empty()) {
      NeighborWeights nw;
      by_type.push_back(node_attention(projected, neighborhoods, {NodeType::kChar, i}, NodeType::kChar, &nw));
      if (ct) ct->char_attention = std::move(nw);
    }
    if (!neighborhoods.char_words[i].empty()) {
      NeighborWeights nw;
      by_type.push_back(node_attention(projected, neighborhoods, {NodeType::kChar, i}, NodeType::kWord, &nw));
      if (ct) ct->word_attention = std::move(nw);
    }
    char_rows.push_back(type_attention(tape, by_type, p, ct ? &ct->type_weights : nullptr));
  }

  NodeStates next;
  next.chars = diff::concat(char_rows, 0);
  if (m > 0) {
    std::vector<Var> word_rows;
    word_rows.reserve(m);
    for (std::size_t w = 0; w < m; ++w) {
      if (neighborhoods.word_chars[w].empty()) {
        // No incoming c2w edges: the word keeps its current state.
        word_rows.push_back(diff::gather_rows(*states.words, {w}));
        continue;
      }
      NeighborWeights nw;
      word_rows.push_back(node_attention(projected, neighborhoods, {NodeType::kWord, w}, NodeType::kChar, &nw));
      if (trace) trace->words[w] = std::move(nw);
    }
    next.words = diff::concat(word_rows, 0);
  }
  return next;
}

EncoderOutput encode(diff::Tape& tape, EncoderParams& params, const std::vector<std::size_t>& char_ids,
                     const lexgraph::HeteroGraph& graph, EncoderTrace* trace) {
  if (char_ids.size() != graph.num_chars) {
    throw ContractError("encode: " + std::to_string(char_ids.size()) + " character ids for a graph of " +
                        std::to_string(graph.num_chars) + " characters");
  }
  std::vector<std::size_t> word_ids;
  word_ids.reserve(graph.num_words());
  for (const auto& w : graph.words) word_ids.push_back(w.word_id);
  const lexgraph::Neighborhoods neighborhoods = lexgraph::index_neighborhoods(graph);

  EncoderOutput out;
  out.layers.push_back(input_layer(tape, params, char_ids, word_ids));
  if (trace) trace->layers.assign(params.layers.size(), {});
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    out.layers.push_back(hgat_layer(tape, out.layers.back(), graph, neighborhoods, params, l,
                                    trace ? &trace->layers[l] : nullptr));
  }
  return out;
}

}  // namespace lhgat::encoder
