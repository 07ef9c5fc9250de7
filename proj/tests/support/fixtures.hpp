#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lhgat/corpus/sentence.hpp"
#include "lhgat/train/model.hpp"
#include "oracles.hpp"

namespace lhgat::testing {

// Vocabulary with a random row (uniform ±0.5) for every token.
corpus::Vocabulary random_vocabulary(std::size_t dim, const std::vector<std::string>& chars,
                                     const std::vector<std::string>& words, Rng& rng);

// Lexicon over the multi-character tokens of `vocab.words`.
lexgraph::Lexicon lexicon_of(const corpus::Vocabulary& vocab);

corpus::Sentence make_sentence(const std::vector<std::string>& chars, std::vector<corpus::Span> triggers = {});

// Three characters, two event types, one lexicon word over (1,2), gold
// triggers (1,1,Attack) and (2,3,Die).
struct GradientInstance {
  train::Model model;
  corpus::Sentence sentence;
  train::PreparedSentence prepared;
};
GradientInstance gradient_instance(const train::AblationFlags& flags = {}, std::size_t dim = 6,
                                   std::uint64_t seed = 11);

// Finite-difference check of the full objective at `epoch` over every parameter.
GradCheckResult check_model_gradients(train::Model& model, const train::PreparedSentence& sentence,
                                      std::size_t epoch = 0, double step = 1e-4);

// Four characters and one lexicon word over (1,2).
corpus::Sentence four_char_sentence();
lexgraph::HeteroGraph four_char_graph();

// Every ablation flag, one at a time, with a display name.
std::vector<std::pair<std::string, train::AblationFlags>> single_ablations();

}  // namespace lhgat::testing
