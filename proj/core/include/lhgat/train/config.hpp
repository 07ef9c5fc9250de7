#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lhgat::train {

// Structural variants of the model. Graph flags are applied per sentence by
// apply_ablation; the others change model construction or the objective.
struct AblationFlags {
  bool no_Wtau = false;            // one projection shared by characters and words
  bool no_c2c = false;             // drop character-character edges (self-loops stay)
  bool last_char_only = false;     // each word feeds only its last character
  bool no_c2w = false;             // words do not read their characters
  bool no_word = false;            // no word nodes at all
  bool no_margin_loss = false;     // objective is the CRF loss alone
  bool no_prototype_init = false;  // label embeddings start random

  // Throws ConfigError for contradictory combinations.
  void validate() const;
  bool operator==(const AblationFlags&) const = default;
};

struct TrainConfig {
  std::size_t d = 100;
  std::size_t hgat_layers = 2;
  double margin = 2.0;
  double alpha0 = 0.85;
  double alpha_decay = 0.95;
  double lr = 0.1;
  double momentum = 0.9;
  double l2 = 1e-5;
  // Global gradient-norm ceiling per step; 0 disables clipping.
  double clip_norm = 1.0;
  std::size_t max_len = 250;
  std::size_t epochs = 50;
  std::uint64_t seed = 1;
  AblationFlags ablation;

  // Margin-loss weight for a 0-based epoch: alpha0 * alpha_decay^epoch.
  double alpha(std::size_t epoch) const;

  // Key names match the field names, flags included ("no_c2c", ...).
  static const std::vector<std::string>& keys();
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

// Flat "key=value" lines; blank lines and '#' comments ignored.
TrainConfig read_config(std::istream& in, TrainConfig base = {});
TrainConfig load_config(const std::string& path, TrainConfig base = {});
void write_config(std::ostream& out, const TrainConfig& config);

}  // namespace lhgat::train
