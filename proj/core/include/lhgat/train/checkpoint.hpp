#pragma once

#include <iosfwd>
#include <string>

#include "lhgat/train/model.hpp"

namespace lhgat::train {

inline constexpr int kCheckpointVersion = 1;

// Self-describing JSON: format tag, version, config, label set, vocabularies,
// lexicon, and every parameter as {name, shape, data}. Doubles round-trip exactly.
void write_checkpoint(std::ostream& out, Model& model);
void save_checkpoint(const std::string& path, Model& model);
Model read_checkpoint(std::istream& in);
Model load_checkpoint(const std::string& path);

}  // namespace lhgat::train
