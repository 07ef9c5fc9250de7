#include "lhgat/train/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lhgat/errors.hpp"

namespace lhgat::train {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

bool* flag_of(AblationFlags& flags, const std::string& key) {
  if (key == "no_Wtau") return &flags.no_Wtau;
  if (key == "no_c2c") return &flags.no_c2c;
  if (key == "last_char_only") return &flags.last_char_only;
  if (key == "no_c2w") return &flags.no_c2w;
  if (key == "no_word") return &flags.no_word;
  if (key == "no_margin_loss") return &flags.no_margin_loss;
  if (key == "no_prototype_init") return &flags.no_prototype_init;
  return nullptr;
}

}  // namespace

void AblationFlags::validate() const {
  if (no_word && last_char_only) {
    throw ConfigError("no_word and last_char_only contradict: there are no words to route");
  }
}

double TrainConfig::alpha(std::size_t epoch) const {
  return alpha0 * std::pow(alpha_decay, static_cast<double>(epoch));
}

const std::vector<std::string>& TrainConfig::keys() {
  static const std::vector<std::string> k = {
      "d",        "hgat_layers", "margin",    "alpha0",  "alpha_decay", "lr",
      "momentum", "l2",          "clip_norm", "max_len", "epochs",      "seed",
      "no_Wtau",  "no_c2c",      "last_char_only", "no_c2w", "no_word", "no_margin_loss",
      "no_prototype_init"};
  return k;
}

void TrainConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "d") d = parse_size(key, value);
  else if (key == "hgat_layers") hgat_layers = parse_size(key, value);
  else if (key == "margin") margin = parse_double(key, value);
  else if (key == "alpha0") alpha0 = parse_double(key, value);
  else if (key == "alpha_decay") alpha_decay = parse_double(key, value);
  else if (key == "lr") lr = parse_double(key, value);
  else if (key == "momentum") momentum = parse_double(key, value);
  else if (key == "l2") l2 = parse_double(key, value);
  else if (key == "clip_norm") clip_norm = parse_double(key, value);
  else if (key == "max_len") max_len = parse_size(key, value);
  else if (key == "epochs") epochs = parse_size(key, value);
  else if (key == "seed") seed = parse_size(key, value);
  else if (bool* flag = flag_of(ablation, key)) *flag = parse_bool(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

std::string TrainConfig::get(const std::string& key) const {
  if (key == "d") return std::to_string(d);
  if (key == "hgat_layers") return std::to_string(hgat_layers);
  if (key == "margin") return format_double(margin);
  if (key == "alpha0") return format_double(alpha0);
  if (key == "alpha_decay") return format_double(alpha_decay);
  if (key == "lr") return format_double(lr);
  if (key == "momentum") return format_double(momentum);
  if (key == "l2") return format_double(l2);
  if (key == "clip_norm") return format_double(clip_norm);
  if (key == "max_len") return std::to_string(max_len);
  if (key == "epochs") return std::to_string(epochs);
  if (key == "seed") return std::to_string(seed);
  AblationFlags copy = ablation;
  if (bool* flag = flag_of(copy, key)) return *flag ? "true" : "false";
  throw ConfigError("unknown config key '" + key + "'");
}

void TrainConfig::validate() const {
  if (d == 0 || d % 2 != 0) throw ConfigError("d must be a positive even number");
  if (hgat_layers == 0) throw ConfigError("hgat_layers must be >= 1");
  if (!(margin > 0.0)) throw ConfigError("margin must be > 0");
  if (alpha0 < 0.0) throw ConfigError("alpha0 must be >= 0");
  if (alpha_decay < 0.0) throw ConfigError("alpha_decay must be >= 0");
  // lr = 0 is allowed: it freezes the parameters, which is useful for checks.
  if (lr < 0.0) throw ConfigError("lr must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must be in [0, 1)");
  if (l2 < 0.0) throw ConfigError("l2 must be >= 0");
  if (clip_norm < 0.0) throw ConfigError("clip_norm must be >= 0");
  if (max_len == 0) throw ConfigError("max_len must be >= 1");
  ablation.validate();
}

TrainConfig read_config(std::istream& in, TrainConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      base.set(trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

TrainConfig load_config(const std::string& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return read_config(in, std::move(base));
}

void write_config(std::ostream& out, const TrainConfig& config) {
  for (const std::string& key : TrainConfig::keys()) out << key << '=' << config.get(key) << '\n';
}

}  // namespace lhgat::train
