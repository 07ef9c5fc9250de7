#include "lhgat/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lhgat/corpus/corpus_io.hpp"
#include "lhgat/corpus/synthetic.hpp"
#include "lhgat/corpus/utf8.hpp"
#include "lhgat/errors.hpp"
#include "lhgat/eval/metrics.hpp"
#include "lhgat/eval/similarity.hpp"
#include "lhgat/train/checkpoint.hpp"
#include "lhgat/train/trainer.hpp"

namespace lhgat::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::size_t kNoTruncation = std::numeric_limits<std::size_t>::max();

bool is_flag_key(const std::string& key) { return key.rfind("no_", 0) == 0 || key == "last_char_only"; }

// Config keys exposed as `--<key>`; values are applied over the config file.
struct ConfigOverrides {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;

  void attach(CLI::App& app) {
    for (const std::string& key : train::TrainConfig::keys()) {
      if (is_flag_key(key)) {
        flags[key] = false;
        app.add_flag("--" + key, flags[key], "ablation flag");
      } else {
        values[key];
        app.add_option("--" + key, values[key], "overrides config key " + key);
      }
    }
  }

  train::TrainConfig apply(const CLI::App& app, train::TrainConfig config) const {
    for (const auto& [key, value] : values) {
      if (app.count("--" + key) > 0) config.set(key, value);
    }
    for (const auto& [key, value] : flags) {
      if (app.count("--" + key) > 0) config.set(key, value ? "true" : "false");
    }
    return config;
  }
};

void print_warnings(const corpus::Warnings& warnings, std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  return out;
}

json scores_json(const eval::PrecisionRecall& pr) {
  return {{"precision", pr.precision}, {"recall", pr.recall}, {"f1", pr.f1}};
}

json report_json(const eval::EvalReport& report, const std::optional<eval::MismatchRecall>& mismatch) {
  json j = {{"gold", report.gold},
            {"predicted", report.predicted},
            {"ti_correct", report.ti_correct},
            {"tc_correct", report.tc_correct},
            {"identification", scores_json(report.identification)},
            {"classification", scores_json(report.classification)}};
  if (mismatch) {
    j["mismatch"] = {{"subset", mismatch->subset},
                     {"found", mismatch->found},
                     {"recall", mismatch->recall ? json(*mismatch->recall) : json(nullptr)}};
  }
  return j;
}

// Word list without embeddings: ids follow line order.
lexgraph::Lexicon read_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon " + path);
  lexgraph::Lexicon lexicon;
  std::string line;
  std::size_t next = 0;
  while (std::getline(in, line)) {
    line.erase(std::remove(line.begin(), line.end(), '\r'), line.end());
    if (!line.empty() && lexicon.insert(line, next)) ++next;
  }
  return lexicon;
}

struct GenDataArgs {
  corpus::SyntheticSpec spec;
  std::size_t dev_sentences = 0;
  std::string out_dir;
};

int cmd_gen_data(const GenDataArgs& a, std::ostream& out) {
  corpus::SyntheticSpec spec = a.spec;
  spec.sentences += a.dev_sentences;
  const corpus::SyntheticCorpus syn = corpus::generate_synthetic_corpus(spec);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);

  const std::size_t n_train = a.spec.sentences;
  const std::vector<corpus::Sentence> train_part(syn.sentences.begin(),
                                                 syn.sentences.begin() + static_cast<std::ptrdiff_t>(n_train));
  const std::vector<corpus::Sentence> dev_part(syn.sentences.begin() + static_cast<std::ptrdiff_t>(n_train),
                                               syn.sentences.end());
  auto mismatches = [&](std::size_t from, std::size_t to) {
    std::size_t n = 0;
    for (std::size_t s = from; s < to; ++s) {
      n += static_cast<std::size_t>(std::count(syn.mismatch[s].begin(), syn.mismatch[s].end(), true));
    }
    return n;
  };

  {
    auto f = open_output((dir / "train.jsonl").string());
    corpus::write_corpus(f, train_part);
  }
  if (!dev_part.empty()) {
    auto f = open_output((dir / "dev.jsonl").string());
    corpus::write_corpus(f, dev_part);
  }
  {
    auto f = open_output((dir / "labels.json").string());
    corpus::write_label_set(f, syn.labels);
  }
  {
    auto f = open_output((dir / "chars.vec").string());
    corpus::write_embeddings(f, syn.vocabulary.chars);
  }
  {
    auto f = open_output((dir / "words.vec").string());
    corpus::write_embeddings(f, syn.vocabulary.words);
  }
  {
    auto f = open_output((dir / "lexicon.txt").string());
    for (const std::string& w : syn.lexicon) f << w << '\n';
  }
  const json meta = {{"seed", spec.seed},
                     {"event_types", syn.labels.event_types()},
                     {"train_sentences", train_part.size()},
                     {"dev_sentences", dev_part.size()},
                     {"train_mismatch_triggers", mismatches(0, n_train)},
                     {"dev_mismatch_triggers", mismatches(n_train, syn.sentences.size())},
                     {"dim", spec.dim}};
  {
    auto f = open_output((dir / "meta.json").string());
    f << meta.dump(2) << '\n';
  }
  out << meta.dump() << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::string config_file;
  std::string data_dir;
  std::string train_file, dev_file, labels_file, char_emb, word_emb, lexicon_file;
  std::string checkpoint;
  std::string metrics_file;
};

int cmd_train(const TrainArgs& a, const train::TrainConfig& config, std::ostream& out, std::ostream& err) {
  auto pick = [&](const std::string& explicit_path, const char* name) -> std::string {
    if (!explicit_path.empty()) return explicit_path;
    if (!a.data_dir.empty()) return (fs::path(a.data_dir) / name).string();
    return {};
  };
  const std::string train_file = pick(a.train_file, "train.jsonl");
  const std::string labels_file = pick(a.labels_file, "labels.json");
  const std::string char_emb = pick(a.char_emb, "chars.vec");
  const std::string word_emb = pick(a.word_emb, "words.vec");
  std::string dev_file = a.dev_file;
  std::string lexicon_file = a.lexicon_file;
  if (!a.data_dir.empty()) {
    if (dev_file.empty() && fs::exists(fs::path(a.data_dir) / "dev.jsonl")) {
      dev_file = (fs::path(a.data_dir) / "dev.jsonl").string();
    }
    if (lexicon_file.empty() && fs::exists(fs::path(a.data_dir) / "lexicon.txt")) {
      lexicon_file = (fs::path(a.data_dir) / "lexicon.txt").string();
    }
  }
  if (train_file.empty() || labels_file.empty() || char_emb.empty() || word_emb.empty()) {
    throw ConfigError("train needs --train, --labels, --char-emb and --word-emb (or --data-dir)");
  }
  config.validate();

  corpus::Warnings warnings;
  const corpus::LabelSet labels = corpus::load_label_set(labels_file);
  Rng rng(config.seed);
  corpus::Vocabulary vocab{corpus::load_embeddings(char_emb, config.d, rng, &warnings),
                           corpus::load_embeddings(word_emb, config.d, rng, &warnings)};
  lexgraph::Lexicon lexicon = lexicon_file.empty() ? lexgraph::Lexicon::from_table(vocab.words)
                                                   : lexgraph::Lexicon::load(lexicon_file, vocab.words, &warnings);
  const auto train_corpus = corpus::load_corpus(train_file, labels, config.max_len, &warnings);
  const auto dev = dev_file.empty() ? std::vector<corpus::Sentence>{}
                                    : corpus::load_corpus(dev_file, labels, config.max_len, &warnings);
  print_warnings(warnings, err);

  const std::string metrics_path = a.metrics_file.empty() ? a.checkpoint + ".metrics.jsonl" : a.metrics_file;
  std::ofstream metrics = open_output(metrics_path);
  train::Model model = train::make_model(config, labels, std::move(vocab), std::move(lexicon), train_corpus);
  train::TrainResult result = train::train(std::move(model), train_corpus, dev, [&](const train::EpochMetrics& m) {
    const std::string line = train::to_json_line(m);
    out << line << '\n' << std::flush;
    metrics << line << '\n' << std::flush;
    return true;
  });
  train::save_checkpoint(a.checkpoint, result.best);
  err << "saved checkpoint from epoch " << result.best_epoch << " to " << a.checkpoint << '\n';
  return kExitOk;
}

struct EvalArgs {
  std::string checkpoint, data, predictions, labels_file, lexicon_file, report;
};

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<train::Model> model;
  if (!a.checkpoint.empty()) model = train::load_checkpoint(a.checkpoint);
  if (!model && a.labels_file.empty()) throw ConfigError("eval needs --checkpoint or --labels");
  if (!model && a.predictions.empty()) throw ConfigError("eval without --checkpoint needs --predictions");
  const corpus::LabelSet labels = model ? model->labels : corpus::load_label_set(a.labels_file);

  corpus::Warnings warnings;
  const auto gold = corpus::load_corpus(a.data, labels, kNoTruncation, &warnings);
  std::vector<std::vector<corpus::Span>> predicted;
  if (!a.predictions.empty()) {
    const auto pred = corpus::load_corpus(a.predictions, labels, kNoTruncation, &warnings);
    if (pred.size() != gold.size()) {
      throw DataError("predictions hold " + std::to_string(pred.size()) + " sentences, gold holds " +
                      std::to_string(gold.size()));
    }
    for (const auto& s : pred) predicted.push_back(s.triggers);
  } else {
    predicted = train::predict_all(*model, gold);
  }
  print_warnings(warnings, err);

  std::optional<eval::MismatchRecall> mismatch;
  if (!a.lexicon_file.empty()) {
    mismatch = eval::mismatch_recall(gold, predicted, read_word_list(a.lexicon_file));
  } else if (model) {
    mismatch = eval::mismatch_recall(gold, predicted, model->lexicon);
  }
  const json report = report_json(eval::evaluate(gold, predicted), mismatch);
  out << report.dump() << '\n';
  if (!a.report.empty()) open_output(a.report) << report.dump(2) << '\n';
  return kExitOk;
}

struct PredictArgs {
  std::string checkpoint, input, output;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  train::Model model = train::load_checkpoint(a.checkpoint);
  corpus::Warnings warnings;
  auto sentences = corpus::load_corpus(a.input, model.labels, kNoTruncation, &warnings);
  print_warnings(warnings, err);
  std::ofstream file;
  if (!a.output.empty()) file = open_output(a.output);
  std::ostream& dst = a.output.empty() ? out : file;
  for (corpus::Sentence& s : sentences) {
    s.triggers = train::predict(model, s);
    dst << corpus::sentence_to_json(s) << '\n';
  }
  return kExitOk;
}

struct SimilarityArgs {
  std::string checkpoint, subset = "B", output;
};

int cmd_export_similarity(const SimilarityArgs& a, std::ostream& out, std::ostream& err) {
  train::Model model = train::load_checkpoint(a.checkpoint);
  corpus::Warnings warnings;
  const auto subset = a.subset == "B" ? eval::LabelSubset::kBegin : eval::LabelSubset::kInside;
  const eval::SimilarityMatrix matrix =
      eval::export_similarity(model.label_embeddings.table, model.labels, subset, &warnings);
  print_warnings(warnings, err);
  if (a.output.empty()) {
    eval::write_similarity_csv(out, matrix);
  } else {
    auto f = open_output(a.output);
    eval::write_similarity_csv(f, matrix);
  }
  return kExitOk;
}

struct InspectArgs {
  std::string checkpoint, lexicon_file, text, input;
  std::vector<std::string> words;
  std::size_t line = 1;
};

json edges_json(const std::vector<lexgraph::Edge>& edges) {
  json arr = json::array();
  for (const auto& [src, dst] : edges) arr.push_back({src, dst});
  return arr;
}

int cmd_inspect_graph(const InspectArgs& a, const train::AblationFlags& flags, std::ostream& out) {
  flags.validate();
  lexgraph::Lexicon lexicon;
  if (!a.checkpoint.empty()) {
    lexicon = train::load_checkpoint(a.checkpoint).lexicon;
  } else if (!a.lexicon_file.empty()) {
    lexicon = read_word_list(a.lexicon_file);
  }
  for (const std::string& w : a.words) lexicon.insert(w, lexicon.size());

  corpus::Sentence sentence;
  if (!a.text.empty()) {
    sentence.chars = corpus::split_utf8(a.text);
  } else if (!a.input.empty()) {
    std::ifstream in(a.input);
    if (!in) throw DataError("cannot open " + a.input);
    std::string line;
    for (std::size_t i = 0; i < a.line; ++i) {
      if (!std::getline(in, line)) throw DataError(a.input + " has fewer than " + std::to_string(a.line) + " lines");
    }
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), a.line);
    }
    if (!rec.contains("text")) throw ParseError("missing field 'text'", a.line);
    sentence.chars = rec["text"].is_string() ? corpus::split_utf8(rec["text"].get<std::string>())
                                              : rec["text"].get<std::vector<std::string>>();
  } else {
    throw ConfigError("inspect-graph needs --text or --input");
  }
  if (sentence.chars.empty()) throw DataError("empty sentence");

  const lexgraph::HeteroGraph graph =
      train::apply_ablation(lexgraph::build_graph(sentence, lexgraph::match_lexicon(sentence, lexicon)), flags);
  json words = json::array();
  for (const auto& w : graph.words) {
    words.push_back({{"word_id", w.word_id},
                     {"begin", w.begin},
                     {"end", w.end},
                     {"text", corpus::join(sentence.chars, w.begin - 1, w.end)}});
  }
  json self_loops = json::array();
  for (std::size_t i = 0; i < graph.num_chars; ++i) {
    if (graph.self_loop[i]) self_loops.push_back(i);
  }
  const json j = {{"chars", sentence.chars},
                  {"words", words},
                  {"c2c", edges_json(graph.c2c)},
                  {"w2c", edges_json(graph.w2c)},
                  {"c2w", edges_json(graph.c2w)},
                  {"self_loops", self_loops},
                  {"counts",
                   {{"chars", graph.num_chars},
                    {"words", graph.num_words()},
                    {"c2c", graph.c2c.size()},
                    {"w2c", graph.w2c.size()},
                    {"c2w", graph.c2w.size()},
                    {"self_loops", graph.num_self_loops()}}}};
  out << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lexicon-enhanced heterogeneous graph attention trigger extractor", "lhgat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "write a deterministic synthetic corpus");
  gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();
  gen_cmd->add_option("--seed", gen.spec.seed);
  gen_cmd->add_option("--event-types", gen.spec.event_types);
  gen_cmd->add_option("--sentences", gen.spec.sentences, "training sentences");
  gen_cmd->add_option("--dev-sentences", gen.dev_sentences);
  gen_cmd->add_option("--alphabet", gen.spec.alphabet);
  gen_cmd->add_option("--lexicon-size", gen.spec.lexicon_size);
  gen_cmd->add_option("--dim", gen.spec.dim);
  gen_cmd->add_option("--min-length", gen.spec.min_length);
  gen_cmd->add_option("--max-length", gen.spec.max_length);

  TrainArgs tr;
  ConfigOverrides train_overrides;
  auto* train_cmd = app.add_subcommand("train", "train a model and write the best-dev checkpoint");
  train_cmd->add_option("--config", tr.config_file, "key=value config file");
  train_cmd->add_option("--data-dir", tr.data_dir, "directory laid out by gen-data");
  train_cmd->add_option("--train", tr.train_file);
  train_cmd->add_option("--dev", tr.dev_file);
  train_cmd->add_option("--labels", tr.labels_file);
  train_cmd->add_option("--char-emb", tr.char_emb);
  train_cmd->add_option("--word-emb", tr.word_emb);
  train_cmd->add_option("--lexicon", tr.lexicon_file);
  train_cmd->add_option("--checkpoint,--out", tr.checkpoint)->required();
  train_cmd->add_option("--metrics", tr.metrics_file, "per-epoch JSON lines (default <checkpoint>.metrics.jsonl)");
  train_overrides.attach(*train_cmd);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "score predictions against gold triggers");
  eval_cmd->add_option("--data", ev.data, "gold JSONL")->required();
  eval_cmd->add_option("--checkpoint", ev.checkpoint);
  eval_cmd->add_option("--predictions", ev.predictions, "score this JSONL instead of running the model");
  eval_cmd->add_option("--labels", ev.labels_file);
  eval_cmd->add_option("--lexicon", ev.lexicon_file, "word list for mismatch recall");
  eval_cmd->add_option("--report", ev.report, "also write the report here");

  PredictArgs pr;
  auto* predict_cmd = app.add_subcommand("predict", "tag sentences, JSONL in and out");
  predict_cmd->add_option("--checkpoint", pr.checkpoint)->required();
  predict_cmd->add_option("--input", pr.input)->required();
  predict_cmd->add_option("--output", pr.output);

  SimilarityArgs sim;
  auto* sim_cmd = app.add_subcommand("export-similarity", "label-embedding similarity matrix as CSV");
  sim_cmd->add_option("--checkpoint", sim.checkpoint)->required();
  sim_cmd->add_option("--subset", sim.subset)->check(CLI::IsMember({"B", "I"}));
  sim_cmd->add_option("--output,--out", sim.output);

  InspectArgs ins;
  auto* inspect_cmd = app.add_subcommand("inspect-graph", "dump one sentence graph as JSON");
  inspect_cmd->add_option("--text", ins.text);
  inspect_cmd->add_option("--input", ins.input);
  inspect_cmd->add_option("--line", ins.line, "1-based line of --input");
  inspect_cmd->add_option("--checkpoint", ins.checkpoint);
  inspect_cmd->add_option("--lexicon", ins.lexicon_file);
  inspect_cmd->add_option("--word", ins.words, "extra lexicon word (repeatable)");
  std::map<std::string, bool> inspect_flags;
  for (const std::string& key : train::TrainConfig::keys()) {
    if (!is_flag_key(key)) continue;
    inspect_flags[key] = false;
    inspect_cmd->add_flag("--" + key, inspect_flags[key]);
  }

  // CLI11 checks required options before unknown ones; name the unknown flag first.
  if (!args.empty()) {
    if (CLI::App* sub = app.get_subcommand_no_throw(args[0])) {
      for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.size() < 3 || a.rfind("--", 0) != 0) continue;
        const std::string name = a.substr(0, a.find('='));
        if (name == "--help" || sub->get_option_no_throw(name) != nullptr) continue;
        err << "error: unknown option " << name << " for '" << args[0] << "'\n";
        err << "run 'lhgat " << args[0] << " --help' for usage\n";
        return kExitUsage;
      }
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run 'lhgat --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_data(gen, out);
    if (train_cmd->parsed()) {
      train::TrainConfig config;
      if (!tr.config_file.empty()) config = train::load_config(tr.config_file);
      config = train_overrides.apply(*train_cmd, config);
      return cmd_train(tr, config, out, err);
    }
    if (eval_cmd->parsed()) return cmd_eval(ev, out, err);
    if (predict_cmd->parsed()) return cmd_predict(pr, out, err);
    if (sim_cmd->parsed()) return cmd_export_similarity(sim, out, err);
    if (inspect_cmd->parsed()) {
      train::TrainConfig config;
      for (const auto& [key, value] : inspect_flags) {
        if (inspect_cmd->count("--" + key) > 0) config.set(key, value ? "true" : "false");
      }
      return cmd_inspect_graph(ins, config.ablation, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace lhgat::cli
