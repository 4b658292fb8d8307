#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "absa/core/error.hpp"
#include "absa/data/conllu.hpp"
#include "absa/data/corpus.hpp"
#include "absa/data/embeddings.hpp"
#include "absa/model/checkpoint.hpp"
#include "absa/model/forward.hpp"
#include "absa/model/gradcheck.hpp"
#include "absa/train/ablation.hpp"
#include "absa/train/trainer.hpp"

namespace absa::cli {
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::uint64_t seed = 0;
  std::optional<std::string> train, dev, test, embeddings, checkpoint, out, conllu, aspects;
  std::optional<std::size_t> hidden, layers, epochs, batch_size, embed_dim, tokens;
  std::optional<double> alpha, beta, lr;
  bool no_gate = false, no_div = false, no_con = false, gatediv = false, normalize_div = false;
  bool no_self_loop = false, freeze_embeddings = false, no_shuffle = false;
  std::optional<std::string> corrupt_parameter;
};

const std::string& require(const std::optional<std::string>& v, const char* flag, const std::string& command) {
  if (!v || v->empty()) throw UsageError(command + " requires " + flag);
  return *v;
}

fs::path existing_file(const std::optional<std::string>& v, const char* flag, const std::string& command) {
  fs::path p = require(v, flag, command);
  if (!fs::is_regular_file(p)) throw UsageError(std::string(flag) + ": no such file '" + p.string() + "'");
  return p;
}

fs::path output_dir(const Options& o) {
  fs::path dir = require(o.out, "--out", o.command);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("--out: cannot create directory '" + dir.string() + "'");
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw UsageError("cannot write '" + path.string() + "'");
}

model::HyperParams apply_flags(model::HyperParams hp, const Options& o, bool architecture) {
  if (architecture) {
    if (o.hidden) hp.hidden = *o.hidden;
    if (o.layers) hp.layers = *o.layers;
  }
  if (o.alpha) hp.alpha = *o.alpha;
  if (o.beta) hp.beta = *o.beta;
  if (o.no_gate) hp.gate_on = false;
  if (o.no_div) hp.div_on = false;
  if (o.no_con) hp.con_on = false;
  if (o.gatediv) hp.gatediv_baseline = true;
  if (o.normalize_div) hp.normalize_div = true;
  if (o.no_self_loop) hp.include_self_loop = false;
  return hp;
}

train::TrainConfig train_config(const Options& o) {
  train::TrainConfig cfg;
  cfg.seed = o.seed;
  if (o.epochs) cfg.epochs = *o.epochs;
  if (o.batch_size) cfg.batch_size = *o.batch_size;
  if (o.lr) cfg.learning_rate = *o.lr;
  if (o.embed_dim) cfg.embed_dim = *o.embed_dim;
  cfg.shuffle = !o.no_shuffle;
  cfg.hp = apply_flags(cfg.hp, o, true);
  try {
    cfg.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::optional<data::EmbeddingTable> maybe_embeddings(const Options& o) {
  if (!o.embeddings) return std::nullopt;
  return data::load_embeddings(existing_file(o.embeddings, "--embeddings", o.command), !o.freeze_embeddings);
}

model::ModelState init_for_training(const Options& o, const std::vector<data::Example>& train_set,
                                    const train::TrainConfig& cfg) {
  auto table = maybe_embeddings(o);
  model::ModelState m = train::init_model(train_set, std::move(table), cfg);
  if (o.freeze_embeddings) m.train_embeddings = false;
  return m;
}

nlohmann::ordered_json metrics_json(const train::Metrics& m) {
  nlohmann::ordered_json per_class;
  for (auto p : data::kAllPolarities) {
    const auto& c = m.per_class[data::class_index(p)];
    per_class[std::string(data::to_string(p))] = {{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}};
  }
  return {{"count", m.count},
          {"accuracy", m.accuracy},
          {"macro_f1", m.macro_f1},
          {"per_class", per_class},
          {"loss_div", m.mean_loss.div},
          {"loss_const", m.mean_loss.cons},
          {"loss_pred", m.mean_loss.pred},
          {"loss_total", m.mean_loss.total}};
}

int cmd_train(const Options& o, std::ostream& out) {
  const fs::path train_path = existing_file(o.train, "--train", o.command);
  std::optional<fs::path> dev_path;
  if (o.dev) dev_path = existing_file(o.dev, "--dev", o.command);
  const fs::path dir = output_dir(o);
  const train::TrainConfig cfg = train_config(o);

  const auto train_set = data::parse_corpus(train_path);
  std::vector<data::Example> dev_set;
  if (dev_path) dev_set = data::parse_corpus(*dev_path);
  if (train_set.empty()) throw LoadError(train_path.string(), 0, "no examples");

  const model::ModelState initial = init_for_training(o, train_set, cfg);
  const train::TrainResult r = train::train(initial, train_set, dev_path ? &dev_set : nullptr, cfg);

  const fs::path ckpt = o.checkpoint ? fs::path(*o.checkpoint) : dir / "model.json";
  model::save_checkpoint(ckpt, r.best);
  write_file(dir / "metrics.jsonl", train::metrics_jsonl(r.log));
  out << "trained " << cfg.epochs << " epochs, best epoch " << r.best_epoch << "; checkpoint " << ckpt.string() << "\n";
  return kOk;
}

std::vector<data::Example> eval_corpus(const Options& o) {
  if (o.test) return data::parse_corpus(existing_file(o.test, "--test", o.command));
  if (o.dev) return data::parse_corpus(existing_file(o.dev, "--dev", o.command));
  if (o.train) return data::parse_corpus(existing_file(o.train, "--train", o.command));
  throw UsageError(o.command + " requires --test (or --dev/--train)");
}

model::ModelState checkpoint_for(const Options& o) {
  const fs::path ckpt = existing_file(o.checkpoint, "--checkpoint", o.command);
  return model::load_checkpoint(ckpt);
}

void check_vocabulary_overlap(const model::ModelState& m, const std::vector<data::Example>& corpus) {
  for (const auto& ex : corpus) {
    for (const auto& t : ex.tokens) {
      if (m.vocab.contains(t)) return;
    }
  }
  throw CheckpointError("no corpus token is in the checkpoint vocabulary");
}

int cmd_eval(const Options& o, std::ostream& out) {
  model::ModelState m = checkpoint_for(o);
  const auto corpus = eval_corpus(o);
  if (corpus.empty()) throw LoadError("<corpus>", 0, "no examples");
  check_vocabulary_overlap(m, corpus);
  const model::HyperParams hp = apply_flags(m.hp, o, false);
  const train::Metrics metrics = train::evaluate(m, corpus, hp);
  const std::string text = metrics_json(metrics).dump() + "\n";
  if (o.out) write_file(output_dir(o) / "eval.json", text);
  out << text;
  return kOk;
}

int cmd_ablate(const Options& o, std::ostream& out) {
  const fs::path train_path = existing_file(o.train, "--train", o.command);
  const fs::path dev_path = existing_file(o.dev, "--dev", o.command);
  const fs::path dir = output_dir(o);
  const train::TrainConfig cfg = train_config(o);
  const auto train_set = data::parse_corpus(train_path);
  const auto dev_set = data::parse_corpus(dev_path);
  if (train_set.empty()) throw LoadError(train_path.string(), 0, "no examples");
  if (dev_set.empty()) throw LoadError(dev_path.string(), 0, "no examples");

  const model::ModelState initial = init_for_training(o, train_set, cfg);
  const auto rows = train::run_ablations(initial, train_set, dev_set, cfg);
  write_file(dir / "ablation.jsonl", train::ablation_jsonl(rows));
  for (const auto& r : rows) write_file(dir / ("metrics_" + r.variant + ".jsonl"), train::metrics_jsonl(r.log));
  out << train::ablation_table(rows);
  return kOk;
}

int cmd_gradcheck(const Options& o, std::ostream& out) {
  model::GradCheckConfig cfg;
  cfg.seed = o.seed;
  if (o.tokens) cfg.tokens = *o.tokens;
  if (o.embed_dim) cfg.embed_dim = *o.embed_dim;
  cfg.hp = apply_flags(cfg.hp, o, true);
  cfg.corrupt_parameter = o.corrupt_parameter;
  if (cfg.tokens == 0 || cfg.embed_dim == 0) throw UsageError("gradcheck sizes must be positive");
  try {
    cfg.hp.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  const model::GradCheckReport report = model::run_gradcheck(cfg);
  out << model::format_report(report);
  return report.passed ? kOk : kCheckFailed;
}

int cmd_scores(const Options& o, std::ostream& out) {
  model::ModelState m = checkpoint_for(o);
  const auto corpus = eval_corpus(o);
  check_vocabulary_overlap(m, corpus);
  const model::HyperParams hp = apply_flags(m.hp, o, false);
  std::string text;
  for (const auto& ex : corpus) {
    const auto trace = model::total_loss(ex, m, hp).second;
    nlohmann::ordered_json j{{"tokens", ex.tokens},
                             {"aspect_from", ex.aspect_from},
                             {"aspect_to", ex.aspect_to},
                             {"syn", trace.syn.values()},
                             {"mod", trace.mod.values()},
                             {"predicted", data::to_string(trace.predicted)},
                             {"gold", data::to_string(ex.label)}};
    text += j.dump();
    text += '\n';
  }
  if (o.out) {
    write_file(output_dir(o) / "scores.jsonl", text);
  } else {
    out << text;
  }
  return kOk;
}

int cmd_convert(const Options& o, std::ostream& out) {
  const fs::path conllu = existing_file(o.conllu, "--conllu", o.command);
  const fs::path aspects = existing_file(o.aspects, "--aspects", o.command);
  const fs::path dir = output_dir(o);
  const auto examples = data::convert_conllu(data::read_conllu(conllu), data::read_aspect_sidecar(aspects));
  const fs::path target = dir / "converted.jsonl";
  data::write_corpus(target, examples);
  // Re-read so the written file is known to satisfy the loader.
  const auto reloaded = data::parse_corpus(target);
  out << "wrote " << reloaded.size() << " examples to " << target.string() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aspect-gated GCN sentiment classifier over dependency trees", "absa-gcn"};
  Options o;
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.add_option("command", o.command, "train | eval | ablate | gradcheck | scores | convert")
      ->required()
      ->check(CLI::IsMember({"train", "eval", "ablate", "gradcheck", "scores", "convert"}));
  app.add_option("--seed", o.seed, "Seed for every random draw");
  app.add_option("--train", o.train, "Training corpus (JSON Lines)");
  app.add_option("--dev", o.dev, "Development corpus");
  app.add_option("--test", o.test, "Evaluation corpus");
  app.add_option("--embeddings", o.embeddings, "Word vectors, one 'word v1 ... vd' per line");
  app.add_option("--checkpoint", o.checkpoint, "Checkpoint to read (eval/scores) or write (train)");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--hidden", o.hidden, "Hidden width of GCN and feed-forward layers");
  app.add_option("--layers", o.layers, "Number of GCN layers");
  app.add_option("--alpha", o.alpha, "Weight of the consistency loss");
  app.add_option("--beta", o.beta, "Weight of the prediction loss");
  app.add_flag("--no-gate", o.no_gate, "Disable aspect gates (also disables diversity)");
  app.add_flag("--no-div", o.no_div, "Drop the gate diversity term");
  app.add_flag("--no-con", o.no_con, "Drop the syntax/model consistency term");
  app.add_flag("--gatediv", o.gatediv, "Diversity on raw gate vectors instead of regulated hidden vectors");
  app.add_flag("--normalize-div", o.normalize_div, "Cosine instead of dot product in the diversity term");
  app.add_flag("--no-self-loop", o.no_self_loop, "Exclude a token from its own neighbor set");
  app.add_option("--epochs", o.epochs, "Training epochs");
  app.add_option("--batch-size", o.batch_size, "Mini-batch size");
  app.add_option("--lr", o.lr, "Adam learning rate");
  app.add_option("--embed-dim", o.embed_dim, "Embedding width when no --embeddings file is given");
  app.add_flag("--freeze-embeddings", o.freeze_embeddings, "Do not update the embedding table");
  app.add_flag("--no-shuffle", o.no_shuffle, "Keep training order fixed");
  app.add_option("--tokens", o.tokens, "gradcheck: sentence length");
  app.add_option("--conllu", o.conllu, "convert: CoNLL-U input");
  app.add_option("--aspects", o.aspects, "convert: aspect sidecar JSON");
  app.add_option("--corrupt-parameter", o.corrupt_parameter, "gradcheck: perturb one analytic gradient")
      ->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "absa-gcn: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (o.command == "train") return cmd_train(o, out);
    if (o.command == "eval") return cmd_eval(o, out);
    if (o.command == "ablate") return cmd_ablate(o, out);
    if (o.command == "gradcheck") return cmd_gradcheck(o, out);
    if (o.command == "scores") return cmd_scores(o, out);
    if (o.command == "convert") return cmd_convert(o, out);
  } catch (const UsageError& e) {
    err << "absa-gcn " << o.command << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const LoadError& e) {
    err << "absa-gcn " << o.command << ": data error: " << e.what() << "\n";
    return kDataError;
  } catch (const CheckpointError& e) {
    err << "absa-gcn " << o.command << ": checkpoint error: " << e.what() << "\n";
    return kCheckpointError;
  } catch (const ArgumentError& e) {
    err << "absa-gcn " << o.command << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "absa-gcn " << o.command << ": " << e.what() << "\n";
    return kCheckFailed;
  }
  return kConfigError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace absa::cli
