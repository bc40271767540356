// Copyright 2026 The vecforecast Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "vf/checkpoint.hpp"
#include "vf/dataset_io.hpp"
#include "vf/error.hpp"
#include "vf/gradcheck.hpp"
#include "vf/synth.hpp"
#include "vf/trainer.hpp"

namespace vf::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kSubcommands = {"synth", "train", "eval", "predict", "gradcheck"};

struct ModelFlags {
  ModelConfig cfg;
  std::string pad = "zero";

  void add(CLI::App* app) {
    app->add_option("--t-obs", cfg.episode.t_obs, "Observed frames");
    app->add_option("--t-pred", cfg.episode.t_pred, "Predicted frames");
    app->add_option("--k", cfg.episode.k, "Modes kept after NMS");
    app->add_option("--subgraph-layers", cfg.encoder.subgraph_layers, "Subgraph layers");
    app->add_option("--hidden-dim", cfg.encoder.hidden_dim, "Encoder width");
    app->add_option("--attention-heads", cfg.encoder.attention_heads, "Global attention heads");
    app->add_option("--global-layers", cfg.encoder.global_layers, "Global attention layers");
    app->add_option("--head-hidden-dim", cfg.heads.hidden_dim, "Head MLP width");
    app->add_option("--m", cfg.heads.m, "Targets decoded before NMS");
    app->add_option("--candidate-spacing", cfg.candidate_spacing, "Candidate spacing, meters");
    app->add_option("--nms-threshold", cfg.nms.threshold, "NMS endpoint distance, meters");
    app->add_option("--pad", pad, "Padding when NMS keeps fewer than k modes")
        ->check(CLI::IsMember({"zero", "best"}));
  }

  ModelConfig resolve() const {
    ModelConfig c = cfg;
    c.heads.t_pred = c.episode.t_pred;
    c.nms.k = c.episode.k;
    c.nms.pad = pad == "best" ? PadMode::kBest : PadMode::kZero;
    validate(c);
    return c;
  }
};

struct SynthFlags {
  SynthConfig cfg;
  std::string topology = "straight";
  std::string out;
};

struct TrainFlags {
  ModelFlags model;
  TrainConfig train;
  LossConfig loss;
  std::string optimizer = "adam";
  std::string loss_mode = "tnt";
  std::string data;
  std::string checkpoint;
  std::string resume;
  std::string loss_log;
  std::uint64_t init_seed = 0;
};

struct EvalFlags {
  std::string checkpoint;
  std::string data;
  std::string out = "-";
  double miss_threshold = kDefaultMissThreshold;
  std::optional<double> nms_threshold;
  std::optional<std::string> pad;
};

struct GradcheckFlags {
  std::uint64_t seed = 0;
  double step = 1e-5;
  double tolerance = 1e-3;
  std::size_t max_entries = 0;
};

void require(const std::string& value, const std::string& field, const std::string& command) {
  if (value.empty()) {
    throw Error(ErrorKind::kConfigInvalid, field + ": required by '" + command + "'");
  }
}

// Fails early on missing or unparsable input, before any long work.
std::vector<Scene> load_dataset(const std::string& dir) {
  std::vector<Scene> scenes = read_dataset(dir);
  if (scenes.empty()) throw Error(ErrorKind::kConfigInvalid, "data: no scenes in " + dir);
  return scenes;
}

void write_output(const std::string& path, std::string_view text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

int run_synth(const SynthFlags& flags, std::ostream& out) {
  SynthConfig cfg = flags.cfg;
  cfg.topology = topology_from_string(flags.topology);
  validate(cfg);
  require(flags.out, "out", "synth");
  const SynthDataset data = generate_dataset(cfg);
  write_dataset(fs::path(flags.out) / "train", data.train);
  write_dataset(fs::path(flags.out) / "val", data.val);
  out << "wrote " << data.train.size() << " train and " << data.val.size() << " val scenes to "
      << flags.out << '\n';
  return kExitOk;
}

int run_train(TrainFlags flags, std::ostream& out) {
  TrainConfig train = flags.train;
  train.optimizer = flags.optimizer == "sgd" ? OptimizerKind::kSgd : OptimizerKind::kAdam;
  train.loss_mode = flags.loss_mode == "wta" ? LossMode::kWta : LossMode::kTnt;
  validate(train);
  validate(flags.loss);
  const ModelConfig model_cfg = flags.model.resolve();
  require(flags.data, "data", "train");
  require(flags.checkpoint, "checkpoint", "train");
  const std::vector<Scene> scenes = load_dataset(flags.data);

  std::optional<Trainer> trainer;
  if (flags.resume.empty()) {
    trainer.emplace(TntModel::create(model_cfg, flags.init_seed), train, flags.loss);
  } else {
    trainer.emplace(load_checkpoint(flags.resume), train, flags.loss);
  }

  std::ofstream log;
  if (!flags.loss_log.empty()) {
    const bool append = !flags.resume.empty() && fs::exists(flags.loss_log);
    log.open(flags.loss_log, append ? std::ios::app : std::ios::trunc);
    if (!log) throw Error(ErrorKind::kFileError, "cannot write " + flags.loss_log);
    if (!append) log << "epoch,target_loss,motion_loss,score_loss\n";
  }
  while (trainer->cursor().epoch < static_cast<std::uint64_t>(train.epochs)) {
    const LossSummary s = trainer->train_epoch(scenes);
    const std::uint64_t epoch = trainer->cursor().epoch;
    if (log.is_open()) {
      log << epoch << ',' << format_double(s.target) << ',' << format_double(s.motion) << ','
          << format_double(s.score) << '\n';
      log.flush();
    }
    save_checkpoint(flags.checkpoint, trainer->checkpoint());
    out << "epoch " << epoch << " total " << format_double(s.total) << '\n';
  }
  save_checkpoint(flags.checkpoint, trainer->checkpoint());
  return kExitOk;
}

TntModel load_model(const EvalFlags& flags, const std::string& command) {
  require(flags.checkpoint, "checkpoint", command);
  require(flags.data, "data", command);
  Checkpoint ckpt = load_checkpoint(flags.checkpoint);
  if (flags.nms_threshold) ckpt.config.nms.threshold = *flags.nms_threshold;
  if (flags.pad) ckpt.config.nms.pad = *flags.pad == "best" ? PadMode::kBest : PadMode::kZero;
  validate(ckpt.config);
  return restore_model(ckpt);
}

int run_eval(const EvalFlags& flags, std::ostream& out) {
  if (!(flags.miss_threshold > 0.0)) {
    throw Error(ErrorKind::kConfigInvalid, "miss-threshold: must be > 0");
  }
  const TntModel model = load_model(flags, "eval");
  const std::vector<Scene> scenes = load_dataset(flags.data);
  EvaluationOptions options;
  options.miss_threshold = flags.miss_threshold;
  const EvaluationResult result = evaluate(model, scenes, options);
  write_output(flags.out, result.report.to_json() + "\n", out);
  return kExitOk;
}

int run_predict(const EvalFlags& flags, std::ostream& out) {
  const TntModel model = load_model(flags, "predict");
  const std::vector<Scene> scenes = load_dataset(flags.data);
  std::vector<std::string> rows(scenes.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    rows[i] = serialize_predictions(scenes[i].id, predict(model, prepare_sample(scenes[i], model.config())));
  }
  std::string text = prediction_csv_header();
  for (const auto& r : rows) text += r;
  write_output(flags.out, text, out);
  return kExitOk;
}

int run_gradcheck(const GradcheckFlags& flags, std::ostream& out) {
  if (!(flags.step > 0.0)) throw Error(ErrorKind::kConfigInvalid, "step: must be > 0");
  if (!(flags.tolerance > 0.0)) throw Error(ErrorKind::kConfigInvalid, "tolerance: must be > 0");

  // A small model keeps the element-by-element check fast.
  ModelConfig cfg;
  cfg.episode = {6, 5, 3};
  cfg.encoder = {2, 8, 1, 1};
  cfg.heads = {8, 4, 5};
  cfg.nms.k = 3;
  cfg.candidate_spacing = 2.0;
  const TntModel model = TntModel::create(cfg, flags.seed);

  SynthConfig synth;
  synth.episode = cfg.episode;
  synth.n_neighbors = 1;
  synth.noise_std = 0.1;
  synth.point_spacing = 4.0;
  const Sample sample = prepare_sample(generate_scene(synth, flags.seed, "gradcheck"), cfg);

  GradCheckOptions options;
  options.step = flags.step;
  options.tolerance = flags.tolerance;
  options.max_entries_per_param = flags.max_entries;
  options.exclude_kinks = true;

  bool all_passed = true;
  TntModel probe = model;
  for (LossMode mode : {LossMode::kTnt, LossMode::kWta}) {
    const char* label = mode == LossMode::kTnt ? "tnt" : "wta";
    StopGradients stops;  // recorded by the unperturbed pass, then held fixed
    const GradCheckReport report = grad_check(
        [&](Tape& tape, const Params& ps) -> Var {
          // Gradients are taken against the model's own parameters; perturbed
          // copies go through a probe model. The previous tape is gone by the
          // next call.
          if (&ps == &model.params()) {
            return forward_losses(tape, model, sample, LossConfig{}, mode, &stops).total;
          }
          probe.params() = ps;
          return forward_losses(tape, probe, sample, LossConfig{}, mode, &stops).total;
        },
        model.params(), options);
    for (const auto& e : report.entries) {
      out << (e.passed ? "PASS " : "FAIL ") << label << ' ' << e.name
          << " max_rel_error=" << format_double(e.max_rel_error) << " checked=" << e.checked
          << " skipped=" << e.skipped << '\n';
    }
    all_passed = all_passed && report.passed();
  }
  out << (all_passed ? "gradcheck passed" : "gradcheck FAILED") << " (tolerance "
      << format_double(flags.tolerance) << ")\n";
  return all_passed ? kExitOk : kExitInvalid;
}

bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfigInvalid:
    case ErrorKind::kMalformedRecord:
    case ErrorKind::kNonMonotoneTrack:
    case ErrorKind::kEmptyScene:
    case ErrorKind::kInsufficientHistory:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vectorized target-driven trajectory forecasting", "vecforecast"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic train/val dataset");
  synth_cmd->add_option("--out", synth.out, "Output directory (gets train/ and val/)");
  synth_cmd->add_option("--topology", synth.topology, "Road topology")
      ->check(CLI::IsMember({"straight", "curve", "fork"}));
  synth_cmd->add_option("--radius", synth.cfg.radius, "Curve radius, meters");
  synth_cmd->add_option("--fork-angle", synth.cfg.fork_angle_deg, "Fork branch angle, degrees");
  synth_cmd->add_option("--neighbors", synth.cfg.n_neighbors, "Neighbor agents per scene");
  synth_cmd->add_option("--speed-min", synth.cfg.speed_min, "Minimum speed, m/s");
  synth_cmd->add_option("--speed-max", synth.cfg.speed_max, "Maximum speed, m/s");
  synth_cmd->add_option("--noise", synth.cfg.noise_std, "Position noise std, meters");
  synth_cmd->add_option("--seed", synth.cfg.seed, "Master seed");
  synth_cmd->add_option("--n-train", synth.cfg.n_train, "Training scenes");
  synth_cmd->add_option("--n-val", synth.cfg.n_val, "Validation scenes");
  synth_cmd->add_option("--t-obs", synth.cfg.episode.t_obs, "Observed frames");
  synth_cmd->add_option("--t-pred", synth.cfg.episode.t_pred, "Predicted frames");
  synth_cmd->add_option("--rate", synth.cfg.rate, "Sample rate, Hz");
  synth_cmd->add_option("--half-width", synth.cfg.half_width, "Corridor half width, meters");
  synth_cmd->add_option("--point-spacing", synth.cfg.point_spacing,
                        "Centerline point spacing, meters");

  TrainFlags train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--data", train.data, "Training dataset directory");
  train_cmd->add_option("--checkpoint", train.checkpoint, "Checkpoint written after each epoch");
  train_cmd->add_option("--resume", train.resume, "Continue from this checkpoint");
  train_cmd->add_option("--loss-log", train.loss_log, "Per-epoch loss CSV");
  train_cmd->add_option("--epochs", train.train.epochs, "Total epochs");
  train_cmd->add_option("--batch-size", train.train.batch_size, "Scenes per step");
  train_cmd->add_option("--lr", train.train.learning_rate, "Learning rate");
  train_cmd->add_option("--seed", train.train.seed, "Data order and augmentation seed");
  train_cmd->add_option("--init-seed", train.init_seed, "Parameter initialization seed");
  train_cmd->add_option("--optimizer", train.optimizer, "Optimizer")
      ->check(CLI::IsMember({"sgd", "adam"}));
  train_cmd->add_option("--beta1", train.train.beta1, "Adam beta1");
  train_cmd->add_option("--beta2", train.train.beta2, "Adam beta2");
  train_cmd->add_option("--epsilon", train.train.epsilon, "Adam epsilon");
  train_cmd->add_flag("--rotation", train.train.augment_rotation, "Random rotation augmentation")
      ->default_str("false");
  train_cmd->add_option("--dropout", train.train.dropout, "Agent dropout probability");
  train_cmd->add_option("--loss", train.loss_mode, "Loss composition")
      ->check(CLI::IsMember({"tnt", "wta"}));
  train_cmd->add_option("--huber-delta", train.loss.huber_delta, "Huber transition point");
  train_cmd->add_option("--alpha", train.loss.alpha, "Regression weight in the wta loss");
  train_cmd->add_option("--target-weight", train.loss.target_weight, "Target loss weight");
  train_cmd->add_option("--motion-weight", train.loss.motion_weight, "Motion loss weight");
  train_cmd->add_option("--score-weight", train.loss.score_weight, "Score loss weight");
  train_cmd->add_option("--score-temperature", train.loss.score_temperature,
                        "Soft-label temperature");
  train.model.add(train_cmd);

  EvalFlags eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  EvalFlags pred;
  CLI::App* pred_cmd = app.add_subcommand("predict", "Write world-frame predictions");
  for (auto [cmd, flags] : {std::pair{eval_cmd, &eval}, std::pair{pred_cmd, &pred}}) {
    cmd->add_option("--checkpoint", flags->checkpoint, "Model checkpoint");
    cmd->add_option("--data", flags->data, "Dataset directory");
    cmd->add_option("--out", flags->out, "Output file ('-' for stdout)");
    cmd->add_option("--nms-threshold", flags->nms_threshold,
                    "Override the checkpoint's NMS threshold");
    cmd->add_option("--pad", flags->pad, "Override the checkpoint's padding")
        ->check(CLI::IsMember({"zero", "best"}));
  }
  eval_cmd->add_option("--miss-threshold", eval.miss_threshold, "Miss threshold, meters");

  GradcheckFlags grad;
  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of the full model");
  grad_cmd->add_option("--seed", grad.seed, "Parameter and scene seed");
  grad_cmd->add_option("--step", grad.step, "Finite-difference step");
  grad_cmd->add_option("--tolerance", grad.tolerance, "Relative tolerance");
  grad_cmd->add_option("--max-entries", grad.max_entries, "Elements per parameter (0 = all)");

  // Every option shows a default in --help.
  for (CLI::App* cmd : app.get_subcommands({})) {
    for (CLI::Option* opt : cmd->get_options()) {
      if (opt == cmd->get_help_ptr() || !opt->get_default_str().empty()) continue;
      const std::string field = opt->get_name().substr(2);
      const bool needed = (cmd == synth_cmd && field == "out") ||
                          (cmd != synth_cmd && cmd != grad_cmd &&
                           (field == "data" || field == "checkpoint"));
      opt->default_str(needed ? "required" : "none");
    }
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
      app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
        return app.exit(e, out, err);
      }
      if (args.size() > 1 && !args[1].starts_with("-") &&
          std::find(kSubcommands.begin(), kSubcommands.end(), args[1]) == kSubcommands.end()) {
        err << "error: UnknownSubcommand: '" << args[1] << "'\n";
        return kExitInvalid;
      }
      app.exit(e, out, err);
      return kExitInvalid;
    }
    if (synth_cmd->parsed()) return run_synth(synth, out);
    if (train_cmd->parsed()) return run_train(train, out);
    if (eval_cmd->parsed()) return run_eval(eval, out);
    if (pred_cmd->parsed()) return run_predict(pred, out);
    if (grad_cmd->parsed()) return run_gradcheck(grad, out);
    err << "error: UnknownSubcommand\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_validation_error(e.kind()) ? kExitInvalid : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace vf::cli
