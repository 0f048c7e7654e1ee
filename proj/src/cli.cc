// Copyright 2026 The rbnkit Authors
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

#include "rbn/cli.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rbn/binary_io.h"
#include "rbn/checkpoint.h"
#include "rbn/corpus_io.h"
#include "rbn/error.h"
#include "rbn/eval.h"
#include "rbn/features.h"
#include "rbn/gradcheck.h"
#include "rbn/trainer.h"

namespace rbn {

namespace {

struct TrainFlags {
  std::size_t epochs = 50;
  double lr = 0.01;
  double clip = 5.0;
  std::uint64_t seed = 1;
  std::size_t batch = 32;
  std::size_t lr_patience = 3;
  std::size_t early_stop = 10;
  std::size_t workers = 1;

  void Register(CLI::App* cmd) {
    cmd->add_option("--epochs", epochs, "maximum training epochs")
        ->capture_default_str();
    cmd->add_option("--lr", lr, "SGD learning rate")->capture_default_str();
    cmd->add_option("--clip", clip, "global gradient-norm clip threshold")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    cmd->add_option("--batch", batch, "minibatch size")->capture_default_str();
    cmd->add_option("--lr-patience", lr_patience,
                    "epochs without improvement before halving the rate")
        ->capture_default_str();
    cmd->add_option("--early-stop", early_stop,
                    "epochs without improvement before stopping")
        ->capture_default_str();
    cmd->add_option("--workers", workers, "gradient worker threads")
        ->capture_default_str();
  }

  TrainConfig Config() const {
    TrainConfig c;
    c.max_epochs = epochs;
    c.learning_rate = lr;
    c.clip_norm = clip;
    c.seed = seed;
    c.batch_size = batch;
    c.lr_halving_patience = lr_patience;
    c.early_stop_patience = early_stop;
    c.workers = workers;
    return c;
  }
};

std::vector<std::size_t> ReadDurationList(const std::string& path) {
  std::istringstream in(ReadFileBytes(path));
  std::vector<std::size_t> out;
  std::string tok;
  while (in >> tok) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || v == 0) {
      throw FormatError(path + ": bad duration \"" + tok + "\"");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void WriteText(const std::string& path, const std::string& text) {
  WriteFileAtomic(path, text);
}

std::string DefaultReportPath(const std::string& ckpt) {
  return ckpt + ".report";
}

void CheckRowCount(std::size_t got, std::size_t want, const std::string& a,
                   const std::string& b) {
  if (got != want) {
    throw DimensionError(a + " has " + std::to_string(got) + " rows but " +
                         b + " has " + std::to_string(want));
  }
}

Corpus NormalizedFor(const RaeModel& model, const Corpus& corpus) {
  if (!corpus.units.empty() && corpus.dim != model.params.feature_dim()) {
    throw DimensionError("corpus dimension " + std::to_string(corpus.dim) +
                         " does not match checkpoint D=" +
                         std::to_string(model.params.feature_dim()));
  }
  return model.norm ? ApplyMinMax(corpus, *model.norm) : corpus;
}

void PrintTrainSummary(std::ostream& out, const TrainReport& report) {
  const EpochRecord& first = report.epochs.front();
  const EpochRecord& last = report.epochs.back();
  const EpochRecord& best = report.epochs[report.best_epoch];
  out << "epochs_run: " << last.epoch << '\n'
      << "initial_train_loss: " << first.train_loss << '\n'
      << "final_train_loss: " << last.train_loss << '\n'
      << "best_epoch: " << report.best_epoch << '\n'
      << "best_val_loss: " << best.val_loss << '\n';
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"rbnkit: recurrent bottleneck features for unit-level "
               "parametric speech synthesis"};
  app.name("rbnkit");
  app.require_subcommand(1);
  std::function<void()> action;

  // gen-corpus
  struct {
    std::uint64_t seed = 1;
    std::size_t units = 0, dim = 0, labels = 8, text_dim = kDefaultTextDim;
    std::uint64_t start_index = 0;
    std::string out, text_out, hist;
  } gen;
  {
    auto* cmd = app.add_subcommand("gen-corpus",
                                   "write a deterministic synthetic corpus");
    cmd->add_option("--seed", gen.seed, "random seed")->capture_default_str();
    cmd->add_option("--units", gen.units, "number of units")->required();
    cmd->add_option("--dim", gen.dim, "frame dimension")->required();
    cmd->add_option("--labels", gen.labels, "number of unit labels")
        ->capture_default_str();
    cmd->add_option("--text-dim", gen.text_dim, "text feature dimension")
        ->capture_default_str();
    cmd->add_option("--start-index", gen.start_index,
                    "index of the first unit (disjoint splits of one seed)")
        ->capture_default_str();
    cmd->add_option("--out", gen.out, "output UFSB corpus")->required();
    cmd->add_option("--text-out", gen.text_out, "output UTXF text features")
        ->required();
    cmd->add_option("--hist", gen.hist, "optional duration histogram CSV");
    cmd->callback([&] {
      action = [&] {
        SyntheticCorpusOptions opt;
        opt.text_dim = gen.text_dim;
        opt.start_index = gen.start_index;
        auto [corpus, text] = GenerateSyntheticCorpus(gen.seed, gen.units,
                                                      gen.dim, gen.labels, opt);
        WriteCorpus(corpus, gen.out);
        WriteTextFeatures(text, gen.text_out);
        if (!gen.hist.empty()) ExportHistogram(DurationHistogram(corpus), gen.hist);
        out << "units: " << corpus.num_units() << "\nframes: "
            << corpus.total_frames() << '\n';
      };
    });
  }

  // train-rae
  struct {
    std::string corpus, val, ckpt, report;
    std::size_t hidden = 500;
    double in_var = 0.01, out_var = 0.01;
    bool normalize = true;
    TrainFlags train;
  } rae;
  {
    auto* cmd = app.add_subcommand(
        "train-rae", "train the recurrent autoencoder (teacher forced)");
    cmd->add_option("--corpus", rae.corpus, "training UFSB corpus")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--val", rae.val, "validation UFSB corpus")
        ->check(CLI::ExistingFile);
    cmd->add_option("--hidden", rae.hidden, "hidden/context size")
        ->capture_default_str();
    cmd->add_option("--in-var", rae.in_var, "input weight init variance")
        ->capture_default_str();
    cmd->add_option("--out-var", rae.out_var, "output weight init variance")
        ->capture_default_str();
    cmd->add_flag("--normalize,!--no-normalize", rae.normalize,
                  "map frames to [0.01, 0.99] using training statistics")
        ->capture_default_str();
    cmd->add_option("--ckpt", rae.ckpt, "output checkpoint")->required();
    cmd->add_option("--report", rae.report,
                    "training report path (default <ckpt>.report)");
    rae.train.Register(cmd);
    cmd->callback([&] {
      action = [&] {
        Corpus train = ReadCorpus(rae.corpus);
        Corpus val;
        val.dim = train.dim;
        if (!rae.val.empty()) {
          val = ReadCorpus(rae.val);
          if (!val.units.empty() && val.dim != train.dim) {
            throw DimensionError("--val corpus has dimension " +
                                 std::to_string(val.dim) + ", --corpus has " +
                                 std::to_string(train.dim));
          }
          val.split = Split::kValidation;
        }
        RaeModel model;
        if (rae.normalize) {
          model.norm = FitMinMax(train);
          train = ApplyMinMax(train, *model.norm);
          val = ApplyMinMax(val, *model.norm);
        }
        RaeModelConfig mc;
        mc.hidden_dim = rae.hidden;
        mc.init.in_variance = rae.in_var;
        mc.init.out_variance = rae.out_var;
        RaeTrainResult res = TrainRae(train, val, mc, rae.train.Config());
        model.params = std::move(res.params);
        SaveRae(model, rae.ckpt);
        WriteText(rae.report.empty() ? DefaultReportPath(rae.ckpt)
                                     : rae.report,
                  res.report.ToText());
        PrintTrainSummary(out, res.report);
      };
    });
  }

  // encode
  struct {
    std::string corpus, ckpt, out;
  } enc;
  {
    auto* cmd = app.add_subcommand("encode", "corpus -> RBN vectors");
    cmd->add_option("--corpus", enc.corpus, "UFSB corpus")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--ckpt", enc.ckpt, "EDFVC checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", enc.out, "output URBN file")->required();
    cmd->callback([&] {
      action = [&] {
        const RaeModel model = LoadRae(enc.ckpt);
        const Corpus corpus = NormalizedFor(model, ReadCorpus(enc.corpus));
        const std::vector<RbnRecord> rbn = ExtractRbn(model.params, corpus);
        WriteRbn(rbn, enc.out);
        out << "records: " << rbn.size() << '\n';
      };
    });
  }

  // decode
  struct {
    std::string rbn, ckpt, out, labels_from;
  } dec;
  {
    auto* cmd = app.add_subcommand(
        "decode", "RBN vectors -> frames (free-running decoder)");
    cmd->add_option("--rbn", dec.rbn, "URBN file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--ckpt", dec.ckpt, "EDFVC checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", dec.out, "output UFSB corpus")->required();
    cmd->add_option("--labels-from", dec.labels_from,
                    "copy unit labels from this corpus")
        ->check(CLI::ExistingFile);
    cmd->callback([&] {
      action = [&] {
        const RaeModel model = LoadRae(dec.ckpt);
        const std::vector<RbnRecord> rbn = ReadRbn(dec.rbn);
        std::optional<Corpus> labels;
        if (!dec.labels_from.empty()) {
          labels = ReadCorpus(dec.labels_from);
          CheckRowCount(labels->num_units(), rbn.size(), "--labels-from",
                        "--rbn");
        }
        Corpus pred;
        pred.dim = model.params.feature_dim();
        for (std::size_t i = 0; i < rbn.size(); ++i) {
          if (rbn[i].context.size() != model.params.hidden_dim()) {
            throw DimensionError("--rbn vectors have H=" +
                                 std::to_string(rbn[i].context.size()) +
                                 " but --ckpt has H=" +
                                 std::to_string(model.params.hidden_dim()));
          }
          Matrix y = DecodeFreeRunning(model.params, rbn[i].context,
                                       rbn[i].num_frames);
          if (model.norm) y = InvertMinMax(y, *model.norm);
          pred.units.push_back(
              {labels ? labels->units[i].label_id : 0u, std::move(y)});
        }
        WriteCorpus(pred, dec.out);
        out << "units: " << pred.num_units() << '\n';
      };
    });
  }

  // deltas
  struct {
    std::string corpus, out;
  } dd;
  {
    auto* cmd = app.add_subcommand(
        "deltas", "append delta and double-delta features");
    cmd->add_option("--corpus", dd.corpus, "static UFSB corpus")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", dd.out, "output UFSB corpus")->required();
    cmd->callback([&] {
      action = [&] {
        const Corpus c = WithDeltas(ReadCorpus(dd.corpus));
        WriteCorpus(c, dd.out);
        out << "dim: " << c.dim << '\n';
      };
    });
  }

  // train-dnn
  struct {
    std::string text, rbn, corpus, val_text, val_rbn, val_corpus, arch, ckpt,
        report;
    bool frame_level = false, position = false, normalize = true;
    TrainFlags train;
  } dnn;
  {
    auto* cmd = app.add_subcommand(
        "train-dnn", "train a text -> RBN (or, with --frame-level, text -> "
                     "frame) regressor");
    cmd->add_option("--text", dnn.text, "UTXF text features")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--rbn", dnn.rbn, "URBN targets (unit level)")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--frame-level", dnn.frame_level,
                  "train the frame-level baseline on --corpus frames");
    cmd->add_option("--corpus", dnn.corpus, "UFSB frame targets")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--position", dnn.position,
                  "append a frame-position coordinate to upsampled text");
    cmd->add_flag("--normalize,!--no-normalize", dnn.normalize,
                  "normalise frame-level targets to [0.01, 0.99]")
        ->capture_default_str();
    cmd->add_option("--val-text", dnn.val_text, "validation UTXF")
        ->check(CLI::ExistingFile);
    cmd->add_option("--val-rbn", dnn.val_rbn, "validation URBN")
        ->check(CLI::ExistingFile);
    cmd->add_option("--val-corpus", dnn.val_corpus, "validation UFSB")
        ->check(CLI::ExistingFile);
    cmd->add_option("--arch", dnn.arch,
                    "layer string, default \"<in>L 1000R 1000R <out>L\"");
    cmd->add_option("--ckpt", dnn.ckpt, "output checkpoint")->required();
    cmd->add_option("--report", dnn.report,
                    "training report path (default <ckpt>.report)");
    dnn.train.Register(cmd);
    cmd->callback([&] {
      action = [&] {
        const TextFeatureTable text = ReadTextFeatures(dnn.text);
        DnnModel model;
        model.frame_position = dnn.frame_level && dnn.position;
        Matrix x, y, vx, vy;
        if (dnn.frame_level) {
          if (dnn.corpus.empty()) {
            throw InvalidArgument("--frame-level requires --corpus");
          }
          model.target = DnnTarget::kFrames;
          Corpus corpus = ReadCorpus(dnn.corpus);
          CheckRowCount(text.num_units(), corpus.num_units(), "--text",
                        "--corpus");
          if (dnn.normalize) {
            model.target_norm = FitMinMax(corpus);
            corpus = ApplyMinMax(corpus, *model.target_norm);
          }
          FrameDataset ds = BuildFrameDataset(text, corpus, model.frame_position);
          x = std::move(ds.inputs);
          y = std::move(ds.targets);
          if (!dnn.val_text.empty() && !dnn.val_corpus.empty()) {
            const TextFeatureTable vt = ReadTextFeatures(dnn.val_text);
            Corpus vc = ReadCorpus(dnn.val_corpus);
            CheckRowCount(vt.num_units(), vc.num_units(), "--val-text",
                          "--val-corpus");
            if (model.target_norm) vc = ApplyMinMax(vc, *model.target_norm);
            FrameDataset vds = BuildFrameDataset(vt, vc, model.frame_position);
            vx = std::move(vds.inputs);
            vy = std::move(vds.targets);
          }
        } else {
          if (dnn.rbn.empty()) {
            throw InvalidArgument("unit-level training requires --rbn");
          }
          const std::vector<RbnRecord> rbn = ReadRbn(dnn.rbn);
          CheckRowCount(text.num_units(), rbn.size(), "--text", "--rbn");
          x = text.rows;
          y = RbnMatrix(rbn);
          if (!dnn.val_text.empty() && !dnn.val_rbn.empty()) {
            const TextFeatureTable vt = ReadTextFeatures(dnn.val_text);
            const std::vector<RbnRecord> vr = ReadRbn(dnn.val_rbn);
            CheckRowCount(vt.num_units(), vr.size(), "--val-text", "--val-rbn");
            vx = vt.rows;
            vy = RbnMatrix(vr);
          }
        }
        if (x.rows() == 0) throw InvalidArgument("empty DNN training set");
        const std::string arch_text =
            dnn.arch.empty() ? std::to_string(x.cols()) + "L 1000R 1000R " +
                                   std::to_string(y.cols()) + "L"
                             : dnn.arch;
        const ArchSpec arch = ParseArch(arch_text);
        if (arch.input_dim() != x.cols() || arch.output_dim() != y.cols()) {
          throw DimensionError("--arch \"" + arch_text + "\" maps " +
                               std::to_string(arch.input_dim()) + " -> " +
                               std::to_string(arch.output_dim()) +
                               " but the data is " + std::to_string(x.cols()) +
                               " -> " + std::to_string(y.cols()));
        }
        DnnTrainResult res = TrainDnn(x, y, vx, vy, arch, dnn.train.Config());
        model.params = std::move(res.params);
        SaveDnn(model, dnn.ckpt);
        WriteText(dnn.report.empty() ? DefaultReportPath(dnn.ckpt)
                                     : dnn.report,
                  res.report.ToText());
        out << "training_rows: " << x.rows() << '\n';
        PrintTrainSummary(out, res.report);
      };
    });
  }

  // synth
  struct {
    std::string text, dnn, rae, durations, durations_from, out;
    bool frame_level = false;
  } syn;
  {
    auto* cmd = app.add_subcommand(
        "synth", "text -> RBN -> decoded frames (or frame-level baseline)");
    cmd->add_option("--text", syn.text, "UTXF text features")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--dnn", syn.dnn, "FFDNN checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--rae", syn.rae, "EDFVC checkpoint (unit level)")
        ->check(CLI::ExistingFile);
    auto* dur = cmd->add_option("--durations", syn.durations,
                                "text file of per-unit frame counts")
                    ->check(CLI::ExistingFile);
    auto* from = cmd->add_option("--durations-from", syn.durations_from,
                                 "take frame counts from this corpus")
                     ->check(CLI::ExistingFile);
    dur->excludes(from);
    cmd->add_flag("--frame-level", syn.frame_level,
                  "run the frame-level baseline DNN");
    cmd->add_option("--out", syn.out, "output UFSB corpus")->required();
    cmd->callback([&] {
      action = [&] {
        const TextFeatureTable text = ReadTextFeatures(syn.text);
        std::vector<std::size_t> durations;
        if (!syn.durations.empty()) {
          durations = ReadDurationList(syn.durations);
        } else if (!syn.durations_from.empty()) {
          durations = Durations(ReadCorpus(syn.durations_from));
        } else {
          throw InvalidArgument("--durations or --durations-from is required");
        }
        CheckRowCount(durations.size(), text.num_units(), "durations",
                      "--text");
        const DnnModel dnn_model = LoadDnn(syn.dnn);
        if (dnn_model.params.input_dim() !=
            text.dim() + (dnn_model.frame_position ? 1 : 0)) {
          throw DimensionError("--dnn expects " +
                               std::to_string(dnn_model.params.input_dim()) +
                               "-dim input, --text has " +
                               std::to_string(text.dim()));
        }
        Corpus pred;
        if (syn.frame_level) {
          if (dnn_model.target != DnnTarget::kFrames) {
            throw KindMismatchError(
                "--dnn was trained on RBN targets, not frames");
          }
          pred = FrameLevelSynth(dnn_model.params, text, durations,
                                 dnn_model.frame_position);
          if (dnn_model.target_norm) {
            pred = InvertMinMax(pred, *dnn_model.target_norm);
          }
        } else {
          if (syn.rae.empty()) {
            throw InvalidArgument("unit-level synthesis requires --rae");
          }
          if (dnn_model.target != DnnTarget::kRbn) {
            throw KindMismatchError(
                "--dnn was trained on frames; pass --frame-level");
          }
          const RaeModel rae_model = LoadRae(syn.rae);
          pred = SynthPipeline(dnn_model.params, rae_model.params, text,
                               durations);
          if (rae_model.norm) pred = InvertMinMax(pred, *rae_model.norm);
        }
        WriteCorpus(pred, syn.out);
        out << "units: " << pred.num_units()
            << "\nframes: " << pred.total_frames() << '\n';
      };
    });
  }

  // eval-mcd
  struct {
    std::string ref, pred, report, per_unit;
    std::size_t start_dim = 1, static_dim = 0;
  } ev;
  {
    auto* cmd = app.add_subcommand("eval-mcd", "score predicted frames");
    cmd->add_option("--ref", ev.ref, "reference UFSB corpus")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--pred", ev.pred, "predicted UFSB corpus")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--start-dim", ev.start_dim,
                    "first scored coefficient (0 or 1)")
        ->capture_default_str()
        ->check(CLI::Range(0, 1));
    cmd->add_option("--static-dim", ev.static_dim,
                    "strip delta features, keeping this many static dims");
    cmd->add_option("--report", ev.report, "also write the report here");
    cmd->add_option("--per-unit", ev.per_unit,
                    "write per-unit MCD values (one per line)");
    cmd->callback([&] {
      action = [&] {
        Corpus ref = ReadCorpus(ev.ref);
        Corpus pred = ReadCorpus(ev.pred);
        if (ev.static_dim > 0) {
          ref = StripDeltas(ref, ev.static_dim);
          pred = StripDeltas(pred, ev.static_dim);
        }
        const EvalReport report = Evaluate(ref, pred, ev.start_dim);
        const std::string text = FormatReport(report);
        out << text;
        if (!ev.report.empty()) WriteText(ev.report, text);
        if (!ev.per_unit.empty()) {
          ExportMatrix(Matrix(report.per_unit_mcd.size(), 1,
                              report.per_unit_mcd),
                       ev.per_unit);
        }
      };
    });
  }

  // grad-check
  struct {
    std::uint64_t seed = 1;
    std::size_t seeds = 5;
  } gc;
  int gc_status = kExitOk;
  {
    auto* cmd = app.add_subcommand(
        "grad-check", "compare analytic gradients to finite differences");
    cmd->add_option("--seed", gc.seed, "first seed")->capture_default_str();
    cmd->add_option("--seeds", gc.seeds, "number of seeds")
        ->capture_default_str();
    cmd->callback([&] {
      action = [&] {
        std::vector<GradCheckResult> all =
            RunEdFvcGradCheckSuite(gc.seed, gc.seeds);
        std::vector<GradCheckResult> dnn_res =
            RunDnnGradCheckSuite(gc.seed, gc.seeds);
        all.insert(all.end(), dnn_res.begin(), dnn_res.end());
        for (const GradCheckResult& r : all) {
          out << (r.Passed() ? "PASS " : "FAIL ") << r.name
              << " max_rel_error=" << r.max_rel_error
              << " worst=" << r.worst_entry << '\n';
          if (!r.Passed()) gc_status = kExitFailure;
        }
      };
    });
  }

  // export
  struct {
    std::string corpus, out;
    std::size_t unit = 0;
    bool histogram = false;
  } ex;
  {
    auto* cmd = app.add_subcommand(
        "export", "write one unit's frames, or the duration histogram, as CSV");
    cmd->add_option("--corpus", ex.corpus, "UFSB corpus")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--unit", ex.unit, "unit index")->capture_default_str();
    cmd->add_flag("--histogram", ex.histogram,
                  "export (duration,count) pairs instead");
    cmd->add_option("--out", ex.out, "output CSV")->required();
    cmd->callback([&] {
      action = [&] {
        const Corpus c = ReadCorpus(ex.corpus);
        if (ex.histogram) {
          ExportHistogram(DurationHistogram(c), ex.out);
          return;
        }
        if (ex.unit >= c.num_units()) {
          throw InvalidArgument("--unit " + std::to_string(ex.unit) +
                                " out of range for " +
                                std::to_string(c.num_units()) + " units");
        }
        ExportMatrix(c.units[ex.unit].frames, ex.out);
      };
    });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  try {
    if (action) action();
  } catch (const std::exception& e) {
    err << "rbnkit: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return gc_status;
}

}  // namespace rbn
