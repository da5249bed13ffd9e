#include <CLI11.hpp>
#include <fstream>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "riskad/experiment.hpp"
#include "riskad/metrics.hpp"
#include "riskad/model_io.hpp"
#include "riskad/regselect.hpp"

namespace {

using namespace riskad;

struct CommonOpts {
  std::string data;
  std::string loss = "modified-huber";
  double a = 0.1;
  double pi_p = 0.8;
  std::uint64_t seed = 0;
  int trials = 30;
  double train_ratio = 0.7;
  double labeled_fraction = 0.05;
  std::string reg = "l2";
  std::string lambda = "auto";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_protocol) {
  cmd->add_option("--data", o.data, "input CSV (features..., final 0/1 label, 1 = anomaly)")
      ->required();
  cmd->add_option("--loss", o.loss,
                  "hinge|double-hinge|squared|modified-huber|logistic|sigmoid|ramp");
  cmd->add_option("--a", o.a, "mixing weight in (0,1)");
  cmd->add_option("--pi-p", o.pi_p, "estimated positive-class prior in (0,1)");
  cmd->add_option("--seed", o.seed, "RNG seed");
  if (with_protocol) {
    cmd->add_option("--trials", o.trials, "number of trials");
    cmd->add_option("--train-ratio", o.train_ratio, "train fraction of each trial split");
    cmd->add_option("--labeled-fraction", o.labeled_fraction,
                    "fraction of train data that is labeled");
  }
}

ExperimentConfig build_config(const CommonOpts& o) {
  ExperimentConfig cfg;
  cfg.loss = o.loss;
  cfg.a = o.a;
  cfg.pi_p_e = o.pi_p;
  cfg.protocol.seed = o.seed;
  cfg.protocol.trials = o.trials;
  cfg.protocol.train_ratio = o.train_ratio;
  cfg.protocol.labeled_fraction = o.labeled_fraction;
  if (o.reg == "l2") cfg.reg.kind = RegKind::L2;
  else if (o.reg == "l1") cfg.reg.kind = RegKind::L1;
  else throw CLI::ValidationError("--reg must be l2 or l1");
  if (o.lambda == "auto") {
    cfg.reg.lambda_auto = true;
  } else {
    cfg.reg.lambda_auto = false;
    cfg.reg.lambda = std::stod(o.lambda);
  }
  return cfg;
}

std::vector<int> parse_layers(const std::string& spec) {
  std::vector<int> dims;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const auto field = spec.substr(start, comma == std::string::npos ? spec.size() - start
                                                                     : comma - start);
    if (!field.empty()) dims.push_back(std::stoi(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (dims.empty()) throw CLI::ValidationError("--layers needs at least one hidden size");
  return dims;
}

int run(int argc, char** argv) {
  CLI::App app{"risk-estimator based semi-supervised anomaly detection"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI/TOML file; flags override it");

  // ---- gen-data ----
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset CSV");
  std::string gen_kind = "gaussian", gen_out, gen_source;
  long gen_n = 2000, gen_d = 2;
  double gen_pi_n = 0.1, gen_sep = 4.0, gen_target = 0.1;
  int gen_pos_class = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "gaussian|ad-setup")->required();
  gen->add_option("--out", gen_out, "output CSV path")->required();
  gen->add_option("--n", gen_n, "sample count (gaussian)");
  gen->add_option("--d", gen_d, "feature dimension (gaussian)");
  gen->add_option("--pi-n", gen_pi_n, "anomaly ratio (gaussian)");
  gen->add_option("--mean-sep", gen_sep, "anomaly mean separation (gaussian)");
  gen->add_option("--source", gen_source, "multiclass CSV with class-id labels (ad-setup)");
  gen->add_option("--positive-class", gen_pos_class, "class id kept as normal (ad-setup)");
  gen->add_option("--target-pi-n", gen_target, "anomaly ratio of the setup (ad-setup)");
  gen->add_option("--seed", gen_seed, "RNG seed");

  // ---- train-shallow ----
  auto* ts = app.add_subcommand("train-shallow", "train the shallow linear model");
  CommonOpts ts_opts;
  std::string ts_out = "model.json";
  int ts_trial = 0;
  add_common(ts, ts_opts, true);
  ts->add_option("--reg", ts_opts.reg, "l2|l1");
  ts->add_option("--lambda", ts_opts.lambda, "auto or a numeric value");
  ts->add_option("--out", ts_out, "model output path");
  ts->add_option("--trial", ts_trial, "trial index of the split to train on");

  // ---- train-deep ----
  auto* td = app.add_subcommand("train-deep", "train the MLP model");
  CommonOpts td_opts;
  td_opts.loss = "logistic";
  std::string td_out = "model.json", td_layers = "64,32", td_clip = "sub";
  int td_epochs = 50, td_batch = 128, td_trial = 0;
  add_common(td, td_opts, true);
  td->add_option("--layers", td_layers, "hidden layer sizes, comma separated");
  td->add_option("--epochs", td_epochs, "training epochs");
  td->add_option("--batch", td_batch, "mini-batch size");
  td->add_option("--clip", td_clip, "sub|reverse: handling of a negative bracket");
  td->add_option("--out", td_out, "model output path");
  td->add_option("--trial", td_trial, "trial index of the split to train on");

  // ---- evaluate ----
  auto* ev = app.add_subcommand("evaluate", "score a CSV with a trained model and report AUC");
  std::string ev_model, ev_data, ev_roc;
  ev->add_option("--model", ev_model, "model JSON path")->required();
  ev->add_option("--data", ev_data, "CSV with labels")->required();
  ev->add_option("--roc-out", ev_roc, "write (fpr,tpr) points to this CSV");

  // ---- bench ----
  auto* be = app.add_subcommand("bench", "trial benchmark: split/train/score, mean(SE)");
  CommonOpts be_opts;
  std::string be_method = "rad-shallow", be_out, be_layers = "64,32", be_clip = "sub";
  std::string be_export_splits;
  int be_epochs = 50, be_batch = 128, be_threads = 0;
  add_common(be, be_opts, true);
  be->add_option("--method", be_method, "rad-shallow|rad-deep|pu-shallow|pn-shallow");
  be->add_option("--reg", be_opts.reg, "l2|l1");
  be->add_option("--lambda", be_opts.lambda, "auto or a numeric value");
  be->add_option("--layers", be_layers, "hidden sizes (rad-deep)");
  be->add_option("--epochs", be_epochs, "epochs (rad-deep)");
  be->add_option("--batch", be_batch, "batch size (rad-deep)");
  be->add_option("--clip", be_clip, "sub|reverse (rad-deep)");
  be->add_option("--threads", be_threads, "worker pool size (0 = auto; RISKAD_THREADS caps)");
  be->add_option("--out", be_out, "CSV output path");
  be->add_option("--export-splits", be_export_splits,
                 "directory for per-trial split index files");

  // ---- sweep ----
  auto* sw = app.add_subcommand("sweep", "benchmark across a grid of a or pi_p_e values");
  CommonOpts sw_opts;
  std::string sw_method = "rad-shallow", sw_axis = "a", sw_out;
  std::vector<double> sw_grid;
  int sw_threads = 0;
  add_common(sw, sw_opts, true);
  sw->add_option("--method", sw_method, "rad-shallow|rad-deep|pu-shallow|pn-shallow");
  sw->add_option("--axis", sw_axis, "a|pi-p");
  sw->add_option("--grid", sw_grid, "swept values")->required();
  sw->add_option("--reg", sw_opts.reg, "l2|l1");
  sw->add_option("--lambda", sw_opts.lambda, "auto or a numeric value");
  sw->add_option("--threads", sw_threads, "worker pool size");
  sw->add_option("--out", sw_out, "CSV output path");

  // ---- diagnose ----
  auto* di = app.add_subcommand("diagnose", "norm constants, auto lambdas, bias bound, checks");
  CommonOpts di_opts;
  double di_rho = 0.1;
  std::optional<double> di_loss_sup;
  add_common(di, di_opts, true);
  di->add_option("--reg", di_opts.reg, "l2|l1");
  di->add_option("--rho", di_rho, "assumed lower bound on Rp+(g)");
  di->add_option("--c-ell", di_loss_sup, "loss bound C_ell on the score range");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    LabeledDataset ds;
    if (gen_kind == "gaussian") {
      ds = synth_gaussian(gen_n, gen_d, gen_pi_n, gen_sep, gen_seed);
      std::printf("bayes AUC of this generator: %.6f\n", gaussian_bayes_auc(gen_sep));
    } else if (gen_kind == "ad-setup") {
      if (gen_source.empty()) throw CLI::ValidationError("ad-setup needs --source");
      CsvSchema schema;
      schema.encoding = LabelEncoding::ClassIds;
      const LabeledDataset source = load_csv(gen_source, schema);
      ds = make_ad_setup(source, gen_pos_class, gen_target, gen_seed);
    } else {
      throw CLI::ValidationError("--kind must be gaussian or ad-setup");
    }
    save_csv(ds, gen_out);
    std::printf("wrote %ld rows x %ld features to %s\n", static_cast<long>(ds.X.rows()),
                static_cast<long>(ds.X.cols()), gen_out.c_str());
    return 0;
  }

  if (ts->parsed()) {
    const ExperimentConfig cfg = build_config(ts_opts);
    const LabeledDataset ds = load_csv(ts_opts.data);
    const SemiSupSplit split = make_trial_split(ds, cfg.protocol, ts_trial);
    const RiskConfig risk(cfg.a, Priors(cfg.pi_p_e), Estimator::RadUnbiased);
    const auto trained =
        train_shallow(split, loss_by_name(cfg.loss), risk, cfg.reg, cfg.shallow_opt);
    save_model(trained.model, ts_out);
    std::printf("trained %d iterations, |grad| = %.3e, lambda = %.6g, objective = %.6g\n",
                trained.iterations, trained.grad_norm, trained.model.reg.lambda,
                trained.objective_trace.back());
    std::printf("train AUC: %.4f  wrote %s\n",
                auc(trained.model.score(split.test_X), split.test_y), ts_out.c_str());
    return 0;
  }

  if (td->parsed()) {
    const ExperimentConfig base = build_config(td_opts);
    const LabeledDataset ds = load_csv(td_opts.data);
    const SemiSupSplit split = make_trial_split(ds, base.protocol, td_trial);
    const RiskConfig risk(base.a, Priors(base.pi_p_e), Estimator::RadNonNeg);
    DeepTrainConfig deep;
    deep.hidden = parse_layers(td_layers);
    deep.epochs = td_epochs;
    deep.batch_size = td_batch;
    deep.seed = td_opts.seed;
    deep.clip_mode = td_clip == "reverse" ? ClipMode::ReverseOnNegative : ClipMode::Subgradient;
    const auto trained = train_deep(split, loss_by_name(base.loss), risk, deep);
    save_model(trained.model, td_out);
    std::printf("final objective: %.6g  test AUC: %.4f  wrote %s\n",
                trained.epoch_objectives.empty() ? 0.0 : trained.epoch_objectives.back(),
                auc(trained.model.forward(split.test_X), split.test_y), td_out.c_str());
    return 0;
  }

  if (ev->parsed()) {
    const LabeledDataset ds = load_csv(ev_data);
    Eigen::VectorXd scores;
    if (model_type(ev_model) == "linear") {
      scores = load_linear_model(ev_model).score(ds.X);
    } else {
      scores = load_mlp_model(ev_model).forward(ds.X);
    }
    std::printf("AUC: %.6f on %ld samples\n", auc(scores, ds.y), static_cast<long>(ds.X.rows()));
    if (!ev_roc.empty()) {
      std::ofstream out(ev_roc);
      out << "fpr,tpr\n";
      for (const auto& [fpr, tpr] : roc_points(scores, ds.y)) {
        out << fpr << ',' << tpr << '\n';
      }
      std::printf("wrote %s\n", ev_roc.c_str());
    }
    return 0;
  }

  if (be->parsed() || sw->parsed()) {
    const bool sweeping = sw->parsed();
    CommonOpts& opts = sweeping ? sw_opts : be_opts;
    ExperimentConfig cfg = build_config(opts);
    cfg.method = method_by_name(sweeping ? sw_method : be_method);
    cfg.threads = sweeping ? sw_threads : be_threads;
    if (!sweeping) {
      cfg.deep.hidden = parse_layers(be_layers);
      cfg.deep.epochs = be_epochs;
      cfg.deep.batch_size = be_batch;
      cfg.deep.clip_mode =
          be_clip == "reverse" ? ClipMode::ReverseOnNegative : ClipMode::Subgradient;
    }
    const LabeledDataset ds = load_csv(opts.data);

    std::vector<SweepRow> rows;
    std::optional<SweepAxis> axis;
    if (sweeping) {
      axis = sw_axis == "a" ? SweepAxis::A : SweepAxis::PiPE;
      rows = run_sweep(ds, cfg, *axis, sw_grid);
    } else {
      rows.push_back({0.0, run_benchmark(ds, cfg)});
    }

    std::fputs(format_table(rows, ds.name, cfg, axis).c_str(), stdout);
    const std::string& out_path = sweeping ? sw_out : be_out;
    if (!out_path.empty()) {
      write_trials_csv(rows, ds.name, cfg, axis, out_path);
      std::printf("wrote %s\n", out_path.c_str());
    }
    if (!sweeping && !be_export_splits.empty()) {
      std::filesystem::create_directories(be_export_splits);
      for (int t = 0; t < cfg.protocol.trials; ++t) {
        const SemiSupSplit split = make_trial_split(ds, cfg.protocol, t);
        write_split_indices(split, std::filesystem::path(be_export_splits) /
                                       ("trial" + std::to_string(t) + ".txt"));
      }
    }
    return 0;
  }

  if (di->parsed()) {
    const ExperimentConfig cfg = build_config(di_opts);
    const LabeledDataset ds = load_csv(di_opts.data);
    const LossSpec& loss = loss_by_name(cfg.loss);
    const DiagnoseReport rep = diagnose(ds, cfg, di_rho, di_loss_sup);
    std::printf("loss: %s   a: %g   pi_p_e: %g\n", cfg.loss.c_str(), cfg.a, cfg.pi_p_e);
    std::printf("norm constants (scaled train negatives + intercept): c = %.6g  c_inf = %.6g\n",
                rep.c, rep.c_inf);
    std::printf("auto lambda: l2 = %.6g  l1 = %.6g\n", rep.lambda_l2, rep.lambda_l1);
    if (!loss.bounded && !di_loss_sup) {
      std::printf("warning: %s is unbounded; C_ell defaulted to 1, pass --c-ell for a bound "
                  "valid on your score range\n", cfg.loss.c_str());
    }
    std::printf("bias bound eps_g(rho=%.4g, C_ell=%.4g, n_n=%ld, n_u=%ld) = %.6g\n", rep.rho,
                rep.loss_sup, rep.n_n, rep.n_u, rep.eps_g);
    std::printf("condition constants: %s   symmetric: %s   linear-odd: %s\n",
                rep.condition_constants_ok ? "pass" : "FAIL", rep.symmetric_ok ? "yes" : "no",
                rep.linear_odd_ok ? "yes" : "no");
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
