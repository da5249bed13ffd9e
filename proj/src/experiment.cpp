#include "riskad/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "riskad/regselect.hpp"
#include "riskad/rng.hpp"

namespace riskad {

namespace {

// shortest representation that parses back to the same double
std::string fmt(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string fmt_mean_se(const Aggregate& agg) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f(%.2f)", agg.mean, agg.se * 100.0);
  return buf;
}

int pool_size(int requested, int trials) {
  int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* cap = std::getenv("RISKAD_THREADS")) {
    const int c = std::atoi(cap);
    if (c >= 1 && c < threads) threads = c;
  }
  return std::min(threads, trials);
}

}  // namespace

Method method_by_name(std::string_view name) {
  if (name == "rad-shallow") return Method::RadShallow;
  if (name == "rad-deep") return Method::RadDeep;
  if (name == "pu-shallow") return Method::PuShallow;
  if (name == "pn-shallow") return Method::PnShallow;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::RadShallow: return "rad-shallow";
    case Method::RadDeep: return "rad-deep";
    case Method::PuShallow: return "pu-shallow";
    case Method::PnShallow: return "pn-shallow";
  }
  throw std::logic_error("unreachable method");
}

double run_trial(const LabeledDataset& ds, const ExperimentConfig& cfg, int trial) {
  const LossSpec& loss = loss_by_name(cfg.loss);
  const RiskConfig risk(cfg.a, Priors(cfg.pi_p_e), Estimator::RadUnbiased);
  const SemiSupSplit split = make_trial_split(ds, cfg.protocol, trial);

  Eigen::VectorXd scores;
  switch (cfg.method) {
    case Method::RadShallow:
    case Method::PuShallow:
    case Method::PnShallow: {
      const ShallowObjective obj = cfg.method == Method::RadShallow ? ShallowObjective::Rad
                                   : cfg.method == Method::PuShallow ? ShallowObjective::Pu
                                                                     : ShallowObjective::Pn;
      const auto trained = train_shallow(split, loss, risk, cfg.reg, cfg.shallow_opt, obj);
      scores = trained.model.score(split.test_X);
      break;
    }
    case Method::RadDeep: {
      DeepTrainConfig deep = cfg.deep;
      deep.seed = derive_seed(derive_seed(cfg.protocol.seed, static_cast<std::uint64_t>(trial)),
                              0x1D5EEDULL);
      const auto trained = train_deep(split, loss, risk, deep);
      scores = trained.model.forward(split.test_X);
      break;
    }
  }
  return auc(scores, split.test_y);
}

BenchmarkOutput run_benchmark(const LabeledDataset& ds, const ExperimentConfig& cfg) {
  const int trials = cfg.protocol.trials;
  if (trials < 1) throw std::invalid_argument("benchmark needs at least one trial");

  BenchmarkOutput out;
  out.trials.resize(static_cast<std::size_t>(trials));

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load()) {
      const int t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        const double value = run_trial(ds, cfg, t);
        out.trials[static_cast<std::size_t>(t)] = TrialResult{
            ds.name, std::string(method_name(cfg.method)), cfg.loss, cfg.a, cfg.pi_p_e, t, value};
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!failed.exchange(true)) {
          error = "trial " + std::to_string(t) + " failed: " + e.what();
        }
        return;
      }
    }
  };

  const int threads = pool_size(cfg.threads, trials);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error(error);

  if (trials >= 2) out.agg = aggregate(out.trials);
  else out.agg = Aggregate{out.trials[0].auc, 0.0};
  return out;
}

std::vector<SweepRow> run_sweep(const LabeledDataset& ds, const ExperimentConfig& cfg,
                                SweepAxis axis, const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep grid must be non-empty");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double v : grid) {
    ExperimentConfig point = cfg;
    (axis == SweepAxis::A ? point.a : point.pi_p_e) = v;
    rows.push_back({v, run_benchmark(ds, point)});
  }
  return rows;
}

DiagnoseReport diagnose(const LabeledDataset& ds, const ExperimentConfig& cfg, double rho,
                        std::optional<double> loss_sup) {
  const LossSpec& loss = loss_by_name(cfg.loss);
  const RiskConfig risk(cfg.a, Priors(cfg.pi_p_e), Estimator::RadNonNeg);

  SemiSupSplit split = make_trial_split(ds, cfg.protocol, 0);
  scale_features(split, cfg.reg.kind == RegKind::L2 ? ScaleMode::UnitMaxL2
                                                    : ScaleMode::UnitMaxLinf);
  const Eigen::MatrixXd neg = augment_intercept(split.N);

  DiagnoseReport rep;
  const NormConstants nc = data_norm_constants(neg);
  rep.c = nc.c;
  rep.c_inf = nc.c_inf;
  rep.lambda_l2 = lambda_min_l2(cfg.a, loss, risk.priors.pi_n, nc.c);
  rep.lambda_l1 = lambda_min_l1(cfg.a, loss, risk.priors.pi_n, nc.c_inf);
  rep.loss_sup_exact = loss.bounded && !loss_sup;
  rep.loss_sup = loss_sup.value_or(1.0);  // bounded losses are capped by 1
  rep.rho = rho;
  rep.n_n = split.N.rows();
  rep.n_u = split.U.rows();
  rep.eps_g = bias_bound(risk, rep.loss_sup, rho, rep.n_n, rep.n_u);

  const auto grid = condition_grid();
  rep.condition_constants_ok = check_condition_constants(loss, grid);
  const auto structural = check_structural(loss, grid);
  rep.symmetric_ok = structural.symmetric_ok;
  rep.linear_odd_ok = structural.linear_odd_ok;
  return rep;
}

void write_trials_csv(const std::vector<SweepRow>& rows, const std::string& dataset,
                      const ExperimentConfig& cfg, std::optional<SweepAxis> axis,
                      const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "dataset,method,loss,a,pi_p_e,trial,auc\n";
  for (const auto& row : rows) {
    for (const auto& t : row.output.trials) {
      out << t.dataset << ',' << t.method << ',' << t.loss << ',' << fmt(t.a) << ','
          << fmt(t.pi_p_e) << ',' << t.trial << ',' << fmt(t.auc) << '\n';
    }
  }
  // aggregate rows: trial column carries "mean" and "se" markers
  for (const auto& row : rows) {
    const auto& t0 = row.output.trials.front();
    out << dataset << ',' << t0.method << ',' << t0.loss << ',' << fmt(t0.a) << ','
        << fmt(t0.pi_p_e) << ",mean," << fmt(row.output.agg.mean) << '\n';
    out << dataset << ',' << t0.method << ',' << t0.loss << ',' << fmt(t0.a) << ','
        << fmt(t0.pi_p_e) << ",se," << fmt(row.output.agg.se) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
  (void)cfg;
  (void)axis;
}

std::string format_table(const std::vector<SweepRow>& rows, const std::string& dataset,
                         const ExperimentConfig& cfg, std::optional<SweepAxis> axis) {
  std::ostringstream out;
  out << "dataset: " << dataset << "  method: " << method_name(cfg.method)
      << "  loss: " << cfg.loss << "  trials: " << cfg.protocol.trials << '\n';
  out << "AUC mean (SE x 10^2)\n";
  for (const auto& row : rows) {
    if (axis) {
      out << (*axis == SweepAxis::A ? "a=" : "pi_p_e=") << row.value << "  ";
    }
    out << fmt_mean_se(row.output.agg) << '\n';
  }
  return out.str();
}

void write_split_indices(const SemiSupSplit& split, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  auto dump = [&](const char* name, const std::vector<std::size_t>& idx) {
    out << name << ':';
    for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? " " : " ") << idx[i];
    out << '\n';
  };
  dump("P", split.p_idx);
  dump("N", split.n_idx);
  dump("U", split.u_idx);
  dump("test", split.test_idx);
}

}  // namespace riskad
