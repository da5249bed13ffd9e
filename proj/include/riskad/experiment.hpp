#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "riskad/data.hpp"
#include "riskad/deep.hpp"
#include "riskad/metrics.hpp"
#include "riskad/shallow.hpp"

namespace riskad {

enum class Method { RadShallow, RadDeep, PuShallow, PnShallow };

Method method_by_name(std::string_view name);
std::string_view method_name(Method m);

struct ExperimentConfig {
  Method method = Method::RadShallow;
  std::string loss = "modified-huber";
  double a = 0.1;
  double pi_p_e = 0.8;
  SplitProtocol protocol;
  RegSpec reg;                   // shallow methods
  ShallowOptOptions shallow_opt;
  DeepTrainConfig deep;          // rad-deep
  int threads = 0;               // 0: hardware default; RISKAD_THREADS caps either way
};

struct BenchmarkOutput {
  std::vector<TrialResult> trials;  // ordered by trial index
  Aggregate agg{0.0, 0.0};
};

// One train/score/AUC pass per trial, trials in a worker pool. Any trial
// failure aborts with the trial index and cause.
BenchmarkOutput run_benchmark(const LabeledDataset& ds, const ExperimentConfig& cfg);

// Runs one trial and returns (model AUC on the trial's test set, split).
double run_trial(const LabeledDataset& ds, const ExperimentConfig& cfg, int trial);

enum class SweepAxis { A, PiPE };

struct SweepRow {
  double value;
  BenchmarkOutput output;
};

std::vector<SweepRow> run_sweep(const LabeledDataset& ds, const ExperimentConfig& cfg,
                                SweepAxis axis, const std::vector<double>& grid);

struct DiagnoseReport {
  double c = 0.0;
  double c_inf = 0.0;
  double lambda_l2 = 0.0;
  double lambda_l1 = 0.0;
  double loss_sup = 0.0;        // C_ell used for the bias bound
  bool loss_sup_exact = false;  // true for bounded losses
  double rho = 0.0;
  double eps_g = 0.0;
  bool condition_constants_ok = false;
  bool symmetric_ok = false;
  bool linear_odd_ok = false;
  long n_n = 0, n_u = 0;
};

// Norm constants, auto lambdas, the bias bound under (rho, C_ell) and the
// loss-condition checks for the configured run, computed on trial 0's split.
DiagnoseReport diagnose(const LabeledDataset& ds, const ExperimentConfig& cfg, double rho,
                        std::optional<double> loss_sup);

// Deterministic CSV/table writers (fixed ordering and number formatting).
void write_trials_csv(const std::vector<SweepRow>& rows, const std::string& dataset,
                      const ExperimentConfig& cfg, std::optional<SweepAxis> axis,
                      const std::filesystem::path& path);
std::string format_table(const std::vector<SweepRow>& rows, const std::string& dataset,
                         const ExperimentConfig& cfg, std::optional<SweepAxis> axis);

void write_split_indices(const SemiSupSplit& split, const std::filesystem::path& path);

}  // namespace riskad
