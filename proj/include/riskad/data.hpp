#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace riskad {

// Labels are +1 (normal) / -1 (anomaly) for binary datasets, or arbitrary
// nonnegative class ids for multiclass sources fed to make_ad_setup.
struct LabeledDataset {
  Eigen::MatrixXd X;  // n x d, rows are samples
  Eigen::VectorXi y;
  std::string name;
};

enum class LabelEncoding {
  ZeroOne,    // 0 = normal, 1 = anomaly (on-disk convention)
  PlusMinus,  // +1 = normal, -1 = anomaly
  ClassIds,   // multiclass ids, kept as-is
};

struct CsvSchema {
  LabelEncoding encoding = LabelEncoding::ZeroOne;
  // Header row is detected automatically: a first line with any non-numeric
  // field is skipped.
};

LabeledDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

// Writes features plus a final 0/1 label column (1 = anomaly).
void save_csv(const LabeledDataset& ds, const std::filesystem::path& path);

struct SplitProtocol {
  double train_ratio = 0.7;
  double labeled_fraction = 0.05;
  int trials = 30;
  std::uint64_t seed = 0;
};

/**
 * A (P, N, U, test) partition of one source dataset. The hidden labels of U
 * are retained for oracle checks only; training code must not read them.
 */
class SemiSupSplit {
 public:
  Eigen::MatrixXd P;       // labeled positives (normal)
  Eigen::MatrixXd N;       // labeled negatives (anomalies)
  Eigen::MatrixXd U;       // unlabeled mix
  Eigen::MatrixXd test_X;
  Eigen::VectorXi test_y;
  double true_pi_n = 0.0;  // pollution ratio of the source dataset

  std::vector<std::size_t> p_idx, n_idx, u_idx, test_idx;  // rows of the source

  SemiSupSplit() = default;
  SemiSupSplit(Eigen::MatrixXd p, Eigen::MatrixXd n, Eigen::MatrixXd u, Eigen::MatrixXd tx,
               Eigen::VectorXi ty, Eigen::VectorXi u_labels, double pi_n)
      : P(std::move(p)), N(std::move(n)), U(std::move(u)), test_X(std::move(tx)),
        test_y(std::move(ty)), true_pi_n(pi_n), u_labels_(std::move(u_labels)) {}

  // Oracle-only accessor; not part of the training interface.
  const Eigen::VectorXi& oracle_u_labels() const { return u_labels_; }

 private:
  Eigen::VectorXi u_labels_;
};

// Deterministic function of (protocol.seed, trial_index): train/test split at
// train_ratio, then a labeled_fraction of the train rows drawn uniformly
// (not stratified) and divided into P/N by their true labels; the rest is U.
// Resamples up to 100 times if the labeled draw misses a class.
SemiSupSplit make_trial_split(const LabeledDataset& ds, const SplitProtocol& protocol,
                              int trial_index);

// Anomaly-detection setup from multiclass data: the positive class is kept
// in full, anomalies are drawn uniformly from all other classes so that
// anomalies/total is target_pi_n up to rounding.
LabeledDataset make_ad_setup(const LabeledDataset& multiclass_ds, int positive_class,
                             double target_pi_n, std::uint64_t seed);

// Positives ~ N(0, I_d), anomalies ~ N(mean_sep * e1, I_d).
LabeledDataset synth_gaussian(long n, long d, double pi_n, double mean_sep, std::uint64_t seed);

// Analytic AUC of the optimal detector for synth_gaussian: Phi(mean_sep / sqrt(2)).
double gaussian_bayes_auc(double mean_sep);

enum class ScaleMode { UnitMaxL2, UnitMaxLinf, None };

struct FeatureScale {
  ScaleMode mode = ScaleMode::None;
  double divisor = 1.0;
  bool degenerate = false;  // all-zero reference rows; scaling skipped

  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const { return X / divisor; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return x / divisor; }
};

// Divisor from all rows of the dataset.
FeatureScale scale_features(LabeledDataset& ds, ScaleMode mode);

// Divisor from the labeled negatives (falling back to all training rows when
// N is empty), applied to P, N, U and test so the chosen norm constant is 1.
FeatureScale scale_features(SemiSupSplit& split, ScaleMode mode);

}  // namespace riskad
