#include "riskad/data.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "riskad/rng.hpp"

namespace riskad {

namespace {

bool parse_double(std::string_view field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r')) --last;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::vector<std::string_view> split_fields(const std::string& line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.emplace_back(line.data() + start, line.size() - start);
      break;
    }
    fields.emplace_back(line.data() + start, comma - start);
    start = comma + 1;
  }
  return fields;
}

int decode_label(double raw, LabelEncoding enc, std::size_t line_no) {
  switch (enc) {
    case LabelEncoding::ZeroOne:
      if (raw == 0.0) return +1;
      if (raw == 1.0) return -1;
      break;
    case LabelEncoding::PlusMinus:
      if (raw == 1.0) return +1;
      if (raw == -1.0) return -1;
      break;
    case LabelEncoding::ClassIds:
      if (raw == std::floor(raw)) return static_cast<int>(raw);
      break;
  }
  throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad label value " +
                           std::to_string(raw));
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Eigen::VectorXi take_labels(const Eigen::VectorXi& y, const std::vector<std::size_t>& rows) {
  Eigen::VectorXi out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
  return out;
}

double max_row_norm(const Eigen::MatrixXd& X, ScaleMode mode) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double v = mode == ScaleMode::UnitMaxL2 ? X.row(i).norm()
                                                  : X.row(i).cwiseAbs().maxCoeff();
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

LabeledDataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  Eigen::Index d = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    const auto fields = split_fields(line);
    std::vector<double> vals(fields.size());
    bool numeric = true;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!parse_double(fields[j], vals[j])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (line_no == 1) continue;  // header row
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": non-numeric field");
    }
    if (fields.size() < 2) {
      throw std::runtime_error("csv line " + std::to_string(line_no) +
                               ": need at least one feature and a label");
    }
    for (std::size_t j = 0; j + 1 < vals.size(); ++j) {
      if (!std::isfinite(vals[j])) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": non-finite feature");
      }
    }
    if (d < 0) {
      d = static_cast<Eigen::Index>(vals.size()) - 1;
    } else if (static_cast<Eigen::Index>(vals.size()) - 1 != d) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                               std::to_string(d + 1) + " columns");
    }
    labels.push_back(decode_label(vals.back(), schema.encoding, line_no));
    vals.pop_back();
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no data rows");

  LabeledDataset ds;
  ds.name = path.stem().string();
  ds.X.resize(static_cast<Eigen::Index>(rows.size()), d);
  ds.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) ds.X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    ds.y[static_cast<Eigen::Index>(i)] = labels[i];
  }
  return ds;
}

void save_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  char buf[32];
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.X(i, j));
      out << buf << ',';
    }
    out << (ds.y[i] < 0 ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SemiSupSplit make_trial_split(const LabeledDataset& ds, const SplitProtocol& protocol,
                              int trial_index) {
  if (!(protocol.train_ratio > 0.0 && protocol.train_ratio < 1.0) ||
      !(protocol.labeled_fraction > 0.0 && protocol.labeled_fraction <= 1.0)) {
    throw std::invalid_argument("split protocol ratios must lie in (0,1)");
  }
  const auto n = static_cast<std::size_t>(ds.X.rows());
  Rng rng(derive_seed(protocol.seed, static_cast<std::uint64_t>(trial_index)));

  auto idx = permutation(n, rng);
  const auto n_train = static_cast<std::size_t>(std::llround(protocol.train_ratio * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) throw std::invalid_argument("degenerate train/test split");
  std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());

  const auto n_labeled = static_cast<std::size_t>(
      std::llround(protocol.labeled_fraction * static_cast<double>(n_train)));
  if (n_labeled == 0) throw std::invalid_argument("labeled fraction yields zero labeled samples");

  std::vector<std::size_t> p_rows, n_rows;
  std::vector<std::size_t> labeled;
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto order = permutation(n_train, rng);
    labeled.clear();
    p_rows.clear();
    n_rows.clear();
    for (std::size_t k = 0; k < n_labeled; ++k) {
      const std::size_t row = train[order[k]];
      labeled.push_back(row);
      (ds.y[static_cast<Eigen::Index>(row)] > 0 ? p_rows : n_rows).push_back(row);
    }
    if (!p_rows.empty() && !n_rows.empty()) break;
    if (attempt == 99) {
      throw std::runtime_error("could not draw both classes into the labeled fraction after "
                               "100 attempts; dataset too degenerate");
    }
  }

  std::vector<char> is_labeled(n, 0);
  for (std::size_t r : labeled) is_labeled[r] = 1;
  std::vector<std::size_t> u_rows;
  for (std::size_t r : train)
    if (!is_labeled[r]) u_rows.push_back(r);

  long anomalies = 0;
  for (Eigen::Index i = 0; i < ds.y.size(); ++i)
    if (ds.y[i] < 0) ++anomalies;

  SemiSupSplit split(take_rows(ds.X, p_rows), take_rows(ds.X, n_rows), take_rows(ds.X, u_rows),
                     take_rows(ds.X, test), take_labels(ds.y, test), take_labels(ds.y, u_rows),
                     static_cast<double>(anomalies) / static_cast<double>(n));
  split.p_idx = std::move(p_rows);
  split.n_idx = std::move(n_rows);
  split.u_idx = std::move(u_rows);
  split.test_idx = std::move(test);
  return split;
}

LabeledDataset make_ad_setup(const LabeledDataset& multiclass_ds, int positive_class,
                             double target_pi_n, std::uint64_t seed) {
  if (target_pi_n < 0.0 || target_pi_n >= 1.0) {
    throw std::invalid_argument("target_pi_n must lie in [0,1)");
  }
  std::vector<std::size_t> pos, pool;
  for (Eigen::Index i = 0; i < multiclass_ds.y.size(); ++i) {
    (multiclass_ds.y[i] == positive_class ? pos : pool).push_back(static_cast<std::size_t>(i));
  }
  if (pos.empty()) throw std::invalid_argument("positive class absent from dataset");

  // anomalies x with x / (n_pos + x) = target_pi_n
  const double n_pos = static_cast<double>(pos.size());
  const auto want = static_cast<std::size_t>(
      std::llround(target_pi_n * n_pos / (1.0 - target_pi_n)));
  if (want > pool.size()) {
    throw std::invalid_argument("not enough anomaly samples to reach target_pi_n");
  }

  Rng rng(derive_seed(seed, 0));
  shuffle_indices(pool, rng);
  pool.resize(want);

  std::vector<std::size_t> rows = pos;
  rows.insert(rows.end(), pool.begin(), pool.end());

  LabeledDataset out;
  out.name = multiclass_ds.name + "-ad" + std::to_string(positive_class);
  out.X = take_rows(multiclass_ds.X, rows);
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.y[static_cast<Eigen::Index>(i)] = i < pos.size() ? +1 : -1;
  return out;
}

LabeledDataset synth_gaussian(long n, long d, double pi_n, double mean_sep, std::uint64_t seed) {
  if (pi_n < 0.0 || pi_n >= 1.0) throw std::invalid_argument("pi_n must lie in [0,1)");
  if (n < 1 || d < 1) throw std::invalid_argument("need n >= 1 and d >= 1");
  const long n_anom = std::lround(pi_n * static_cast<double>(n));
  const long n_pos = n - n_anom;

  Rng rng(derive_seed(seed, 0));
  LabeledDataset ds;
  ds.name = "gaussian";
  ds.X.resize(n, d);
  ds.y.resize(n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < d; ++j) ds.X(i, j) = normal01(rng);
    if (i >= n_pos) ds.X(i, 0) += mean_sep;
    ds.y[i] = i < n_pos ? +1 : -1;
  }
  return ds;
}

double gaussian_bayes_auc(double mean_sep) {
  return 0.5 * std::erfc(-mean_sep / (std::numbers::sqrt2 * std::numbers::sqrt2));
}

FeatureScale scale_features(LabeledDataset& ds, ScaleMode mode) {
  FeatureScale scale{mode, 1.0, false};
  if (mode == ScaleMode::None) return scale;
  const double norm = max_row_norm(ds.X, mode);
  if (norm <= 0.0) {
    scale.degenerate = true;
    return scale;
  }
  scale.divisor = norm;
  ds.X /= norm;
  return scale;
}

FeatureScale scale_features(SemiSupSplit& split, ScaleMode mode) {
  FeatureScale scale{mode, 1.0, false};
  if (mode == ScaleMode::None) return scale;
  double norm = 0.0;
  if (split.N.rows() > 0) {
    norm = max_row_norm(split.N, mode);
  } else {
    norm = std::max(max_row_norm(split.P, mode), max_row_norm(split.U, mode));
  }
  if (norm <= 0.0) {
    scale.degenerate = true;
    return scale;
  }
  scale.divisor = norm;
  split.P /= norm;
  split.N /= norm;
  split.U /= norm;
  split.test_X /= norm;
  return scale;
}

}  // namespace riskad
