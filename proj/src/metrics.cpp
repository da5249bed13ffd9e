#include "riskad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace riskad {

double auc(const Eigen::VectorXd& scores, const Eigen::VectorXi& labels) {
  const auto n = scores.size();
  if (labels.size() != n) throw std::invalid_argument("auc: scores/labels size mismatch");
  if (n == 0) throw std::invalid_argument("auc: empty input");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(scores[i])) throw std::invalid_argument("auc: non-finite score");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return scores[a] < scores[b]; });

  // average ranks over tie groups; rank sums stay exact in doubles
  long n_pos = 0;
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] > 0) {
        ++n_pos;
        rank_sum_pos += avg_rank;
      }
    }
    i = j + 1;
  }
  const long n_neg = static_cast<long>(n) - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("auc: both classes must be present");
  }
  // Rank sums are exact in doubles (half-integer steps), so the doubled
  // Mann-Whitney count A and the pair count B are exact integers. Evaluating
  // the smaller of A/B and its complement keeps auc(s) + auc(-s) exactly 1:
  // negating the scores maps A to B - A, and x + (1 - x) rounds back to 1.
  const double a2 =
      2.0 * rank_sum_pos - static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  const double b2 = 2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg);
  return a2 <= b2 - a2 ? a2 / b2 : 1.0 - (b2 - a2) / b2;
}

std::vector<std::pair<double, double>> roc_points(const Eigen::VectorXd& scores,
                                                  const Eigen::VectorXi& labels) {
  const auto n = scores.size();
  if (labels.size() != n || n == 0) throw std::invalid_argument("roc_points: bad input");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return scores[a] > scores[b]; });
  long n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < n; ++i) (labels[i] > 0 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("roc_points: single-class labels");

  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(0.0, 0.0);
  long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) (labels[order[k]] > 0 ? tp : fp)++;
    pts.emplace_back(static_cast<double>(fp) / static_cast<double>(n_neg),
                     static_cast<double>(tp) / static_cast<double>(n_pos));
    i = j + 1;
  }
  return pts;
}

Aggregate aggregate(const std::vector<double>& values) {
  const auto n = values.size();
  if (n < 2) throw std::invalid_argument("aggregate: need at least 2 trials for a standard error");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n))};
}

Aggregate aggregate(const std::vector<TrialResult>& results) {
  std::vector<double> aucs;
  aucs.reserve(results.size());
  for (const auto& r : results) aucs.push_back(r.auc);
  return aggregate(aucs);
}

}  // namespace riskad
