#include "riskad/losses.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace riskad {

namespace {

constexpr double kLn2 = 0.6931471805599453094;

// Lipschitz constants are taken on |t| <= 1 for the unbounded losses
// (squared: |z-1| <= 2, modified Huber: |2(1-z)| <= 4); sigmoid's global
// slope bound is 1/4 and the scaled ramp has slope 1/2.
constexpr std::array<LossSpec, 7> kLosses{{
    {LossKind::Hinge, "hinge", 2.0, 1.0, 1.0, false, 1.0, false, false},
    {LossKind::DoubleHinge, "double-hinge", 1.0, 0.5, 1.0, false, 1.0, false, true},
    {LossKind::Squared, "squared", 2.0, 0.5, 0.5, false, 2.0, false, false},
    {LossKind::ModifiedHuber, "modified-huber", 4.0, 1.0, 0.5, false, 4.0, false, false},
    {LossKind::Logistic, "logistic", 1.0, 1.0, kLn2, false, 1.0, false, true},
    {LossKind::Sigmoid, "sigmoid", 1.0, 0.5, 1.0, true, 0.25, true, false},
    {LossKind::Ramp, "ramp", 1.0, 0.5, 1.0, true, 0.5, true, false},
}};

double margin_loss(LossKind kind, double z) {
  switch (kind) {
    case LossKind::Hinge:
      return std::max(0.0, 1.0 - z);
    case LossKind::DoubleHinge:
      return std::max({0.0, 0.5 * (1.0 - z), -z});
    case LossKind::Squared:
      return 0.5 * (z - 1.0) * (z - 1.0);
    case LossKind::ModifiedHuber: {
      if (z < -1.0) return -4.0 * z;
      const double h = std::max(0.0, 1.0 - z);
      return h * h;
    }
    case LossKind::Logistic:
      // log(1 + exp(-z)) without overflow for large |z|
      return z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
    case LossKind::Sigmoid:
      return 1.0 / (1.0 + std::exp(z));
    case LossKind::Ramp:
      return std::max(0.0, std::min(1.0, 0.5 * (1.0 - z)));
  }
  throw std::logic_error("unreachable loss kind");
}

// Left one-sided derivative in z at every kink.
double margin_grad(LossKind kind, double z) {
  switch (kind) {
    case LossKind::Hinge:
      return z <= 1.0 ? -1.0 : 0.0;
    case LossKind::DoubleHinge:
      if (z <= -1.0) return -1.0;
      return z <= 1.0 ? -0.5 : 0.0;
    case LossKind::Squared:
      return z - 1.0;
    case LossKind::ModifiedHuber:
      if (z < -1.0) return -4.0;
      return z <= 1.0 ? -2.0 * (1.0 - z) : 0.0;
    case LossKind::Logistic:
      return -1.0 / (1.0 + std::exp(z));
    case LossKind::Sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(z));
      return -s * (1.0 - s);
    }
    case LossKind::Ramp:
      if (z <= -1.0) return 0.0;
      return z <= 1.0 ? -0.5 : 0.0;
  }
  throw std::logic_error("unreachable loss kind");
}

void require_finite_input(const LossSpec& loss, double t, int y) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument(std::string(loss.name) + ": non-finite score t");
  }
  if (y != 1 && y != -1) {
    throw std::invalid_argument(std::string(loss.name) + ": label must be +1 or -1");
  }
}

}  // namespace

const LossSpec& loss(LossKind kind) { return kLosses[static_cast<std::size_t>(kind)]; }

const LossSpec& loss_by_name(std::string_view name) {
  for (const auto& l : kLosses) {
    if (l.name == name) return l;
  }
  throw std::invalid_argument("unknown loss name: " + std::string(name));
}

std::span<const LossSpec> all_losses() { return {kLosses.data(), kLosses.size()}; }

double eval_loss(const LossSpec& loss, double t, int y) {
  require_finite_input(loss, t, y);
  return margin_loss(loss.kind, t * y);
}

double grad_loss(const LossSpec& loss, double t, int y) {
  require_finite_input(loss, t, y);
  return y * margin_grad(loss.kind, t * y);
}

bool check_condition_constants(const LossSpec& loss, std::span<const double> grid, double tol) {
  if (grid.empty()) throw std::invalid_argument("check_condition_constants: empty grid");
  for (double t : grid) {
    const double lp = eval_loss(loss, t, +1);
    const double lm = eval_loss(loss, t, -1);
    if (lm - lp < -loss.b1 * std::abs(t) - tol) return false;
    if (lm < loss.b2 * (loss.b3 - std::abs(t)) - tol) return false;
  }
  return true;
}

StructuralCheck check_structural(const LossSpec& loss, std::span<const double> grid, double tol) {
  if (grid.empty()) throw std::invalid_argument("check_structural: empty grid");
  bool sym = true, lin = true;
  for (double t : grid) {
    const double lp = eval_loss(loss, t, +1);
    const double lm = eval_loss(loss, t, -1);
    if (std::abs(lp + lm - 1.0) > tol) sym = false;
    if (std::abs(lp - lm + t) > tol) lin = false;
    if (!sym && !lin) break;
  }
  if (sym != loss.symmetric || lin != loss.linear_odd) {
    throw std::logic_error(std::string(loss.name) +
                           ": structural flags disagree with numeric check");
  }
  return {sym, lin};
}

std::vector<double> condition_grid(double lo, double hi, double step) {
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>((hi - lo) / step + 1.5);
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) grid.push_back(lo + step * static_cast<double>(i));
  return grid;
}

}  // namespace riskad
