#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace riskad {

enum class LossKind { Hinge, DoubleHinge, Squared, ModifiedHuber, Logistic, Sigmoid, Ramp };

/**
 * A margin-based surrogate loss ell(t, y) = ell(z) with z = t*y, together with
 * the constants (b1, b2, b3) for which
 *
 *   ell(t,-1) - ell(t,+1) >= -b1*|t|   and   ell(t,-1) >= b2*(b3 - |t|)
 *
 * hold for every t, plus the structural flags that gate the PU/NU estimators:
 * symmetric means ell(t,+1) + ell(t,-1) = 1 identically, linear_odd means
 * ell(t,+1) - ell(t,-1) = -t identically.
 */
struct LossSpec {
  LossKind kind;
  std::string_view name;
  double b1, b2, b3;
  bool bounded;
  double lipschitz;  // of t -> ell(t,y) on |t| <= 1 for unbounded losses; diagnostics only
  bool symmetric;
  bool linear_odd;
};

const LossSpec& loss(LossKind kind);

// Accepts: hinge, double-hinge, squared, modified-huber, logistic, sigmoid, ramp.
const LossSpec& loss_by_name(std::string_view name);

std::span<const LossSpec> all_losses();

double eval_loss(const LossSpec& loss, double t, int y);

// d ell / d t. At kinks returns the left one-sided derivative in z = t*y.
double grad_loss(const LossSpec& loss, double t, int y);

// True iff both inequalities above hold at every grid point within tol,
// using the loss's stored (b1, b2, b3).
bool check_condition_constants(const LossSpec& loss, std::span<const double> grid, double tol = 1e-9);

struct StructuralCheck {
  bool symmetric_ok;
  bool linear_odd_ok;
};

// Evaluates the two structural identities on the grid. Throws if the numeric
// result disagrees with the flags stored in the spec.
StructuralCheck check_structural(const LossSpec& loss, std::span<const double> grid,
                                 double tol = 1e-12);

// Default verification grid: [-10, 10] in steps of 0.01. Every kink of the
// Table losses lies inside [-1, 1], so this range over-covers.
std::vector<double> condition_grid(double lo = -10.0, double hi = 10.0, double step = 0.01);

}  // namespace riskad
