#pragma once

#include <span>

#include "plastic/objective.hpp"
#include "plastic/rng.hpp"

namespace plastic {

/// Outcome of a power-iteration probe for the top Hessian eigenvalue.
struct SharpnessReport {
  double lambda_max = 0.0;   ///< largest-magnitude eigenvalue estimate, sign kept
  int iterations_used = 0;
  double residual = 0.0;     ///< |lambda_k - lambda_{k-1}| / |lambda_k| at exit
  bool converged = false;
};

/// Empirical local Lipschitz probe of the loss surface around a point.
struct LipschitzEstimate {
  double k_hat = 0.0;   ///< max observed |L(w+d) - L(w)| / ||d||
  double radius = 0.0;
  int n_samples = 0;
};

inline constexpr double kDefaultEigTol = 1e-3;
inline constexpr int kDefaultEigMaxIter = 100;

/// Power iteration v <- Hv/||Hv|| with the Rayleigh quotient <v,Hv> as the
/// running eigenvalue estimate, started from a random unit vector drawn from
/// rng. Stops when the relative change of the estimate drops below tol or
/// after max_iter iterations. A zero Hv on the first iterate yields a
/// degenerate converged report with lambda_max = 0.
SharpnessReport max_hessian_eigenvalue(Objective& obj, std::span<const double> w,
                                       double tol, int max_iter, RngStream& rng);

/// Samples n_samples perturbation directions uniformly on the radius-sphere
/// and reports the steepest observed finite-difference slope of the loss.
LipschitzEstimate local_lipschitz_estimate(Objective& obj, std::span<const double> w,
                                           double radius, int n_samples,
                                           RngStream& rng);

}  // namespace plastic
