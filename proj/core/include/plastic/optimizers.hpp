#pragma once

#include <string>

#include "plastic/flat_vector.hpp"
#include "plastic/objective.hpp"

namespace plastic {

enum class OptimizerKind { SGD, SAM, GNP };

enum class GnpMode { Exact, FiniteDifference };

/// One training setting: a step rule plus its hyperparameters.
struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::SGD;
  double alpha = 0.01;   ///< learning rate, > 0
  double lambda = 0.0;   ///< regularization weight, >= 0 (SAM/GNP)
  double rho = 0.05;     ///< SAM ascent radius, >= 0 (0 disables the ascent)
  GnpMode gnp_mode = GnpMode::Exact;
  /// Finite-difference displacement for GNP's FD mode: 0 picks
  /// 1e-2 * (1 + ||w||) automatically, a positive value is used verbatim.
  double gnp_fd_step = 0.0;
  /// SAM regularizer reading: false = the norm term lambda*||w|| (gradient
  /// lambda*w/||w||), true = the conventional decay (lambda/2)*||w||^2
  /// (gradient lambda*w).
  bool sam_l2_squared = false;
  /// Optional explicit label; when empty, label() derives "KIND(alpha=A)".
  std::string custom_label;

  /// Display/CSV key for this setting, e.g. "SAM(alpha=0.01)".
  std::string label() const;

  /// Throws ConfigError on out-of-range hyperparameters.
  void validate() const;
};

/// Reusable step buffers; contents are dead between calls. One per thread.
struct StepScratch {
  FlatVector g;
  FlatVector g2;
  FlatVector w2;
  FlatVector dir;
};

struct StepOutcome {
  /// Gradient norm fell below the degeneracy threshold, so the normalized
  /// term (SAM ascent / GNP penalty) was skipped this step.
  bool degenerate = false;
};

/// Gradient norms below this make g/||g|| meaningless; such steps fall back
/// to the plain gradient step and are flagged degenerate.
inline constexpr double kDegenerateGradNorm = 1e-12;

/// w' = w - alpha * grad L(w). One gradient evaluation.
StepOutcome sgd_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg,
                     StepScratch& scratch);

/// Sharpness-aware step: ascend to w + rho*g/||g||, take the gradient there,
/// descend with it plus the gradient of the lambda*||w|| regularizer.
/// Exactly two gradient evaluations, always.
StepOutcome sam_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg,
                     StepScratch& scratch);

/// Gradient-norm-penalty step: w' = w - alpha * (g + lambda * H g/||g||).
/// Exact mode computes the penalty with one Hessian-vector product; FD mode
/// approximates it with a second gradient at a displaced point.
StepOutcome gnp_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg,
                     StepScratch& scratch);

/// Dispatch on cfg.kind.
StepOutcome apply_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg,
                       StepScratch& scratch);

// Convenience overloads with a throwaway scratch.
StepOutcome sgd_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg);
StepOutcome sam_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg);
StepOutcome gnp_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg);
StepOutcome apply_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg);

}  // namespace plastic
