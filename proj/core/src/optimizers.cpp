#include "plastic/optimizers.hpp"

#include <cstddef>
#include <string>

#include "plastic/errors.hpp"
#include "plastic/numfmt.hpp"

namespace plastic {
namespace {

const char* kind_name(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::SGD: return "SGD";
    case OptimizerKind::SAM: return "SAM";
    case OptimizerKind::GNP: return "GNP";
  }
  return "?";
}

void require_kind(const OptimizerConfig& cfg, OptimizerKind expected,
                  const char* fn) {
  if (cfg.kind != expected) {
    throw ConfigError(std::string(fn) + " called with a " +
                      kind_name(cfg.kind) + " config");
  }
}

void check_finite(const FlatVector& v, const OptimizerConfig& cfg,
                  const char* what) {
  if (!all_finite(v)) {
    throw NumericError(cfg.label() + ": non-finite " + what);
  }
}

}  // namespace

std::string OptimizerConfig::label() const {
  if (!custom_label.empty()) return custom_label;
  return std::string(kind_name(kind)) + "(alpha=" + double_to_string(alpha) + ")";
}

void OptimizerConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError(label() + ": alpha must be > 0");
  if (!(lambda >= 0.0)) throw ConfigError(label() + ": lambda must be >= 0");
  if (!(rho >= 0.0)) throw ConfigError(label() + ": rho must be >= 0");
  if (!(gnp_fd_step >= 0.0)) throw ConfigError(label() + ": gnp_fd_step must be >= 0");
}

StepOutcome sgd_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg,
                     StepScratch& scratch) {
  require_kind(cfg, OptimizerKind::SGD, "sgd_step");
  cfg.validate();
  obj.gradient(w, scratch.g);
  check_finite(scratch.g, cfg, "gradient");
  axpy(-cfg.alpha, scratch.g, w);
  check_finite(w, cfg, "updated parameters");
  return {};
}

StepOutcome sam_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg,
                     StepScratch& scratch) {
  require_kind(cfg, OptimizerKind::SAM, "sam_step");
  cfg.validate();
  StepOutcome outcome;

  obj.gradient(w, scratch.g);
  check_finite(scratch.g, cfg, "gradient");
  const double gn = l2_norm(scratch.g);
  outcome.degenerate = gn < kDegenerateGradNorm;

  // Gradient at the ascent point w + rho*g/||g||. The second evaluation
  // happens even when the ascent is skipped (rho = 0 or degenerate g): the
  // two-evaluations-per-step cost contract stays uniform, and with an
  // untouched w the result is bit-identical to the first gradient.
  if (cfg.rho != 0.0 && !outcome.degenerate) {
    scratch.w2 = w;
    axpy(cfg.rho / gn, scratch.g, scratch.w2);
    obj.gradient(scratch.w2, scratch.g2);
  } else {
    obj.gradient(w, scratch.g2);
  }
  check_finite(scratch.g2, cfg, "ascent-point gradient");

  if (cfg.lambda != 0.0) {
    if (cfg.sam_l2_squared) {
      axpy(cfg.lambda, w, scratch.g2);
    } else {
      const double wn = l2_norm(w);
      if (wn >= kDegenerateGradNorm) axpy(cfg.lambda / wn, w, scratch.g2);
    }
  }
  axpy(-cfg.alpha, scratch.g2, w);
  check_finite(w, cfg, "updated parameters");
  return outcome;
}

StepOutcome gnp_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg,
                     StepScratch& scratch) {
  require_kind(cfg, OptimizerKind::GNP, "gnp_step");
  cfg.validate();
  StepOutcome outcome;

  obj.gradient(w, scratch.g);
  check_finite(scratch.g, cfg, "gradient");
  const double gn = l2_norm(scratch.g);
  outcome.degenerate = gn < kDegenerateGradNorm;

  if (cfg.lambda != 0.0 && !outcome.degenerate) {
    scratch.dir = scratch.g;
    for (double& d : scratch.dir) d /= gn;
    if (cfg.gnp_mode == GnpMode::Exact) {
      obj.hvp(w, scratch.dir, scratch.g2);
    } else {
      const double h =
          cfg.gnp_fd_step > 0.0 ? cfg.gnp_fd_step : 1e-2 * (1.0 + l2_norm(w));
      scratch.w2 = w;
      axpy(h, scratch.dir, scratch.w2);
      obj.gradient(scratch.w2, scratch.g2);
      for (std::size_t i = 0; i < scratch.g2.size(); ++i) {
        scratch.g2[i] = (scratch.g2[i] - scratch.g[i]) / h;
      }
    }
    check_finite(scratch.g2, cfg, "norm-penalty term");
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] -= cfg.alpha * (scratch.g[i] + cfg.lambda * scratch.g2[i]);
    }
  } else {
    // No penalty: reduces exactly to the plain gradient step.
    axpy(-cfg.alpha, scratch.g, w);
  }
  check_finite(w, cfg, "updated parameters");
  return outcome;
}

StepOutcome apply_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg,
                       StepScratch& scratch) {
  switch (cfg.kind) {
    case OptimizerKind::SGD: return sgd_step(obj, w, cfg, scratch);
    case OptimizerKind::SAM: return sam_step(obj, w, cfg, scratch);
    case OptimizerKind::GNP: return gnp_step(obj, w, cfg, scratch);
  }
  throw ConfigError("apply_step: unknown optimizer kind");
}

StepOutcome sgd_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg) {
  StepScratch s;
  return sgd_step(obj, w, cfg, s);
}
StepOutcome sam_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg) {
  StepScratch s;
  return sam_step(obj, w, cfg, s);
}
StepOutcome gnp_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg) {
  StepScratch s;
  return gnp_step(obj, w, cfg, s);
}
StepOutcome apply_step(Objective& obj, FlatVector& w, const OptimizerConfig& cfg) {
  StepScratch s;
  return apply_step(obj, w, cfg, s);
}

}  // namespace plastic
