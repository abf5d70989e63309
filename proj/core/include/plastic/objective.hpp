#pragma once

#include <span>

#include "plastic/autodiff.hpp"
#include "plastic/flat_vector.hpp"
#include "plastic/matrix.hpp"

namespace plastic {

/// Running totals of how often each differentiation primitive was invoked.
/// Optimizer cost contracts (SAM = 2 gradients per step, exact GNP =
/// 1 gradient + 1 HVP) are asserted against these.
struct EvalCounts {
  long values = 0;
  long gradients = 0;
  long hvps = 0;
};

/// A differentiable scalar objective L(w). Concrete objectives are the
/// mini-batch network loss and analytic quadratics used by tests and probes.
/// The public entry points count invocations; the virtuals do the math.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;

  double value(std::span<const double> w) {
    ++counts_.values;
    return do_value(w);
  }
  void gradient(std::span<const double> w, FlatVector& g) {
    ++counts_.gradients;
    do_gradient(w, g);
  }
  void hvp(std::span<const double> w, std::span<const double> v, FlatVector& hv) {
    ++counts_.hvps;
    do_hvp(w, v, hv);
  }

  const EvalCounts& counts() const { return counts_; }
  void reset_counts() { counts_ = EvalCounts{}; }

 private:
  virtual double do_value(std::span<const double> w) = 0;
  virtual void do_gradient(std::span<const double> w, FlatVector& g) = 0;
  virtual void do_hvp(std::span<const double> w, std::span<const double> v,
                      FlatVector& hv) = 0;

  EvalCounts counts_;
};

/// L(w) = 1/2 wᵀAw + cᵀw with symmetric A. Gradient Aw + c, Hessian A.
class QuadraticObjective : public Objective {
 public:
  QuadraticObjective(Matrix a, FlatVector c);
  /// Diagonal quadratic 1/2 Σ d_i w_i² (no linear term).
  explicit QuadraticObjective(FlatVector diagonal);

  int dim() const override { return static_cast<int>(c_.size()); }
  const Matrix& a() const { return a_; }

 private:
  double do_value(std::span<const double> w) override;
  void do_gradient(std::span<const double> w, FlatVector& g) override;
  void do_hvp(std::span<const double> w, std::span<const double> v,
              FlatVector& hv) override;

  Matrix a_;
  FlatVector c_;
};

/// Mean cross-entropy of an MlpGraph on one labeled batch. The batch can be
/// repointed between optimizer steps; the objective never owns batch storage.
class MlpBatchObjective : public Objective {
 public:
  MlpBatchObjective(const MlpGraph& graph, const LabeledBatch& batch);

  void set_batch(const LabeledBatch& batch) { batch_ = &batch; }
  const MlpGraph& graph() const { return *graph_; }

  int dim() const override { return graph_->param_count(); }

 private:
  double do_value(std::span<const double> w) override;
  void do_gradient(std::span<const double> w, FlatVector& g) override;
  void do_hvp(std::span<const double> w, std::span<const double> v,
              FlatVector& hv) override;

  const MlpGraph* graph_;
  const LabeledBatch* batch_;
  MlpWorkspace ws_;
};

}  // namespace plastic
