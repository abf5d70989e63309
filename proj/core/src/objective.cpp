#include "plastic/objective.hpp"

#include <cstddef>
#include <string>
#include <utility>

#include "plastic/errors.hpp"

namespace plastic {

QuadraticObjective::QuadraticObjective(Matrix a, FlatVector c)
    : a_(std::move(a)), c_(std::move(c)) {
  if (a_.rows != a_.cols) throw ConfigError("quadratic matrix must be square");
  if (a_.rows != static_cast<int>(c_.size())) {
    throw ConfigError("quadratic linear term has " + std::to_string(c_.size()) +
                      " entries, matrix is " + std::to_string(a_.rows) + "x" +
                      std::to_string(a_.cols));
  }
  for (int i = 0; i < a_.rows; ++i) {
    for (int j = 0; j < i; ++j) {
      if (a_.at(i, j) != a_.at(j, i)) {
        throw ConfigError("quadratic matrix must be symmetric");
      }
    }
  }
}

QuadraticObjective::QuadraticObjective(FlatVector diagonal)
    : a_(static_cast<int>(diagonal.size()), static_cast<int>(diagonal.size())),
      c_(diagonal.size(), 0.0) {
  for (int i = 0; i < a_.rows; ++i) a_.at(i, i) = diagonal[static_cast<std::size_t>(i)];
}

double QuadraticObjective::do_value(std::span<const double> w) {
  const int n = dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double aw = 0.0;
    for (int j = 0; j < n; ++j) aw += a_.at(i, j) * w[static_cast<std::size_t>(j)];
    s += 0.5 * w[static_cast<std::size_t>(i)] * aw + c_[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
  }
  return s;
}

void QuadraticObjective::do_gradient(std::span<const double> w, FlatVector& g) {
  const int n = dim();
  g.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double aw = 0.0;
    for (int j = 0; j < n; ++j) aw += a_.at(i, j) * w[static_cast<std::size_t>(j)];
    g[static_cast<std::size_t>(i)] = aw + c_[static_cast<std::size_t>(i)];
  }
}

void QuadraticObjective::do_hvp(std::span<const double> /*w*/,
                                std::span<const double> v, FlatVector& hv) {
  const int n = dim();
  hv.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double av = 0.0;
    for (int j = 0; j < n; ++j) av += a_.at(i, j) * v[static_cast<std::size_t>(j)];
    hv[static_cast<std::size_t>(i)] = av;
  }
}

MlpBatchObjective::MlpBatchObjective(const MlpGraph& graph, const LabeledBatch& batch)
    : graph_(&graph), batch_(&batch) {}

double MlpBatchObjective::do_value(std::span<const double> w) {
  return graph_->evaluate(w, *batch_, ws_);
}

void MlpBatchObjective::do_gradient(std::span<const double> w, FlatVector& g) {
  graph_->gradient(w, *batch_, ws_, g);
}

void MlpBatchObjective::do_hvp(std::span<const double> w, std::span<const double> v,
                               FlatVector& hv) {
  graph_->hvp(w, *batch_, v, ws_, hv);
}

}  // namespace plastic
