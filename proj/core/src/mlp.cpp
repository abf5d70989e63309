#include "plastic/mlp.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "plastic/errors.hpp"

namespace plastic {

ParamSet init_mlp(RngStream& rng, const std::vector<int>& layer_sizes) {
  MlpGraph graph(layer_sizes);  // validates sizes
  ParamSet params;
  params.layer_sizes = layer_sizes;
  params.weights_and_biases.assign(static_cast<std::size_t>(graph.param_count()), 0.0);
  for (const LayerLayout& lay : graph.layers()) {
    const double bound = std::sqrt(6.0 / lay.in);
    double* w = params.weights_and_biases.data() + lay.w_offset;
    const std::size_t n = static_cast<std::size_t>(lay.in) * lay.out;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = bound * (2.0 * rng.uniform_real() - 1.0);
    }
    // biases stay zero
  }
  return params;
}

Matrix forward_logits(const ParamSet& params, const Matrix& inputs) {
  MlpGraph graph(params.layer_sizes);
  Matrix out;
  graph.logits(params.weights_and_biases, inputs, out);
  return out;
}

double ce_loss(const Matrix& logits, const std::vector<int>& labels) {
  if (logits.rows < 1) throw ConfigError("ce_loss: empty logits matrix");
  if (static_cast<int>(labels.size()) != logits.rows) {
    throw DataError("ce_loss: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(logits.rows) + " rows");
  }
  double loss = 0.0;
  for (int i = 0; i < logits.rows; ++i) {
    int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= logits.cols) {
      throw DataError("ce_loss: label " + std::to_string(y) + " outside [0, " +
                      std::to_string(logits.cols) + ")");
    }
    const double* row = logits.row(i);
    double m = row[0];
    for (int c = 1; c < logits.cols; ++c) m = std::max(m, row[c]);
    double sum = 0.0;
    for (int c = 0; c < logits.cols; ++c) sum += std::exp(row[c] - m);
    loss += m + std::log(sum) - row[y];
  }
  return loss / logits.rows;
}

int correct_count(const ParamSet& params, const LabeledBatch& data) {
  Matrix logits = forward_logits(params, data.inputs);
  int correct = 0;
  for (int i = 0; i < logits.rows; ++i) {
    const double* row = logits.row(i);
    int best = 0;
    for (int c = 1; c < logits.cols; ++c) {
      if (row[c] > row[best]) best = c;  // strict: ties keep the lowest index
    }
    if (best == data.labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return correct;
}

double accuracy(const ParamSet& params, const LabeledBatch& data) {
  if (data.inputs.rows < 1) throw UsageError("accuracy: empty dataset");
  data.validate(params.layer_sizes.back());
  return static_cast<double>(correct_count(params, data)) / data.inputs.rows;
}

}  // namespace plastic
