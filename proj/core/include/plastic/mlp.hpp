#pragma once

#include <vector>

#include "plastic/autodiff.hpp"
#include "plastic/flat_vector.hpp"
#include "plastic/matrix.hpp"
#include "plastic/rng.hpp"

namespace plastic {

/// The optimization variable: layer shapes plus every weight and bias in the
/// canonical flat order (see FlatVector).
struct ParamSet {
  std::vector<int> layer_sizes;
  FlatVector weights_and_biases;
};

/// Fresh network. Weights are drawn uniformly in [-sqrt(6/fan_in),
/// +sqrt(6/fan_in)] so ReLU activations keep unit-scale variance at depth;
/// biases start at zero. Draw order equals the canonical flat order, so a
/// given RngStream state yields a bit-identical ParamSet.
ParamSet init_mlp(RngStream& rng, const std::vector<int>& layer_sizes);

/// Logits for each input row: hidden layers apply ReLU, the output layer is
/// linear (softmax lives in the loss).
Matrix forward_logits(const ParamSet& params, const Matrix& inputs);

/// Mean over rows of -log softmax(logits)[label], in fused log-sum-exp form.
double ce_loss(const Matrix& logits, const std::vector<int>& labels);

/// Number of rows whose argmax logit equals the label; argmax ties go to the
/// lowest class index.
int correct_count(const ParamSet& params, const LabeledBatch& data);

/// Fraction of correctly classified rows, in [0,1]. Empty data is a usage
/// error.
double accuracy(const ParamSet& params, const LabeledBatch& data);

}  // namespace plastic
