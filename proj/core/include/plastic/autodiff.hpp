#pragma once

#include <span>
#include <vector>

#include "plastic/flat_vector.hpp"
#include "plastic/matrix.hpp"

namespace plastic {

/// Flat-vector placement of one dense layer's parameters.
struct LayerLayout {
  int in = 0;        ///< fan-in
  int out = 0;       ///< fan-out
  int w_offset = 0;  ///< first weight index (row-major, out x in)
  int b_offset = 0;  ///< first bias index (out entries)
};

/// Per-call scratch for the differentiation passes. One workspace per thread;
/// reusing it across calls avoids reallocating activation buffers in training
/// loops. Contents are meaningless between calls.
struct MlpWorkspace {
  std::vector<Matrix> z;        // pre-activations per layer
  std::vector<Matrix> a;        // post-ReLU activations per hidden layer
  std::vector<Matrix> zt;      // tangents of z
  std::vector<Matrix> at;      // tangents of a
  Matrix adj;                   // adjoint at the current layer's z
  Matrix adj_next;
  Matrix adj_t;                 // tangent of the adjoint
  Matrix adj_t_next;
};

/// The computation graph of a fully connected ReLU network with a linear
/// output head and fused softmax cross-entropy loss, differentiated in
/// reverse mode directly against the canonical flat parameter vector.
///
/// All three entry points are pure functions of (params, batch): safe to call
/// concurrently from different threads as long as each thread brings its own
/// workspace.
///
/// Parameter flattening order (the library-wide canonical order): layers in
/// forward order; within a layer the weight matrix row-major (out x in), then
/// the bias vector.
class MlpGraph {
 public:
  /// layer_sizes = (input, hidden..., output); at least two entries, all
  /// positive.
  explicit MlpGraph(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  const std::vector<LayerLayout>& layers() const { return layers_; }
  int input_dim() const { return sizes_.front(); }
  int output_dim() const { return sizes_.back(); }
  int param_count() const { return param_count_; }

  /// Mean softmax cross-entropy of the batch under parameters w.
  double evaluate(std::span<const double> w, const LabeledBatch& batch,
                  MlpWorkspace& ws) const;

  /// Exact reverse-mode gradient of evaluate with respect to w, written into
  /// grad (resized to param_count()).
  void gradient(std::span<const double> w, const LabeledBatch& batch,
                MlpWorkspace& ws, FlatVector& grad) const;

  /// Exact Hessian-vector product H(w)·v, computed by running the whole
  /// forward+reverse pass in tangent (dual-number) arithmetic with tangent
  /// direction v. Result written into hv (resized to param_count()).
  void hvp(std::span<const double> w, const LabeledBatch& batch,
           std::span<const double> v, MlpWorkspace& ws, FlatVector& hv) const;

  /// Forward pass only: logits for each input row (no activation on the
  /// output layer). Used by accuracy evaluation and the model surface.
  void logits(std::span<const double> w, const Matrix& inputs,
              Matrix& out) const;

 private:
  void check_params(std::span<const double> w) const;
  void check_batch(const LabeledBatch& batch) const;
  // Runs the forward pass, storing z/a per layer; returns the loss.
  double forward(std::span<const double> w, const LabeledBatch& batch,
                 MlpWorkspace& ws) const;
  // Throws NumericError naming the first layer whose values are non-finite.
  [[noreturn]] void diagnose_nonfinite(const MlpWorkspace& ws) const;

  std::vector<int> sizes_;
  std::vector<LayerLayout> layers_;
  int param_count_ = 0;
};

}  // namespace plastic
