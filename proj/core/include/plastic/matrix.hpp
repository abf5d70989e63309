#pragma once

#include <cstddef>

#include "plastic/errors.hpp"
#include "plastic/flat_vector.hpp"

namespace plastic {

/// Dense row-major matrix of doubles. Deliberately minimal: rows of a batch,
/// logits, quadratic-form coefficients. Heavy linear algebra stays inside the
/// library implementation.
struct Matrix {
  int rows = 0;
  int cols = 0;
  AlignedDoubles data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw ConfigError("Matrix: negative dimensions");
  }

  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const {
    return data.data() + static_cast<std::size_t>(r) * cols;
  }
  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }

  void resize(int r, int c) {
    rows = r;
    cols = c;
    data.assign(static_cast<std::size_t>(r) * c, 0.0);
  }

  bool operator==(const Matrix& other) const = default;
};

/// A labeled mini-batch: one example per row, pixel intensities in [0,1],
/// integer class labels in [0, n_classes).
struct LabeledBatch {
  Matrix inputs;
  std::vector<int> labels;

  int size() const { return inputs.rows; }

  /// Throws if the batch is empty, shapes disagree, or a label is out of
  /// [0, n_classes).
  void validate(int n_classes) const {
    if (inputs.rows < 1) throw ConfigError("LabeledBatch: empty batch");
    if (static_cast<int>(labels.size()) != inputs.rows)
      throw DataError("LabeledBatch: label count does not match row count");
    for (int y : labels) {
      if (y < 0 || y >= n_classes)
        throw DataError("LabeledBatch: label " + std::to_string(y) +
                        " outside [0, " + std::to_string(n_classes) + ")");
    }
  }
};

}  // namespace plastic
