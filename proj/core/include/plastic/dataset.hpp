#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace plastic {

/// An image-classification corpus held once in memory as raw bytes.
/// Pixels stay in their on-disk 0..255 form; they are normalized to [0,1]
/// (byte/255) whenever examples are materialized into a batch. Tasks
/// reference a Dataset and never copy its images.
struct Dataset {
  int n = 0;
  int image_rows = 0;
  int image_cols = 0;
  std::vector<std::uint8_t> pixels;  ///< n * image_rows * image_cols bytes
  std::vector<int> labels;           ///< n entries in [0, 10)

  int dim() const { return image_rows * image_cols; }

  const std::uint8_t* image(int i) const {
    return pixels.data() + static_cast<std::size_t>(i) * dim();
  }

  /// Count of examples per digit class.
  std::array<int, 10> class_histogram() const;

  /// Throws DataError/ConfigError if sizes disagree or labels leave [0,10).
  void validate() const;
};

}  // namespace plastic
