#include "plastic/dataset.hpp"

#include <string>

#include "plastic/errors.hpp"

namespace plastic {

std::array<int, 10> Dataset::class_histogram() const {
  std::array<int, 10> hist{};
  for (int y : labels) {
    if (y >= 0 && y < 10) ++hist[static_cast<std::size_t>(y)];
  }
  return hist;
}

void Dataset::validate() const {
  if (n < 0 || image_rows <= 0 || image_cols <= 0) {
    throw ConfigError("dataset has invalid shape " + std::to_string(n) + "x" +
                      std::to_string(image_rows) + "x" + std::to_string(image_cols));
  }
  if (pixels.size() != static_cast<std::size_t>(n) * dim()) {
    throw DataError("dataset holds " + std::to_string(pixels.size()) +
                    " pixel bytes, expected " + std::to_string(static_cast<std::size_t>(n) * dim()));
  }
  if (labels.size() != static_cast<std::size_t>(n)) {
    throw DataError("dataset holds " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(n) + " images");
  }
  for (int y : labels) {
    if (y < 0 || y > 9) {
      throw DataError("dataset label " + std::to_string(y) + " outside [0,9]");
    }
  }
}

}  // namespace plastic
