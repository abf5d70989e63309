#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "plastic/dataset.hpp"

namespace plastic {

/// Raw contents of an IDX image file (magic 2051): big-endian header of
/// count/rows/cols followed by count*rows*cols unsigned bytes.
struct IdxImages {
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;
};

/// Decoded IDX payload of a label file (magic 2049).
struct IdxLabels {
  std::vector<std::uint8_t> labels;
};

/// Parse one IDX file. Files ending in .gz are decompressed transparently.
/// Wrong magic -> FormatError naming the file; truncated or unreadable
/// content -> IoError.
IdxImages read_idx_images(const std::filesystem::path& file);
IdxLabels read_idx_labels(const std::filesystem::path& file);

/// Write uncompressed IDX files (used by the synthetic-data generator and by
/// test fixtures).
void write_idx_images(const std::filesystem::path& file, int rows, int cols,
                      const std::vector<std::uint8_t>& pixels);
void write_idx_labels(const std::filesystem::path& file,
                      const std::vector<std::uint8_t>& labels);

/// Locations of the four conventional MNIST files. in_directory() resolves
/// each name inside dir, accepting a .gz variant when the plain file is
/// absent, and throws IoError listing anything missing.
struct MnistPaths {
  std::filesystem::path train_images;
  std::filesystem::path train_labels;
  std::filesystem::path test_images;
  std::filesystem::path test_labels;

  static MnistPaths in_directory(const std::filesystem::path& dir);
};

/// One split from an image/label file pair: validated (count consistency,
/// label range) but NOT size-checked against MNIST's 60,000/10,000; fixture
/// files of any size load fine.
Dataset load_idx_split(const std::filesystem::path& images_file,
                       const std::filesystem::path& labels_file);

/// The full corpus from a directory holding the four conventional files.
/// Returns (train, test).
std::pair<Dataset, Dataset> load_mnist_idx(const std::filesystem::path& dir);

}  // namespace plastic
