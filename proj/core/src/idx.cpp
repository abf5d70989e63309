#include "plastic/idx.hpp"

#include <zlib.h>

#include <cstddef>
#include <fstream>
#include <string>

#include "plastic/errors.hpp"

namespace plastic {
namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

// gzopen/gzread pass non-gzip files through untouched, so one reader covers
// both plain and .gz IDX files.
std::vector<std::uint8_t> read_all_bytes(const std::filesystem::path& file) {
  gzFile f = gzopen(file.string().c_str(), "rb");
  if (f == nullptr) throw IoError("cannot open " + file.string());
  std::vector<std::uint8_t> out;
  std::uint8_t buf[1 << 16];
  for (;;) {
    int n = gzread(f, buf, sizeof(buf));
    if (n < 0) {
      gzclose(f);
      throw IoError("read error in " + file.string());
    }
    if (n == 0) break;
    out.insert(out.end(), buf, buf + n);
  }
  gzclose(f);
  return out;
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t off) {
  return (static_cast<std::uint32_t>(b[off]) << 24) |
         (static_cast<std::uint32_t>(b[off + 1]) << 16) |
         (static_cast<std::uint32_t>(b[off + 2]) << 8) |
         static_cast<std::uint32_t>(b[off + 3]);
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
               static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b, 4);
}

void check_payload(const std::filesystem::path& file,
                   const std::vector<std::uint8_t>& bytes, std::size_t expected) {
  if (bytes.size() < expected) {
    throw IoError(file.string() + " is truncated: expected " +
                  std::to_string(expected) + " bytes, found " +
                  std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw FormatError(file.string() + " has " +
                      std::to_string(bytes.size() - expected) + " trailing bytes");
  }
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& file) {
  std::vector<std::uint8_t> bytes = read_all_bytes(file);
  if (bytes.size() < 4) throw IoError(file.string() + " is truncated before the magic");
  const std::uint32_t magic = be32(bytes, 0);
  if (magic != kImageMagic) {
    throw FormatError(file.string() + ": expected image magic " +
                      std::to_string(kImageMagic) + ", found " + std::to_string(magic));
  }
  if (bytes.size() < 16) throw IoError(file.string() + " is truncated inside the header");
  IdxImages out;
  out.count = static_cast<int>(be32(bytes, 4));
  out.rows = static_cast<int>(be32(bytes, 8));
  out.cols = static_cast<int>(be32(bytes, 12));
  if (out.count < 0 || out.rows <= 0 || out.cols <= 0) {
    throw FormatError(file.string() + ": nonsensical dimensions " +
                      std::to_string(out.count) + "x" + std::to_string(out.rows) +
                      "x" + std::to_string(out.cols));
  }
  const std::size_t payload =
      static_cast<std::size_t>(out.count) * out.rows * out.cols;
  check_payload(file, bytes, 16 + payload);
  out.pixels.assign(bytes.begin() + 16, bytes.end());
  return out;
}

IdxLabels read_idx_labels(const std::filesystem::path& file) {
  std::vector<std::uint8_t> bytes = read_all_bytes(file);
  if (bytes.size() < 4) throw IoError(file.string() + " is truncated before the magic");
  const std::uint32_t magic = be32(bytes, 0);
  if (magic != kLabelMagic) {
    throw FormatError(file.string() + ": expected label magic " +
                      std::to_string(kLabelMagic) + ", found " + std::to_string(magic));
  }
  if (bytes.size() < 8) throw IoError(file.string() + " is truncated inside the header");
  const std::uint32_t count = be32(bytes, 4);
  check_payload(file, bytes, 8 + static_cast<std::size_t>(count));
  IdxLabels out;
  out.labels.assign(bytes.begin() + 8, bytes.end());
  return out;
}

void write_idx_images(const std::filesystem::path& file, int rows, int cols,
                      const std::vector<std::uint8_t>& pixels) {
  const std::size_t per_image = static_cast<std::size_t>(rows) * cols;
  if (per_image == 0 || pixels.size() % per_image != 0) {
    throw ConfigError("image byte count " + std::to_string(pixels.size()) +
                      " is not a multiple of " + std::to_string(per_image));
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  put_be32(out, kImageMagic);
  put_be32(out, static_cast<std::uint32_t>(pixels.size() / per_image));
  put_be32(out, static_cast<std::uint32_t>(rows));
  put_be32(out, static_cast<std::uint32_t>(cols));
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("write failed for " + file.string());
}

void write_idx_labels(const std::filesystem::path& file,
                      const std::vector<std::uint8_t>& labels) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file.string());
  put_be32(out, kLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
  if (!out) throw IoError("write failed for " + file.string());
}

MnistPaths MnistPaths::in_directory(const std::filesystem::path& dir) {
  const char* names[4] = {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                          "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"};
  std::filesystem::path resolved[4];
  std::string missing;
  for (int i = 0; i < 4; ++i) {
    std::filesystem::path plain = dir / names[i];
    std::filesystem::path gz = dir / (std::string(names[i]) + ".gz");
    if (std::filesystem::exists(plain)) {
      resolved[i] = plain;
    } else if (std::filesystem::exists(gz)) {
      resolved[i] = gz;
    } else {
      if (!missing.empty()) missing += ", ";
      missing += names[i];
    }
  }
  if (!missing.empty()) {
    throw IoError("missing MNIST files in " + dir.string() + ": " + missing +
                  " (searched for plain and .gz variants)");
  }
  return {resolved[0], resolved[1], resolved[2], resolved[3]};
}

Dataset load_idx_split(const std::filesystem::path& images_file,
                       const std::filesystem::path& labels_file) {
  IdxImages images = read_idx_images(images_file);
  IdxLabels labels = read_idx_labels(labels_file);
  if (static_cast<std::size_t>(images.count) != labels.labels.size()) {
    throw DataError(images_file.string() + " holds " + std::to_string(images.count) +
                    " images but " + labels_file.string() + " holds " +
                    std::to_string(labels.labels.size()) + " labels");
  }
  Dataset ds;
  ds.n = images.count;
  ds.image_rows = images.rows;
  ds.image_cols = images.cols;
  ds.pixels = std::move(images.pixels);
  ds.labels.reserve(labels.labels.size());
  for (std::uint8_t y : labels.labels) {
    if (y > 9) {
      throw DataError(labels_file.string() + " contains label " +
                      std::to_string(static_cast<int>(y)) + " outside [0,9]");
    }
    ds.labels.push_back(static_cast<int>(y));
  }
  ds.validate();
  return ds;
}

std::pair<Dataset, Dataset> load_mnist_idx(const std::filesystem::path& dir) {
  MnistPaths paths = MnistPaths::in_directory(dir);
  Dataset train = load_idx_split(paths.train_images, paths.train_labels);
  Dataset test = load_idx_split(paths.test_images, paths.test_labels);
  return {std::move(train), std::move(test)};
}

}  // namespace plastic
