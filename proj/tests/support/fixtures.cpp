#include "support/fixtures.hpp"

#include <unistd.h>

#include <cstring>
#include <stdexcept>

#include "plastic/idx.hpp"
#include "plastic/mlp.hpp"
#include "plastic/rng.hpp"
#include "plastic/synth_digits.hpp"

namespace fixture {

using plastic::RngStream;

int NetCase::param_count() const {
  int n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    n += sizes[l] * sizes[l + 1] + sizes[l + 1];
  }
  return n;
}

namespace {

NetCase build_case(std::uint64_t seed, std::vector<int> sizes, int batch_rows,
                   double noise) {
  NetCase c;
  c.sizes = std::move(sizes);
  RngStream init(seed, "case_init", 0);
  plastic::ParamSet p = plastic::init_mlp(init, c.sizes);
  RngStream jitter(seed, "case_noise", 0);
  for (double& x : p.weights_and_biases) x += noise * jitter.normal();
  c.w = std::move(p.weights_and_biases);
  c.batch = random_batch(seed, batch_rows, c.sizes.front(), c.sizes.back());
  return c;
}

}  // namespace

NetCase random_net_case(std::uint64_t seed, int max_params) {
  RngStream shape(seed, "case_shape", 0);
  for (;;) {
    std::vector<int> sizes;
    sizes.push_back(2 + static_cast<int>(shape.uniform_below(14)));
    const int hidden = 1 + static_cast<int>(shape.uniform_below(3));
    for (int h = 0; h < hidden; ++h) {
      sizes.push_back(2 + static_cast<int>(shape.uniform_below(22)));
    }
    sizes.push_back(2 + static_cast<int>(shape.uniform_below(9)));
    NetCase probe;
    probe.sizes = sizes;
    if (probe.param_count() > max_params) continue;
    const int rows = 2 + static_cast<int>(shape.uniform_below(11));
    return build_case(seed, std::move(sizes), rows, 0.05);
  }
}

NetCase spectral_net_case(std::uint64_t seed) {
  RngStream shape(seed, "case_shape", 0);
  const int in = 3 + static_cast<int>(shape.uniform_below(4));
  const int mid = 4 + static_cast<int>(shape.uniform_below(6));
  const int out = 2 + static_cast<int>(shape.uniform_below(4));
  NetCase c = build_case(seed, {in, mid, out},
                         4 + static_cast<int>(shape.uniform_below(5)), 0.05);
  if (c.param_count() > 200) throw std::logic_error("spectral case too large");
  return c;
}

NetCase lipschitz_net_case(std::uint64_t seed) {
  return build_case(seed, {1, 2}, 6, 0.3);
}

LabeledBatch random_batch(std::uint64_t seed, int n, int dim, int n_classes) {
  LabeledBatch b;
  b.inputs.resize(n, dim);
  RngStream rng(seed, "case_batch", 0);
  for (double& x : b.inputs.data) x = rng.uniform_real();
  b.labels.resize(static_cast<std::size_t>(n));
  for (int& y : b.labels) {
    y = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n_classes)));
  }
  return b;
}

Matrix random_symmetric(std::uint64_t seed, int n, double scale) {
  Matrix a(n, n);
  RngStream rng(seed, "case_sym", 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = scale * (2.0 * rng.uniform_real() - 1.0);
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  }
  return a;
}

Dataset random_dataset(std::uint64_t seed, int n, int rows, int cols) {
  Dataset d;
  d.n = n;
  d.image_rows = rows;
  d.image_cols = cols;
  RngStream rng(seed, "case_data", 0);
  d.pixels.resize(static_cast<std::size_t>(n) * rows * cols);
  for (auto& b : d.pixels) b = static_cast<std::uint8_t>(rng.uniform_below(256));
  d.labels.resize(static_cast<std::size_t>(n));
  for (int& y : d.labels) y = static_cast<int>(rng.uniform_below(10));
  return d;
}

TempDir::TempDir(const std::string& tag) {
  auto base = std::filesystem::temp_directory_path();
  for (int k = 0;; ++k) {
    auto candidate = base / (tag + "-" + std::to_string(::getpid()) + "-" +
                             std::to_string(k));
    std::error_code ec;
    if (std::filesystem::create_directories(candidate, ec)) {
      path_ = candidate;
      return;
    }
    if (k > 1000) throw std::runtime_error("TempDir: cannot create " + tag);
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::pair<Dataset, Dataset> small_corpus(const std::filesystem::path& dir,
                                         int train_count, int test_count,
                                         std::uint64_t seed) {
  const auto marker = dir / "train-images-idx3-ubyte";
  if (!std::filesystem::exists(marker)) {
    plastic::SynthDataConfig cfg;
    cfg.train_count = train_count;
    cfg.test_count = test_count;
    cfg.seed = seed;
    plastic::write_synthetic_mnist(dir, cfg);
  }
  return plastic::load_mnist_idx(dir);
}

ObjectiveClosures closures(plastic::Objective& obj) {
  ObjectiveClosures c;
  c.value = [&obj](const FlatVector& w) { return obj.value(w); };
  c.grad = [&obj](const FlatVector& w) {
    FlatVector g;
    obj.gradient(w, g);
    return g;
  };
  return c;
}

std::uint64_t fingerprint(const FlatVector& v) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (double d : v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &d, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001B3ull;
    }
  }
  return h;
}

}  // namespace fixture
