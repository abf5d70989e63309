// Writes the deterministic synthetic digit corpus in MNIST IDX layout, for
// machines where the real corpus is unavailable or a smaller one is wanted.

#include <cstdio>

#include <CLI11.hpp>

#include "plastic/errors.hpp"
#include "plastic/synth_digits.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generate the synthetic digit corpus (IDX files)"};
  std::string out_dir = "data";
  plastic::SynthDataConfig cfg;
  app.add_option("--out", out_dir, "target directory")->capture_default_str();
  app.add_option("--train", cfg.train_count, "training images")
      ->capture_default_str();
  app.add_option("--test", cfg.test_count, "test images")->capture_default_str();
  app.add_option("--seed", cfg.seed, "corpus seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    plastic::write_synthetic_mnist(out_dir, cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::printf("wrote %d train / %d test images to %s (seed %llu)\n",
              cfg.train_count, cfg.test_count, out_dir.c_str(),
              static_cast<unsigned long long>(cfg.seed));
  return 0;
}
