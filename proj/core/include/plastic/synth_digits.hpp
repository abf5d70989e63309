#pragma once

#include <cstdint>
#include <filesystem>

#include "plastic/rng.hpp"

namespace plastic {

/// Recipe for a deterministic stand-in digit corpus, written in the exact
/// IDX layout of MNIST. Digits are rendered from hand-designed stroke
/// templates with seeded affine jitter, stroke-thickness variation, and
/// intensity noise; per-class label counts follow the published MNIST class
/// histogram (scaled when the totals differ), so class-pair task sizes and
/// the ~6:1 train:test ratio carry over. Same config, same bytes.
struct SynthDataConfig {
  int train_count = 60000;
  int test_count = 10000;
  std::uint64_t seed = 20260823;
};

/// Render one 28x28 glyph of the given digit into out[0..783],
/// white-on-black, consuming jitter from rng.
void render_digit(int digit, RngStream& rng, std::uint8_t* out);

/// Generate both splits and write the four conventional IDX files
/// (train-images-idx3-ubyte etc.) into dir, creating it if needed.
void write_synthetic_mnist(const std::filesystem::path& dir,
                           const SynthDataConfig& config = {});

}  // namespace plastic
