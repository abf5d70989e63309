#include "plastic/synth_digits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "plastic/errors.hpp"
#include "plastic/idx.hpp"

namespace plastic {
namespace {

constexpr int kSide = 28;
constexpr double kPi = 3.14159265358979323846;

// Published MNIST per-class counts; reproduced so derived quantities
// (pair-task sizes, train:test ratios) match the real corpus.
constexpr int kTrainHist[10] = {5923, 6742, 5958, 6131, 5842,
                                5421, 5918, 6265, 5851, 5949};
constexpr int kTestHist[10] = {980, 1135, 1032, 1010, 982,
                               892, 958, 1028, 974, 1009};

using Point = std::array<double, 2>;
using Stroke = std::vector<Point>;

void ellipse(Stroke& s, double cx, double cy, double rx, double ry) {
  const int n = 24;
  s.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double a = 2.0 * kPi * k / n;
    s.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
  }
}

// Two handwriting variants per digit. The variants overlap neighboring
// classes the way real handwriting does (open 4 vs 9, crossbar 7 vs 2,
// narrow 8 vs 3), which keeps pairwise discrimination off the ceiling.
std::vector<Stroke> glyph_strokes(int digit, int variant) {
  std::vector<Stroke> g;
  switch (digit) {
    case 0: {
      g.emplace_back();
      if (variant == 0) {
        ellipse(g.back(), 0.5, 0.5, 0.30, 0.40);
      } else {
        ellipse(g.back(), 0.5, 0.5, 0.22, 0.41);
      }
      break;
    }
    case 1:
      if (variant == 0) {
        g.push_back({{0.33, 0.30}, {0.55, 0.10}, {0.55, 0.90}});
      } else {
        g.push_back({{0.38, 0.24}, {0.52, 0.10}, {0.52, 0.90}});
        g.push_back({{0.34, 0.90}, {0.70, 0.90}});
      }
      break;
    case 2:
      if (variant == 0) {
        g.push_back({{0.22, 0.34},
                     {0.26, 0.18},
                     {0.42, 0.10},
                     {0.60, 0.12},
                     {0.74, 0.24},
                     {0.72, 0.42},
                     {0.58, 0.58},
                     {0.40, 0.72},
                     {0.22, 0.88}});
        g.push_back({{0.22, 0.88}, {0.78, 0.88}});
      } else {
        g.push_back({{0.26, 0.26},
                     {0.40, 0.12},
                     {0.62, 0.12},
                     {0.72, 0.28},
                     {0.52, 0.55},
                     {0.26, 0.86}});
        g.push_back({{0.26, 0.86}, {0.52, 0.80}, {0.76, 0.86}});
      }
      break;
    case 3:
      if (variant == 0) {
        g.push_back({{0.25, 0.16},
                     {0.42, 0.08},
                     {0.62, 0.12},
                     {0.70, 0.26},
                     {0.62, 0.40},
                     {0.46, 0.46}});
        g.push_back({{0.46, 0.46},
                     {0.66, 0.52},
                     {0.76, 0.68},
                     {0.66, 0.85},
                     {0.45, 0.93},
                     {0.25, 0.84}});
      } else {
        g.push_back({{0.28, 0.20},
                     {0.48, 0.10},
                     {0.66, 0.16},
                     {0.68, 0.30},
                     {0.52, 0.42},
                     {0.40, 0.46}});
        g.push_back({{0.40, 0.46},
                     {0.60, 0.50},
                     {0.70, 0.64},
                     {0.62, 0.82},
                     {0.42, 0.90},
                     {0.27, 0.82}});
      }
      break;
    case 4:
      if (variant == 0) {
        g.push_back({{0.60, 0.08}, {0.22, 0.60}, {0.80, 0.60}});
        g.push_back({{0.62, 0.34}, {0.62, 0.92}});
      } else {
        g.push_back({{0.30, 0.12}, {0.26, 0.52}, {0.74, 0.52}});
        g.push_back({{0.66, 0.10}, {0.66, 0.92}});
      }
      break;
    case 5:
      if (variant == 0) {
        g.push_back({{0.72, 0.10}, {0.32, 0.10}, {0.29, 0.44}});
        g.push_back({{0.29, 0.44},
                     {0.50, 0.38},
                     {0.70, 0.46},
                     {0.74, 0.64},
                     {0.62, 0.84},
                     {0.40, 0.90},
                     {0.26, 0.80}});
      } else {
        g.push_back({{0.70, 0.12}, {0.34, 0.12}, {0.32, 0.40}});
        g.push_back({{0.32, 0.40},
                     {0.56, 0.36},
                     {0.72, 0.50},
                     {0.70, 0.72},
                     {0.52, 0.88},
                     {0.30, 0.84}});
      }
      break;
    case 6: {
      if (variant == 0) {
        g.push_back({{0.62, 0.08}, {0.44, 0.24}, {0.33, 0.45}, {0.30, 0.62}});
        g.emplace_back();
        ellipse(g.back(), 0.48, 0.70, 0.19, 0.20);
      } else {
        g.push_back({{0.56, 0.08}, {0.40, 0.34}, {0.34, 0.60}});
        g.emplace_back();
        ellipse(g.back(), 0.50, 0.72, 0.17, 0.17);
      }
      break;
    }
    case 7:
      if (variant == 0) {
        g.push_back({{0.22, 0.10}, {0.78, 0.10}, {0.48, 0.92}});
      } else {
        g.push_back({{0.24, 0.12}, {0.76, 0.12}, {0.44, 0.90}});
        g.push_back({{0.34, 0.50}, {0.68, 0.50}});
      }
      break;
    case 8: {
      g.emplace_back();
      if (variant == 0) {
        ellipse(g.back(), 0.5, 0.30, 0.20, 0.20);
        g.emplace_back();
        ellipse(g.back(), 0.5, 0.71, 0.23, 0.21);
      } else {
        ellipse(g.back(), 0.52, 0.29, 0.15, 0.19);
        g.emplace_back();
        ellipse(g.back(), 0.48, 0.70, 0.18, 0.21);
      }
      break;
    }
    case 9: {
      g.emplace_back();
      if (variant == 0) {
        ellipse(g.back(), 0.52, 0.32, 0.21, 0.22);
        g.push_back({{0.73, 0.36}, {0.70, 0.60}, {0.58, 0.92}});
      } else {
        ellipse(g.back(), 0.50, 0.30, 0.18, 0.20);
        g.push_back({{0.68, 0.34}, {0.68, 0.92}});
      }
      break;
    }
    default:
      throw ConfigError("digit must be in [0,9], got " + std::to_string(digit));
  }
  return g;
}

double dist_to_segment(double px, double py, const Point& a, const Point& b) {
  const double vx = b[0] - a[0], vy = b[1] - a[1];
  const double wx = px - a[0], wy = py - a[1];
  const double vv = vx * vx + vy * vy;
  double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = px - (a[0] + t * vx), dy = py - (a[1] + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

// Spreads `total` examples over the 10 classes proportionally to `hist`,
// fixing rounding by largest remainder.
std::array<int, 10> apportion(const int (&hist)[10], int total) {
  const double sum = std::accumulate(std::begin(hist), std::end(hist), 0.0);
  std::array<int, 10> counts{};
  std::array<double, 10> remainder{};
  int assigned = 0;
  for (int c = 0; c < 10; ++c) {
    const double exact = total * hist[c] / sum;
    counts[static_cast<std::size_t>(c)] = static_cast<int>(exact);
    remainder[static_cast<std::size_t>(c)] = exact - counts[static_cast<std::size_t>(c)];
    assigned += counts[static_cast<std::size_t>(c)];
  }
  for (int left = total - assigned; left > 0; --left) {
    int best = 0;
    for (int c = 1; c < 10; ++c) {
      if (remainder[static_cast<std::size_t>(c)] > remainder[static_cast<std::size_t>(best)]) best = c;
    }
    ++counts[static_cast<std::size_t>(best)];
    remainder[static_cast<std::size_t>(best)] = -1.0;
  }
  return counts;
}

std::vector<std::uint8_t> make_labels(const int (&hist)[10], int total,
                                      std::uint64_t seed, const char* tag) {
  const std::array<int, 10> counts = apportion(hist, total);
  std::vector<std::uint8_t> labels;
  labels.reserve(static_cast<std::size_t>(total));
  for (int c = 0; c < 10; ++c) {
    labels.insert(labels.end(), static_cast<std::size_t>(counts[static_cast<std::size_t>(c)]),
                  static_cast<std::uint8_t>(c));
  }
  RngStream rng(seed, tag, 0);
  rng.shuffle(labels);
  return labels;
}

}  // namespace

// Splits polyline segments into pieces of at most `max_len` glyph units so
// the later pointwise warp bends strokes smoothly instead of only moving
// their endpoints.
Stroke resample(const Stroke& in, double max_len) {
  Stroke out;
  out.reserve(in.size() * 4);
  for (std::size_t s = 0; s + 1 < in.size(); ++s) {
    const double dx = in[s + 1][0] - in[s][0];
    const double dy = in[s + 1][1] - in[s][1];
    const int n = std::max(1, static_cast<int>(std::ceil(std::hypot(dx, dy) / max_len)));
    for (int k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / n;
      out.push_back({in[s][0] + t * dx, in[s][1] + t * dy});
    }
  }
  out.push_back(in.back());
  return out;
}

void render_digit(int digit, RngStream& rng, std::uint8_t* out) {
  // Draw order is fixed; with the per-image stream that makes every image a
  // pure function of (seed, tag, index).
  auto sym = [&](double a) { return (2.0 * rng.uniform_real() - 1.0) * a; };
  const int variant = rng.uniform_real() < 0.5 ? 0 : 1;
  std::vector<Stroke> strokes = glyph_strokes(digit, variant);

  // Pose jitter: rotation, anisotropic scale, shear, translation.
  const double angle = sym(0.16);
  const double sx = 0.78 + 0.36 * rng.uniform_real();
  const double sy = 0.78 + 0.36 * rng.uniform_real();
  const double shear = sym(0.20);
  const double tx = sym(2.0);
  const double ty = sym(2.0);
  const double thickness = 0.6 + 1.0 * rng.uniform_real();
  const double soft = 0.5 + 0.6 * rng.uniform_real();  // pen/scan blur band, px
  const double brightness = 0.70 + 0.30 * rng.uniform_real();

  // Smooth waviness: a low-frequency sinusoidal displacement field over the
  // frame, applied per polyline point.
  const double warp_ax = 0.85 * rng.uniform_real();
  const double warp_ay = 0.85 * rng.uniform_real();
  const double warp_wx = 0.15 + 0.30 * rng.uniform_real();
  const double warp_wy = 0.15 + 0.30 * rng.uniform_real();
  const double warp_px = 2.0 * kPi * rng.uniform_real();
  const double warp_py = 2.0 * kPi * rng.uniform_real();

  // Occasional broken stroke: a short arc of one stroke is left uninked.
  int gap_stroke = -1;
  double gap_lo = 0.0, gap_hi = 0.0;
  if (rng.uniform_real() < 0.30) {
    gap_stroke = static_cast<int>(rng.uniform_real() * strokes.size());
    gap_lo = 0.10 + 0.65 * rng.uniform_real();
    gap_hi = gap_lo + 0.06 + 0.10 * rng.uniform_real();
  }

  // Shape jitter: move the control points themselves, not just the pose.
  for (Stroke& stroke : strokes) {
    for (Point& p : stroke) {
      p[0] += sym(0.035);
      p[1] += sym(0.035);
    }
  }

  const double ca = std::cos(angle), sa = std::sin(angle);
  auto to_pixels = [&](const Point& p) -> Point {
    double x = (p[0] - 0.5) * sx;
    double y = (p[1] - 0.5) * sy;
    x += shear * y;
    const double xr = ca * x - sa * y;
    const double yr = sa * x + ca * y;
    // glyph box is 20px inside the 28px frame, like the source corpus
    double px = 4.0 + 20.0 * (xr + 0.5) + tx;
    double py = 4.0 + 20.0 * (yr + 0.5) + ty;
    px += warp_ax * std::sin(warp_wy * py + warp_px);
    py += warp_ay * std::sin(warp_wx * px + warp_py);
    return {px, py};
  };

  std::array<double, kSide * kSide> intensity{};
  for (std::size_t si = 0; si < strokes.size(); ++si) {
    const Stroke stroke = resample(strokes[si], 0.05);
    const std::size_t n_seg = stroke.size() - 1;
    for (std::size_t s = 0; s + 1 < stroke.size(); ++s) {
      if (static_cast<int>(si) == gap_stroke) {
        const double t = (s + 0.5) / static_cast<double>(n_seg);
        if (t >= gap_lo && t < gap_hi) continue;
      }
      const Point a = to_pixels(stroke[s]);
      const Point b = to_pixels(stroke[s + 1]);
      const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a[0], b[0]) - thickness - soft)));
      const int x1 = std::min(kSide - 1, static_cast<int>(std::ceil(std::max(a[0], b[0]) + thickness + soft)));
      const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a[1], b[1]) - thickness - soft)));
      const int y1 = std::min(kSide - 1, static_cast<int>(std::ceil(std::max(a[1], b[1]) + thickness + soft)));
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double d = dist_to_segment(x + 0.5, y + 0.5, a, b);
          const double v = std::clamp((thickness + soft - d) / soft, 0.0, 1.0);
          double& cell = intensity[static_cast<std::size_t>(y) * kSide + x];
          cell = std::max(cell, v);
        }
      }
    }
  }

  for (int i = 0; i < kSide * kSide; ++i) {
    double v = intensity[static_cast<std::size_t>(i)] * brightness;
    if (v > 0.0) v *= 1.0 + 0.10 * rng.normal();
    out[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
  }
}

void write_synthetic_mnist(const std::filesystem::path& dir,
                           const SynthDataConfig& config) {
  if (config.train_count < 0 || config.test_count < 0) {
    throw ConfigError("synthetic data counts must be >= 0");
  }
  std::filesystem::create_directories(dir);

  struct SplitSpec {
    const int (&hist)[10];
    int count;
    const char* label_tag;
    const char* image_tag;
    const char* image_file;
    const char* label_file;
  };
  const SplitSpec splits[2] = {
      {kTrainHist, config.train_count, "train_labels", "train_image",
       "train-images-idx3-ubyte", "train-labels-idx1-ubyte"},
      {kTestHist, config.test_count, "test_labels", "test_image",
       "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"},
  };

  for (const SplitSpec& split : splits) {
    std::vector<std::uint8_t> labels =
        make_labels(split.hist, split.count, config.seed, split.label_tag);
    std::vector<std::uint8_t> pixels(
        static_cast<std::size_t>(split.count) * kSide * kSide);
    for (int i = 0; i < split.count; ++i) {
      RngStream rng(config.seed, split.image_tag, static_cast<std::uint64_t>(i));
      render_digit(static_cast<int>(labels[static_cast<std::size_t>(i)]), rng,
                   pixels.data() + static_cast<std::size_t>(i) * kSide * kSide);
    }
    write_idx_images(dir / split.image_file, kSide, kSide, pixels);
    write_idx_labels(dir / split.label_file, labels);
  }
}

}  // namespace plastic
