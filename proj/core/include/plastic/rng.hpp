#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plastic {

/// Deterministic, platform-independent random stream.
///
/// Every random decision in the library flows through one of these, keyed by
/// (master_seed, purpose_tag, stream_index), so that identical keys reproduce
/// identical draws on any platform and distinct purposes never share state.
///
/// The algorithm is fixed and fully specified here rather than delegated to
/// <random>, whose distribution mappings are implementation-defined:
///
///   state seeding   s = master_seed XOR fnv1a64(purpose_tag); the four
///                   xoshiro256** state words are the first four outputs of a
///                   splitmix64 sequence started at
///                   s + stream_index * 0x9E3779B97F4A7C15 (golden gamma).
///   next_u64        xoshiro256** (Blackman & Vigna 2018).
///   uniform_real    (next_u64() >> 11) * 2^-53, uniform on [0,1).
///   uniform_below   unbiased modulo rejection on next_u64.
///   normal          Box-Muller on two uniform_real draws.
///   shuffle         Fisher-Yates, descending index, j = uniform_below(i+1).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view purpose_tag,
            std::uint64_t stream_index);

  std::uint64_t next_u64();

  /// Uniform on [0,1) with 53 random mantissa bits.
  double uniform_real();

  /// Uniform integer in [0, bound); bound must be >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Standard normal deviate (Box-Muller; consumes two uniform draws).
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      using std::swap;
      swap(values[i - 1], values[j]);
    }
  }

  std::uint64_t master_seed() const { return master_seed_; }
  const std::string& purpose_tag() const { return purpose_tag_; }
  std::uint64_t stream_index() const { return stream_index_; }

  static std::uint64_t fnv1a64(std::string_view text);

 private:
  std::uint64_t state_[4];
  std::uint64_t master_seed_;
  std::string purpose_tag_;
  std::uint64_t stream_index_;
};

}  // namespace plastic
