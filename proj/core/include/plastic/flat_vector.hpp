#pragma once

#include <cmath>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace plastic {

/// Allocator pinning every buffer to one 64-byte alignment class. Vectorized
/// kernels pick their loop peeling from pointer alignment, which silently
/// reorders floating-point reductions; with all numeric buffers equally
/// aligned, results are a pure function of the stored values and bitwise
/// reproducibility survives heap-layout differences between runs.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t kAlign = 64;

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(
        ::operator new(n * sizeof(T), std::align_val_t{kAlign}));
  }
  void deallocate(T* p, std::size_t n) noexcept {
    ::operator delete(p, n * sizeof(T), std::align_val_t{kAlign});
  }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

/// Contiguous doubles in the fixed alignment class; the storage type of every
/// numeric buffer that reaches the linear-algebra kernels.
using AlignedDoubles = std::vector<double, AlignedAllocator<double>>;

/// Flat parameter/gradient storage in canonical layer order: layers front to
/// back, per layer the weight matrix row-major (output x input) followed by
/// the bias vector.
using FlatVector = AlignedDoubles;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(std::span<const double> a) {
  return std::sqrt(dot(a, a));
}

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline bool all_finite(std::span<const double> a) {
  for (double v : a) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace plastic
