#include "plastic/probes.hpp"

#include <cfloat>
#include <cmath>
#include <cstddef>
#include <string>

#include "plastic/errors.hpp"
#include "plastic/flat_vector.hpp"

namespace plastic {
namespace {

void check_point(const Objective& obj, std::span<const double> w) {
  if (static_cast<int>(w.size()) != obj.dim()) {
    throw ConfigError("probe point has " + std::to_string(w.size()) +
                      " entries, objective dimension is " +
                      std::to_string(obj.dim()));
  }
}

// Random direction with rotation-invariant distribution (iid normals).
void draw_direction(RngStream& rng, std::size_t n, FlatVector& d) {
  d.resize(n);
  double norm = 0.0;
  do {
    for (double& x : d) x = rng.normal();
    norm = l2_norm(d);
  } while (norm == 0.0);
}

}  // namespace

SharpnessReport max_hessian_eigenvalue(Objective& obj, std::span<const double> w,
                                       double tol, int max_iter, RngStream& rng) {
  check_point(obj, w);
  if (!(tol > 0.0)) throw ConfigError("eigenvalue probe: tol must be > 0");
  if (max_iter < 1) throw ConfigError("eigenvalue probe: max_iter must be >= 1");

  const std::size_t n = static_cast<std::size_t>(obj.dim());
  FlatVector v, hv;
  draw_direction(rng, n, v);
  const double vn = l2_norm(v);
  for (double& x : v) x /= vn;

  SharpnessReport report;
  double prev = 0.0;
  for (int k = 1; k <= max_iter; ++k) {
    obj.hvp(w, v, hv);
    const double lambda = dot(v, hv);
    report.lambda_max = lambda;
    report.iterations_used = k;
    const double hn = l2_norm(hv);
    if (hn == 0.0) {
      // v is (numerically) in the kernel; on the first iterate this is the
      // degenerate all-zero-curvature case.
      report.residual = (k == 1) ? 0.0 : std::abs(lambda - prev);
      report.converged = true;
      return report;
    }
    if (k >= 2) {
      report.residual = std::abs(lambda - prev) / std::max(std::abs(lambda), DBL_MIN);
      if (report.residual < tol) {
        report.converged = true;
        return report;
      }
    }
    prev = lambda;
    for (std::size_t i = 0; i < n; ++i) v[i] = hv[i] / hn;
  }
  report.converged = false;
  return report;
}

LipschitzEstimate local_lipschitz_estimate(Objective& obj, std::span<const double> w,
                                           double radius, int n_samples,
                                           RngStream& rng) {
  check_point(obj, w);
  if (!(radius > 0.0)) throw ConfigError("Lipschitz probe: radius must be > 0");
  if (n_samples < 1) throw ConfigError("Lipschitz probe: n_samples must be >= 1");

  const std::size_t n = static_cast<std::size_t>(obj.dim());
  const double base = obj.value(w);
  FlatVector d, wp(n);
  LipschitzEstimate est;
  est.radius = radius;
  est.n_samples = n_samples;
  for (int s = 0; s < n_samples; ++s) {
    draw_direction(rng, n, d);
    const double scale = radius / l2_norm(d);
    for (double& x : d) x *= scale;
    for (std::size_t i = 0; i < n; ++i) wp[i] = w[i] + d[i];
    const double slope = std::abs(obj.value(wp) - base) / l2_norm(d);
    if (slope > est.k_hat) est.k_hat = slope;
  }
  return est;
}

}  // namespace plastic
