#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace oracle {

FlatVector fd_gradient(const ScalarFn& f, const FlatVector& w, double h) {
  FlatVector g(w.size());
  FlatVector wp = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wp[i] = w[i] + h;
    const double up = f(wp);
    wp[i] = w[i] - h;
    const double down = f(wp);
    wp[i] = w[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

FlatVector fd_hvp(const GradFn& grad, const FlatVector& w, const FlatVector& v,
                  double h) {
  FlatVector wp = w;
  FlatVector wm = w;
  for (std::size_t i = 0; i < w.size(); ++i) {
    wp[i] += h * v[i];
    wm[i] -= h * v[i];
  }
  FlatVector gp = grad(wp);
  const FlatVector gm = grad(wm);
  for (std::size_t i = 0; i < gp.size(); ++i) {
    gp[i] = (gp[i] - gm[i]) / (2.0 * h);
  }
  return gp;
}

Matrix dense_hessian(plastic::Objective& obj, const FlatVector& w) {
  const int n = obj.dim();
  Matrix h(n, n);
  FlatVector e(static_cast<std::size_t>(n), 0.0);
  FlatVector col;
  for (int j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    obj.hvp(w, e, col);
    e[static_cast<std::size_t>(j)] = 0.0;
    for (int i = 0; i < n; ++i) h.at(i, j) = col[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double s = 0.5 * (h.at(i, j) + h.at(j, i));
      h.at(i, j) = s;
      h.at(j, i) = s;
    }
  }
  return h;
}

std::vector<double> jacobi_eigenvalues(Matrix a) {
  if (a.rows != a.cols) throw std::invalid_argument("jacobi: matrix not square");
  const int n = a.rows;

  auto off_diag_sq = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) s += a.at(i, j) * a.at(i, j);
    }
    return s;
  };
  double scale = 0.0;
  for (double v : a.data) scale = std::max(scale, std::abs(v));
  const double stop = std::max(1e-300, 1e-26 * scale * scale);

  for (int sweep = 0; sweep < 100 && off_diag_sq() > stop; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a.at(k, p);
          const double akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a.at(p, k);
          const double aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eigs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = a.at(i, i);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

double dominant_eigenvalue(const std::vector<double>& eigs) {
  double best = 0.0;
  for (double e : eigs) {
    if (std::abs(e) > std::abs(best)) best = e;
  }
  return best;
}

Matrix naive_logits(const std::vector<int>& sizes, const FlatVector& w,
                    const Matrix& inputs) {
  const int n_layers = static_cast<int>(sizes.size()) - 1;
  Matrix out(inputs.rows, sizes.back());
  std::vector<double> act, next;
  for (int r = 0; r < inputs.rows; ++r) {
    act.assign(inputs.row(r), inputs.row(r) + inputs.cols);
    std::size_t off = 0;
    for (int l = 0; l < n_layers; ++l) {
      const int fan_in = sizes[static_cast<std::size_t>(l)];
      const int fan_out = sizes[static_cast<std::size_t>(l) + 1];
      next.assign(static_cast<std::size_t>(fan_out), 0.0);
      for (int o = 0; o < fan_out; ++o) {
        double z = 0.0;
        for (int j = 0; j < fan_in; ++j) {
          z += w[off + static_cast<std::size_t>(o) * fan_in + j] *
               act[static_cast<std::size_t>(j)];
        }
        z += w[off + static_cast<std::size_t>(fan_out) * fan_in + o];
        next[static_cast<std::size_t>(o)] =
            (l + 1 < n_layers && z < 0.0) ? 0.0 : z;
      }
      off += static_cast<std::size_t>(fan_out) * fan_in + fan_out;
      act = next;
    }
    for (int c = 0; c < out.cols; ++c) out.at(r, c) = act[static_cast<std::size_t>(c)];
  }
  return out;
}

double naive_mlp_ce(const std::vector<int>& sizes, const FlatVector& w,
                    const Matrix& inputs, const std::vector<int>& labels) {
  const Matrix logits = naive_logits(sizes, w, inputs);
  double total = 0.0;
  for (int r = 0; r < logits.rows; ++r) {
    double m = logits.at(r, 0);
    for (int c = 1; c < logits.cols; ++c) m = std::max(m, logits.at(r, c));
    double lse = 0.0;
    for (int c = 0; c < logits.cols; ++c) lse += std::exp(logits.at(r, c) - m);
    lse = m + std::log(lse);
    total += lse - logits.at(r, labels[static_cast<std::size_t>(r)]);
  }
  return total / logits.rows;
}

double max_rel_err(std::span<const double> a, std::span<const double> b,
                   double floor) {
  if (a.size() != b.size()) throw std::invalid_argument("max_rel_err: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max(std::abs(b[i]), floor);
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace oracle
