#include "plastic/autodiff.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "plastic/errors.hpp"

namespace plastic {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapM = Eigen::Map<RowMat>;
using CMapM = Eigen::Map<const RowMat>;
using MapV = Eigen::Map<Eigen::VectorXd>;
using CMapV = Eigen::Map<const Eigen::VectorXd>;

MapM mat(Matrix& m) { return MapM(m.data.data(), m.rows, m.cols); }
CMapM cmat(const Matrix& m) { return CMapM(m.data.data(), m.rows, m.cols); }

void resize(Matrix& m, int rows, int cols) {
  m.rows = rows;
  m.cols = cols;
  m.data.resize(static_cast<std::size_t>(rows) * cols);
}

// Row-wise softmax with max subtraction, written over logits in place.
void softmax_in_place(MapM p) {
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    auto row = p.row(i).array();
    row -= row.maxCoeff();
    row = row.exp();
    row /= row.sum();
  }
}

}  // namespace

MlpGraph::MlpGraph(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) {
    throw ConfigError("network needs at least an input and an output layer, got " +
                      std::to_string(sizes_.size()) + " sizes");
  }
  for (int s : sizes_) {
    if (s <= 0) {
      throw ConfigError("layer sizes must be positive, got " + std::to_string(s));
    }
  }
  layers_.reserve(sizes_.size() - 1);
  int offset = 0;
  for (std::size_t l = 1; l < sizes_.size(); ++l) {
    LayerLayout lay;
    lay.in = sizes_[l - 1];
    lay.out = sizes_[l];
    lay.w_offset = offset;
    offset += lay.in * lay.out;
    lay.b_offset = offset;
    offset += lay.out;
    layers_.push_back(lay);
  }
  param_count_ = offset;
}

void MlpGraph::check_params(std::span<const double> w) const {
  if (static_cast<int>(w.size()) != param_count_) {
    throw ConfigError("parameter vector has " + std::to_string(w.size()) +
                      " entries, model expects " + std::to_string(param_count_));
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i])) {
      for (std::size_t l = 0; l < layers_.size(); ++l) {
        int end = layers_[l].b_offset + layers_[l].out;
        if (static_cast<int>(i) < end) {
          throw NumericError("non-finite parameter in layer " + std::to_string(l) +
                             " at flat index " + std::to_string(i));
        }
      }
    }
  }
}

void MlpGraph::check_batch(const LabeledBatch& batch) const {
  batch.validate(output_dim());
  if (batch.inputs.cols != input_dim()) {
    throw ConfigError("batch has " + std::to_string(batch.inputs.cols) +
                      " features per row, model input dimension is " +
                      std::to_string(input_dim()));
  }
}

void MlpGraph::diagnose_nonfinite(const MlpWorkspace& ws) const {
  for (std::size_t l = 0; l < ws.z.size(); ++l) {
    for (double v : ws.z[l].data) {
      if (!std::isfinite(v)) {
        throw NumericError("non-finite pre-activation in layer " + std::to_string(l) +
                           "; parameters or inputs have overflowed");
      }
    }
  }
  throw NumericError("non-finite loss with finite activations");
}

double MlpGraph::forward(std::span<const double> w, const LabeledBatch& batch,
                         MlpWorkspace& ws) const {
  const int B = batch.inputs.rows;
  const int nl = static_cast<int>(layers_.size());
  ws.z.resize(nl);
  ws.a.resize(nl > 1 ? nl - 1 : 0);

  const Matrix* prev = &batch.inputs;
  for (int l = 0; l < nl; ++l) {
    const LayerLayout& lay = layers_[l];
    resize(ws.z[l], B, lay.out);
    CMapM W(w.data() + lay.w_offset, lay.out, lay.in);
    CMapV b(w.data() + lay.b_offset, lay.out);
    MapM Z = mat(ws.z[l]);
    Z.noalias() = cmat(*prev) * W.transpose();
    Z.rowwise() += b.transpose();
    if (l < nl - 1) {
      resize(ws.a[l], B, lay.out);
      mat(ws.a[l]) = Z.cwiseMax(0.0);
      prev = &ws.a[l];
    }
  }

  const Matrix& logits = ws.z[nl - 1];
  CMapM Z = cmat(logits);
  double loss = 0.0;
  for (int i = 0; i < B; ++i) {
    auto row = Z.row(i).array();
    double m = row.maxCoeff();
    double lse = m + std::log((row - m).exp().sum());
    loss += lse - Z(i, batch.labels[static_cast<std::size_t>(i)]);
  }
  loss /= B;
  if (!std::isfinite(loss)) diagnose_nonfinite(ws);
  return loss;
}

double MlpGraph::evaluate(std::span<const double> w, const LabeledBatch& batch,
                          MlpWorkspace& ws) const {
  check_params(w);
  check_batch(batch);
  return forward(w, batch, ws);
}

void MlpGraph::gradient(std::span<const double> w, const LabeledBatch& batch,
                        MlpWorkspace& ws, FlatVector& grad) const {
  check_params(w);
  check_batch(batch);
  forward(w, batch, ws);

  const int B = batch.inputs.rows;
  const int nl = static_cast<int>(layers_.size());
  grad.resize(static_cast<std::size_t>(param_count_));

  // Output adjoint: (softmax - onehot) / B.
  resize(ws.adj, B, layers_[nl - 1].out);
  mat(ws.adj) = cmat(ws.z[nl - 1]);
  softmax_in_place(mat(ws.adj));
  {
    MapM G = mat(ws.adj);
    for (int i = 0; i < B; ++i) G(i, batch.labels[static_cast<std::size_t>(i)]) -= 1.0;
    G /= static_cast<double>(B);
  }

  for (int l = nl - 1; l >= 0; --l) {
    const LayerLayout& lay = layers_[l];
    const Matrix& prev_a = (l == 0) ? batch.inputs : ws.a[l - 1];
    CMapM G = cmat(ws.adj);
    MapM dW(grad.data() + lay.w_offset, lay.out, lay.in);
    MapV db(grad.data() + lay.b_offset, lay.out);
    dW.noalias() = G.transpose() * cmat(prev_a);
    db = G.colwise().sum();
    if (l > 0) {
      CMapM W(w.data() + lay.w_offset, lay.out, lay.in);
      resize(ws.adj_next, B, lay.in);
      MapM Gp = mat(ws.adj_next);
      Gp.noalias() = G * W;
      CMapM Zp = cmat(ws.z[l - 1]);
      Gp = (Zp.array() > 0.0).select(Gp, 0.0);
      std::swap(ws.adj, ws.adj_next);
    }
  }
}

void MlpGraph::hvp(std::span<const double> w, const LabeledBatch& batch,
                   std::span<const double> v, MlpWorkspace& ws, FlatVector& hv) const {
  check_params(w);
  check_batch(batch);
  if (v.size() != static_cast<std::size_t>(param_count_)) {
    throw ConfigError("direction vector has " + std::to_string(v.size()) +
                      " entries, model expects " + std::to_string(param_count_));
  }
  forward(w, batch, ws);

  const int B = batch.inputs.rows;
  const int nl = static_cast<int>(layers_.size());
  hv.resize(static_cast<std::size_t>(param_count_));
  ws.zt.resize(nl);
  ws.at.resize(nl > 1 ? nl - 1 : 0);

  // Forward tangent sweep: differentiate the forward pass along direction v.
  const Matrix* prev_a = &batch.inputs;
  const Matrix* prev_at = nullptr;  // tangent of the input is zero
  for (int l = 0; l < nl; ++l) {
    const LayerLayout& lay = layers_[l];
    CMapM W(w.data() + lay.w_offset, lay.out, lay.in);
    CMapM V(v.data() + lay.w_offset, lay.out, lay.in);
    CMapV c(v.data() + lay.b_offset, lay.out);
    resize(ws.zt[l], B, lay.out);
    MapM Zt = mat(ws.zt[l]);
    Zt.noalias() = cmat(*prev_a) * V.transpose();
    Zt.rowwise() += c.transpose();
    if (prev_at != nullptr) Zt.noalias() += cmat(*prev_at) * W.transpose();
    if (l < nl - 1) {
      resize(ws.at[l], B, lay.out);
      CMapM Z = cmat(ws.z[l]);
      mat(ws.at[l]) = (Z.array() > 0.0).select(Zt, 0.0);
      prev_a = &ws.a[l];
      prev_at = &ws.at[l];
    }
  }

  // Adjoint and its tangent at the output.
  const int C = layers_[nl - 1].out;
  resize(ws.adj, B, C);
  resize(ws.adj_t, B, C);
  mat(ws.adj) = cmat(ws.z[nl - 1]);
  softmax_in_place(mat(ws.adj));
  {
    MapM P = mat(ws.adj);
    MapM Pt = mat(ws.adj_t);
    CMapM Zt = cmat(ws.zt[nl - 1]);
    // d softmax = p .* (zt - <p, zt>) row-wise.
    Eigen::VectorXd inner = (P.array() * Zt.array()).rowwise().sum();
    Pt = P.array() * (Zt.array().colwise() - inner.array());
    for (int i = 0; i < B; ++i) P(i, batch.labels[static_cast<std::size_t>(i)]) -= 1.0;
    P /= static_cast<double>(B);
    Pt /= static_cast<double>(B);
  }

  // Reverse tangent sweep. ReLU is piecewise linear, so its mask is constant
  // along the tangent direction and contributes no second-order term.
  for (int l = nl - 1; l >= 0; --l) {
    const LayerLayout& lay = layers_[l];
    const Matrix& pa = (l == 0) ? batch.inputs : ws.a[l - 1];
    const Matrix* pat = (l == 0) ? nullptr : &ws.at[l - 1];
    CMapM G = cmat(ws.adj);
    CMapM Gt = cmat(ws.adj_t);
    MapM dWt(hv.data() + lay.w_offset, lay.out, lay.in);
    MapV dbt(hv.data() + lay.b_offset, lay.out);
    dWt.noalias() = Gt.transpose() * cmat(pa);
    if (pat != nullptr) dWt.noalias() += G.transpose() * cmat(*pat);
    dbt = Gt.colwise().sum();
    if (l > 0) {
      CMapM W(w.data() + lay.w_offset, lay.out, lay.in);
      CMapM V(v.data() + lay.w_offset, lay.out, lay.in);
      resize(ws.adj_next, B, lay.in);
      resize(ws.adj_t_next, B, lay.in);
      MapM Gp = mat(ws.adj_next);
      MapM Gtp = mat(ws.adj_t_next);
      Gp.noalias() = G * W;
      Gtp.noalias() = Gt * W;
      Gtp.noalias() += G * V;
      CMapM Zp = cmat(ws.z[l - 1]);
      Gp = (Zp.array() > 0.0).select(Gp, 0.0);
      Gtp = (Zp.array() > 0.0).select(Gtp, 0.0);
      std::swap(ws.adj, ws.adj_next);
      std::swap(ws.adj_t, ws.adj_t_next);
    }
  }
}

void MlpGraph::logits(std::span<const double> w, const Matrix& inputs,
                      Matrix& out) const {
  check_params(w);
  if (inputs.rows <= 0) throw ConfigError("logits called with an empty input matrix");
  if (inputs.cols != input_dim()) {
    throw ConfigError("input matrix has " + std::to_string(inputs.cols) +
                      " features per row, model input dimension is " +
                      std::to_string(input_dim()));
  }
  const int B = inputs.rows;
  const int nl = static_cast<int>(layers_.size());
  Matrix buf_a, buf_b;
  const Matrix* prev = &inputs;
  for (int l = 0; l < nl; ++l) {
    const LayerLayout& lay = layers_[l];
    Matrix& dst = (l == nl - 1) ? out : ((l % 2 == 0) ? buf_a : buf_b);
    resize(dst, B, lay.out);
    CMapM W(w.data() + lay.w_offset, lay.out, lay.in);
    CMapV b(w.data() + lay.b_offset, lay.out);
    MapM Z = mat(dst);
    Z.noalias() = cmat(*prev) * W.transpose();
    Z.rowwise() += b.transpose();
    if (l < nl - 1) {
      Z = Z.cwiseMax(0.0);
      prev = &dst;
    }
  }
}

}  // namespace plastic
