#pragma once

#include <functional>
#include <span>
#include <vector>

#include "plastic/flat_vector.hpp"
#include "plastic/matrix.hpp"
#include "plastic/objective.hpp"

// Independent reference implementations the library is tested against.
// Everything here is deliberately naive: scalar loops, no shared code with
// the library's differentiation or linear-algebra paths.
namespace oracle {

using plastic::FlatVector;
using plastic::Matrix;

using ScalarFn = std::function<double(const FlatVector&)>;
using GradFn = std::function<FlatVector(const FlatVector&)>;

/// Central finite-difference gradient of a black-box scalar function.
FlatVector fd_gradient(const ScalarFn& f, const FlatVector& w, double h);

/// Central finite difference of gradients along v: (g(w+hv) - g(w-hv))/(2h),
/// the reference for Hessian-vector products.
FlatVector fd_hvp(const GradFn& grad, const FlatVector& w, const FlatVector& v,
                  double h);

/// Dense Hessian assembled column-by-column from the objective's own HVP on
/// basis vectors, then symmetrized. Reference spectra come from
/// jacobi_eigenvalues of this matrix.
Matrix dense_hessian(plastic::Objective& obj, const FlatVector& w);

/// All eigenvalues of a symmetric matrix via cyclic Jacobi rotations,
/// ascending. Self-contained; used to cross-check power iteration.
std::vector<double> jacobi_eigenvalues(Matrix a);

/// The eigenvalue of largest magnitude (what power iteration converges to).
double dominant_eigenvalue(const std::vector<double>& eigs);

/// Straight-line forward pass: per-example scalar loops over the canonical
/// flat layout, ReLU on hidden layers, linear output.
Matrix naive_logits(const std::vector<int>& sizes, const FlatVector& w,
                    const Matrix& inputs);

/// Mean cross-entropy from naive_logits via per-example log-sum-exp.
double naive_mlp_ce(const std::vector<int>& sizes, const FlatVector& w,
                    const Matrix& inputs, const std::vector<int>& labels);

/// max_i |a_i - b_i| / max(|b_i|, floor). The floor guards coordinates whose
/// reference value sits at the finite-difference noise level; above it the
/// measure is plain relative error.
double max_rel_err(std::span<const double> a, std::span<const double> b,
                   double floor);

}  // namespace oracle
