#pragma once

#include <memory>
#include <string>

#include "fcv/core.hpp"

namespace fcv {

/// Full problem context: operator F, spatial weights W, frequency weights
/// W_hat and data f. Weight vectors are validated against the operator's
/// shapes at construction; lambda varies per solve.
struct TikhonovProblem {
  std::shared_ptr<const FourierOperator> op;
  rvec spatial_weights;
  rvec frequency_weights;
  cvec data;

  TikhonovProblem(std::shared_ptr<const FourierOperator> fourier_op, rvec w, rvec w_hat, cvec f);

  std::size_t n_nodes() const { return op->node_set().size(); }
  std::size_t n_coeffs() const { return op->index_set().size(); }
};

enum class SolvePath { Diagonal, Lsqr };

struct SolverReport {
  SolvePath path = SolvePath::Diagonal;
  int iterations = 0;  // 0 on the diagonal path
  /// ||F^H W (F x - f) + lambda W_hat x|| / ||F^H W f||. Filled by LSQR;
  /// the diagonal path solves the normal equations entrywise and leaves it
  /// at zero (verify with normal_equation_residual when needed).
  double normal_residual = 0.0;
  bool converged = true;
  bool breakdown = false;
};

struct SolveResult {
  cvec coefficients;
  SolverReport report;
};

struct LsqrOptions {
  int max_iterations = 20;
  double tolerance = 1e-10;  // on the relative normal-equation residual
};

/// Closed-form minimizer when F^H W F is the known diagonal D (certified
/// exact quadrature): x = diag(1/(D_n + lambda w_hat_n)) F^H W f.
SolveResult solve_diagonal(const TikhonovProblem& p, const rvec& gram_diagonal, double lambda);

/// LSQR on the stacked system [W^{1/2} F; sqrt(lambda) W_hat^{1/2}] x =
/// [W^{1/2} f; 0]; stops on the normal-equation residual estimate or the
/// iteration cap. On breakdown the partial iterate is returned flagged.
SolveResult solve_lsqr(const TikhonovProblem& p, double lambda, const LsqrOptions& opts = {});

/// The Tikhonov objective ||F x - f||_W^2 + lambda ||x||_{W_hat}^2.
double tikhonov_objective(const TikhonovProblem& p, double lambda, const cvec& coefficients);

/// Relative normal-equation residual of a candidate solution,
/// ||F^H W (F x - f) + lambda W_hat x|| / ||F^H W f||.
double normal_equation_residual(const TikhonovProblem& p, double lambda, const cvec& x);

}  // namespace fcv
