#pragma once

// Test-only reference implementations, kept independent of the library's
// computation paths: dense basis matrices assembled entry by entry from the
// defining formulas, a separately-written normalized Legendre evaluator,
// closed-form low-degree spherical harmonics, and brute-force enumerations.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "fcv/core.hpp"

namespace oracle {

using fcv::cplx;
using fcv::cvec;
using fcv::rvec;

/// phi_n(x) straight from the basis definition (no shared code with the
/// library's operators).
cplx basis_value(const fcv::IndexSet& set, std::size_t index_pos, std::span<const double> x);

/// Dense Fourier matrix (|X| x |I|) via basis_value.
Eigen::MatrixXcd dense_matrix(const fcv::IndexSet& set, const fcv::NodeSet& nodes);

/// Normalized associated Legendre including the sqrt((2l+1)(l-m)!/(4pi(l+m)!))
/// factor and Condon-Shortley phase; scalar per (l,m) evaluation.
double plegendre_norm(int l, int m, double x);

/// Y_{n,k} from plegendre_norm (all n) -- independent of the library's batch
/// recurrence.
cplx spherical_harmonic_ref(int n, int k, std::span<const double> x);

/// Closed-form Y_{n,k} for n <= 3 from the standard table.
cplx spherical_harmonic_table(int n, int k, std::span<const double> x);

/// Brute-force hyperbolic cross enumeration over the bounding box.
std::vector<std::vector<int>> hyperbolic_cross_bruteforce(int dim, int radius);

/// Dense Tikhonov solve (F^H W F + lambda W_hat)^{-1} F^H W f via Eigen.
cvec dense_tikhonov_solve(const Eigen::MatrixXcd& f_mat, const rvec& w, const rvec& w_hat,
                          double lambda, const cvec& data);

/// Dense hat diagonals w_x F_x A^{-1} F_x^H.
rvec dense_hat_diagonals(const Eigen::MatrixXcd& f_mat, const rvec& w, const rvec& w_hat,
                         double lambda);

/// Random complex vector, standard normal parts.
cvec random_cvec(std::size_t n, std::mt19937_64& rng);

}  // namespace oracle
