#pragma once

#include <limits>
#include <memory>
#include <optional>

#include "fcv/core.hpp"
#include "fcv/operators.hpp"

namespace fcv {

/// Node/weight pair, optionally certified exact up to some degree. Weight
/// sums match the domain measure (1 / pi / 4pi).
struct QuadratureRule {
  NodeSet nodes;
  rvec weights;
  /// Exactness degree, or nullopt for approximate (e.g. Voronoi) rules.
  std::optional<int> exactness_degree;
};

/// Gauss-Legendre nodes and weights on [-1,1]; Newton iteration on the
/// Legendre recurrence, Chebyshev-asymptotic initial guesses, tolerance
/// 1e-14, at most 100 iterations per root.
void gauss_legendre(int n, rvec& nodes, rvec& weights);

/// N^d equispaced nodes m/N with uniform weights N^{-d}; exact for all
/// frequencies in the grid [-N,N)^d, hence on the difference set of the
/// size-N grid.
QuadratureRule equispaced_torus_rule(int dim, int n);

/// Lattice nodes with weights 1/M plus the reconstruction flag from the
/// residue-class collision check (F^H W F = I iff no collision).
struct Rank1RuleResult {
  QuadratureRule rule;
  bool reconstructing;
};
Rank1RuleResult rank1_rule(const Rank1Lattice& lattice, const IndexSet& set);

/// Chebyshev nodes of first kind with uniform weights pi/N; exact up to
/// degree 2N-2 in the Chebyshev measure.
QuadratureRule chebyshev_rule(int n);

/// (N+1) Gauss-Legendre colatitudes x (2N+2) equispaced longitudes; exact
/// for spherical harmonics up to degree 2N+1. Node order: colatitude-major.
QuadratureRule gauss_tensor_sphere_rule(int max_degree);

/// Diagonal of F^H W F under exact quadrature: all-ones for torus/sphere
/// bases, (pi, pi/2, ..., pi/2) for Chebyshev.
rvec exact_gram_diagonal(const IndexSet& set);

/// max |[F^H W F]_{n1,n2} - D_{n1,n2}| with D the exact Gram diagonal;
/// assembled row by row in O(|X| |I|^2). `max_flops` guards the dense
/// assembly; beyond it a sampled subset of |I| column pairs is checked and
/// the result is a lower bound of the true deviation.
double gram_deviation(const FourierOperator& op, const rvec& weights,
                      double max_flops = 4e9);

/// Covering radius of the node set in the domain metric, reported as a
/// certified upper bound: exact half-max-gap for the 1-d torus, candidate
/// max-min inflated by the candidate grid's own covering radius elsewhere.
double mesh_norm(const NodeSet& nodes);

/// Outcome of gating a rule before the exact fast paths are allowed.
struct CertifyResult {
  bool certified = false;
  /// "structural" for canonical constructions (bit-matched nodes and
  /// weights), "gram"/"gram-sampled" for the numeric diagnostic, "none".
  std::string method = "none";
  double gram_dev = std::numeric_limits<double>::quiet_NaN();
};

/// Certification gate for the closed-form fast paths: canonical grids, Chebyshev
/// nodes, Gauss-tensor sphere rules and reconstructing lattices pass
/// structurally; anything else must pass the Gram diagnostic below
/// `threshold`.
CertifyResult certify_quadrature(const FourierOperator& op, const rvec& weights,
                                 const Rank1Lattice* lattice = nullptr,
                                 double threshold = 1e-8, double max_flops = 4e9);

/// Both sides of the Voronoi-quadrature error bound for a Lipschitz test
/// function with constant L and known integral.
struct QuadratureBoundCheck {
  double lhs;  // |Q f - integral f|
  double rhs;  // L * mesh norm * domain measure
};
template <class F>
QuadratureBoundCheck quadrature_error_bound_check(const QuadratureRule& rule, F&& f,
                                                  double lipschitz, double integral) {
  double q = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    q += rule.weights[i] * f(rule.nodes.coords(i));
  return {std::abs(q - integral), lipschitz * mesh_norm(rule.nodes) * rule.nodes.domain().measure()};
}

}  // namespace fcv
