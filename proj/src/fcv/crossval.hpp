#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fcv/tikhonov.hpp"

namespace fcv {

enum class HatKind { Exact, Approximated };

/// Diagonal entries of the hat matrix H = F A^{-1} F^H W per node. Exact
/// diagonals satisfy 0 < h < 1 for lambda > 0; approximated ones (Voronoi
/// weights) may reach or exceed 1, which the score code must guard.
struct HatDiagonals {
  rvec values;
  HatKind kind = HatKind::Exact;

  double mean() const;
};

/// h_x = w_x sum_n 1/(1 + lambda w_hat_n); valid on any torus index set when
/// the weights form a rule exact on the difference set (exact kind), or with
/// Voronoi weights as the approximated hat diagonal.
HatDiagonals hat_diagonals_torus(const rvec& spatial_weights, const rvec& freq_weights,
                                 double lambda, HatKind kind);

/// The interval closed form
///   h_x = (w_x/2) ( sum_{n>=1} cos(2n arccos x)/(pi/2 + lambda w_hat_n)
///                 + sum_{n>=1} 1/(pi/2 + lambda w_hat_n)
///                 + 2/(pi + lambda w_hat_0) )
/// for rules exact to degree 2N-2. At the N Chebyshev nodes of first kind
/// the cosine sum collapses to one DCT-I of size 2N+1, reading the odd
/// output entries; both routes agree to machine precision.
HatDiagonals hat_diagonals_interval(const NodeSet& nodes, const rvec& spatial_weights,
                                    const rvec& freq_weights, double lambda, HatKind kind,
                                    bool use_dct_route);

/// Sphere closed form h_x = (w_x / 4pi) sum_n (2n+1)/(1 + lambda w_hat_n);
/// requires degree-isotropic frequency weights (checked).
HatDiagonals hat_diagonals_sphere(const rvec& spatial_weights, const rvec& freq_weights,
                                  const IndexSet& set, double lambda, HatKind kind);

/// Dispatch on the operator's domain to the matching closed form; `kind`
/// records whether `spatial_weights` are certified quadrature weights or
/// Voronoi approximations.
HatDiagonals hat_diagonals_closed_form(const FourierOperator& op, const rvec& spatial_weights,
                                       const rvec& freq_weights, double lambda, HatKind kind);

/// Dense reference: h_x = w_x F_{x,:} A^{-1} F_{x,:}^H by LDLT factorization.
/// Guarded to |I| <= 2048 and |I||X| <= 4e6 entries.
HatDiagonals hat_diagonals_bruteforce(const FourierOperator& op, const rvec& spatial_weights,
                                      const rvec& freq_weights, double lambda);

/// Guard on (1 - h): at or below this the P-type score is marked non-finite
/// rather than clamped, so the minimizer cannot be silently moved.
inline constexpr double kHatGuard = 1e-12;

struct ScoreValues {
  double p = 0.0;  // +inf when some (1 - h_x) <= guard
  double v = 0.0;  // +inf when (1 - mean h) <= guard
};

/// P-type and V-type scores from a residual r = F f_tilde - f:
///   P = sum |r_x|^2 / (1 - h_x)^2 ,  V = sum |r_x|^2 / (1 - mean h)^2.
ScoreValues scores_from_residual(const cvec& residual, const HatDiagonals& diag);

/// W-weighted residual norm ||H f - f||_W.
double residual_w_norm(const cvec& residual, const rvec& spatial_weights);

/// Reference leave-one-out score: solves the reduced normal equations for
/// every left-out node by dense factorization. Same dense-size guard as the
/// brute-force diagonals.
double score_loocv_direct(const TikhonovProblem& p, double lambda);

/// Same score through the rank-one-update identity
/// A_(x)^{-1} = A^{-1} + A^{-1} w_x F_x^H F_x A^{-1} / (1 - h_x).
double score_loocv_sherman_morrison(const TikhonovProblem& p, double lambda);

/// Fully dense reference evaluation of P and V: factorizes A once for both
/// the solve and the diagonals. Same dense-size guard as above.
ScoreValues score_oracle_dense(const TikhonovProblem& p, double lambda);

/// One row of a score-vs-lambda curve. Unset optionals mean "not computed";
/// +inf means guarded non-finite.
struct ScoreCurveEntry {
  double lambda = 0.0;
  std::optional<double> p, v, p_approx, v_approx;
  double residual = 0.0;  // ||H f - f||_W of the entry's solve
  std::optional<double> l2_error;
  int solver_iterations = 0;
};

struct ScoreCurve {
  std::vector<ScoreCurveEntry> entries;  // ascending lambda
};

enum class ScoreKind { P, V, PApprox, VApprox };

ScoreKind parse_score_kind(const std::string& name);
std::string score_kind_name(ScoreKind kind);

struct EvaluatorOptions {
  /// Certified exact quadrature: diagonal solve path + exact score names.
  bool certified = false;
  /// Additionally fill P,V from the dense brute-force oracle.
  bool with_oracle = false;
  LsqrOptions lsqr;
  /// Ground-truth spectrum for Parseval L2 errors, if known.
  std::optional<cvec> truth;
};

/// Evaluates all requested scores at one lambda: one Tikhonov solve, closed
/// form diagonals, score formulas. Pure and safe to call concurrently.
class ScoreEvaluator {
 public:
  ScoreEvaluator(TikhonovProblem problem, EvaluatorOptions opts);

  ScoreCurveEntry evaluate(double lambda) const;
  /// The score a minimizer should look at: P/V when certified, the
  /// approximated scores otherwise (requesting an exact kind on an
  /// uncertified problem is refused upstream).
  double score_at(double lambda, ScoreKind kind) const;

  const TikhonovProblem& problem() const { return problem_; }
  const EvaluatorOptions& options() const { return opts_; }
  bool certified() const { return opts_.certified; }

 private:
  TikhonovProblem problem_;
  EvaluatorOptions opts_;
  rvec gram_diagonal_;
  bool interval_dct_route_ = false;
};

/// Log-equispaced grid from lo to hi, ascending, K >= 2 points.
rvec log_lambda_grid(double lo, double hi, int points);

/// Parallel sweep over an ascending lambda grid; results are merged by index
/// so the curve is deterministic for any thread count.
ScoreCurve score_curve(const ScoreEvaluator& eval, const rvec& lambdas, int threads = 1);

struct MinimizeResult {
  double lambda_star = 0.0;
  double score_star = 0.0;
  /// Set when the coarse scan pinned the minimum at a grid/guard boundary.
  bool boundary = false;
  ScoreCurve curve;  // the coarse scan, all requested columns
};

/// Coarse log-grid scan descending from lambda_hi followed by golden-section
/// refinement of the bracketing triple around the first local minimum seen
/// from the large-lambda side. Non-finite (guarded) entries and anything
/// below them are excluded from bracketing, so the search cannot land in the
/// small-lambda oscillation zone.
MinimizeResult minimize_scalar(const std::function<double(double)>& score, double lambda_lo,
                               double lambda_hi, int grid_points);

MinimizeResult minimize_lambda(const ScoreEvaluator& eval, ScoreKind kind, double lambda_lo,
                               double lambda_hi, int grid_points, int threads = 1);

/// Parseval L2 distance between two coefficient vectors in the domain's
/// normalization: plain l2 for torus/sphere, the (pi, pi/2, ...) weighted
/// norm on the interval.
double parseval_error(const IndexSet& set, const cvec& a, const cvec& b);

}  // namespace fcv
