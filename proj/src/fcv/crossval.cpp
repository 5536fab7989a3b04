#include "fcv/crossval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "fcv/dct.hpp"
#include "fcv/error.hpp"
#include "fcv/operators.hpp"
#include "fcv/quadrature.hpp"

namespace fcv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

void check_dense_guard(std::size_t ni, std::size_t nx) {
  if (ni > 2048 || ni * nx > 4'000'000)
    fail_validation("dense assembly guard exceeded (|I| = " + std::to_string(ni) +
                    ", |X| = " + std::to_string(nx) + ")");
}

MatrixXcd dense_fourier_matrix(const FourierOperator& op) {
  const std::size_t nx = op.node_set().size();
  const std::size_t ni = op.index_set().size();
  MatrixXcd f(nx, ni);
  cvec row(ni);
  for (std::size_t x = 0; x < nx; ++x) {
    op.basis_row(x, row);
    for (std::size_t i = 0; i < ni; ++i) f(x, i) = row[i];
  }
  return f;
}

MatrixXcd dense_normal_matrix(const MatrixXcd& f, const rvec& w, const rvec& w_hat, double lambda) {
  MatrixXcd a = MatrixXcd::Zero(f.cols(), f.cols());
  for (Eigen::Index x = 0; x < f.rows(); ++x)
    a.noalias() += w[static_cast<std::size_t>(x)] * f.row(x).adjoint() * f.row(x);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    a(i, i) += lambda * w_hat[static_cast<std::size_t>(i)];
  return a;
}

}  // namespace

double HatDiagonals::mean() const {
  double s = 0.0;
  for (double h : values) s += h;
  return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

HatDiagonals hat_diagonals_torus(const rvec& spatial_weights, const rvec& freq_weights,
                                 double lambda, HatKind kind) {
  double s = 0.0;
  for (double wh : freq_weights) s += 1.0 / (1.0 + lambda * wh);
  HatDiagonals out;
  out.kind = kind;
  out.values.resize(spatial_weights.size());
  for (std::size_t i = 0; i < spatial_weights.size(); ++i) out.values[i] = spatial_weights[i] * s;
  return out;
}

namespace {

bool is_chebyshev_first_kind(const NodeSet& nodes, int n) {
  if (static_cast<int>(nodes.size()) != n) return false;
  const NodeSet ref = chebyshev_nodes(n);
  return std::equal(nodes.flat().begin(), nodes.flat().end(), ref.flat().begin());
}

}  // namespace

HatDiagonals hat_diagonals_interval(const NodeSet& nodes, const rvec& spatial_weights,
                                    const rvec& freq_weights, double lambda, HatKind kind,
                                    bool use_dct_route) {
  if (nodes.domain().kind != DomainKind::Interval)
    fail_validation("hat_diagonals_interval needs interval nodes");
  const int n = static_cast<int>(freq_weights.size());
  if (spatial_weights.size() != nodes.size())
    fail_validation("hat_diagonals_interval: weight count mismatch");

  double tail = 0.0;  // sum_{n>=1} 1/(pi/2 + lambda w_hat_n)
  for (int k = 1; k < n; ++k) tail += 1.0 / (kPi / 2.0 + lambda * freq_weights[k]);
  const double head = 2.0 / (kPi + lambda * freq_weights[0]);

  HatDiagonals out;
  out.kind = kind;
  out.values.resize(nodes.size());

  if (use_dct_route) {
    if (!is_chebyshev_first_kind(nodes, n))
      fail_validation("hat_diagonals_interval: the DCT route needs the N Chebyshev nodes of first kind");
    // one DCT-I of size 2N+1; the cosine sum plus the zero-order term appear
    // at the odd output entries scaled by sqrt(N)
    rvec b(2 * n + 1, 0.0);
    b[0] = 2.0 * std::sqrt(2.0) / (kPi + lambda * freq_weights[0]);
    for (int k = 1; k < n; ++k) b[2 * k] = 1.0 / (kPi / 2.0 + lambda * freq_weights[k]);
    const rvec t = dct_i(b);
    const double scale = std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m)
      out.values[m] = 0.5 * spatial_weights[m] * (scale * t[2 * m + 1] + tail);
    return out;
  }

  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const double y = std::acos(nodes.coords(m)[0]);
    double cos_sum = 0.0;
    for (int k = 1; k < n; ++k)
      cos_sum += std::cos(2.0 * k * y) / (kPi / 2.0 + lambda * freq_weights[k]);
    out.values[m] = 0.5 * spatial_weights[m] * (cos_sum + tail + head);
  }
  return out;
}

HatDiagonals hat_diagonals_sphere(const rvec& spatial_weights, const rvec& freq_weights,
                                  const IndexSet& set, double lambda, HatKind kind) {
  if (set.kind() != IndexKind::SphericalDegrees)
    fail_validation("hat_diagonals_sphere needs a spherical index set");
  const int nn = set.param_n();
  // isotropy: w_hat must depend on the degree only
  rvec per_degree(nn + 1, 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const int deg = set.index(i)[0];
    if (set.index(i)[1] == -deg)
      per_degree[deg] = freq_weights[i];
    else if (freq_weights[i] != per_degree[deg])
      fail_validation("hat_diagonals_sphere: frequency weights are not degree-isotropic");
  }
  double s = 0.0;
  for (int deg = 0; deg <= nn; ++deg)
    s += (2.0 * deg + 1.0) / (1.0 + lambda * per_degree[deg]);
  s /= 4.0 * kPi;
  HatDiagonals out;
  out.kind = kind;
  out.values.resize(spatial_weights.size());
  for (std::size_t i = 0; i < spatial_weights.size(); ++i) out.values[i] = spatial_weights[i] * s;
  return out;
}

HatDiagonals hat_diagonals_closed_form(const FourierOperator& op, const rvec& spatial_weights,
                                       const rvec& freq_weights, double lambda, HatKind kind) {
  switch (op.index_set().kind()) {
    case IndexKind::TensorGrid:
    case IndexKind::HyperbolicCross:
      return hat_diagonals_torus(spatial_weights, freq_weights, lambda, kind);
    case IndexKind::ChebyshevDegrees: {
      const int n = op.index_set().param_n();
      const bool dct = is_chebyshev_first_kind(op.node_set(), n);
      return hat_diagonals_interval(op.node_set(), spatial_weights, freq_weights, lambda, kind, dct);
    }
    case IndexKind::SphericalDegrees:
      return hat_diagonals_sphere(spatial_weights, freq_weights, op.index_set(), lambda, kind);
  }
  fail_validation("hat_diagonals_closed_form: unsupported index kind");
}

HatDiagonals hat_diagonals_bruteforce(const FourierOperator& op, const rvec& spatial_weights,
                                      const rvec& freq_weights, double lambda) {
  const std::size_t nx = op.node_set().size();
  const std::size_t ni = op.index_set().size();
  check_dense_guard(ni, nx);

  const MatrixXcd f = dense_fourier_matrix(op);
  const MatrixXcd a = dense_normal_matrix(f, spatial_weights, freq_weights, lambda);
  Eigen::LDLT<MatrixXcd> ldlt(a);
  if (ldlt.info() != Eigen::Success) fail_numeric("hat_diagonals_bruteforce: factorization failed");
  const MatrixXcd sol = ldlt.solve(f.adjoint());  // A^{-1} F^H

  HatDiagonals out;
  out.kind = HatKind::Exact;
  out.values.resize(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    const cplx h = (f.row(x) * sol.col(x)).value();
    out.values[x] = spatial_weights[x] * h.real();
  }
  return out;
}

ScoreValues scores_from_residual(const cvec& residual, const HatDiagonals& diag) {
  if (residual.size() != diag.values.size())
    fail_validation("scores_from_residual: residual/diagonal size mismatch");
  ScoreValues out;
  bool p_ok = true;
  double p = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    const double denom = 1.0 - diag.values[i];
    if (denom <= kHatGuard) {
      p_ok = false;
      break;
    }
    p += std::norm(residual[i]) / (denom * denom);
  }
  out.p = p_ok ? p : kInf;

  const double mean_denom = 1.0 - diag.mean();
  if (mean_denom <= kHatGuard) {
    out.v = kInf;
  } else {
    double r2 = 0.0;
    for (const cplx& z : residual) r2 += std::norm(z);
    out.v = r2 / (mean_denom * mean_denom);
  }
  return out;
}

double residual_w_norm(const cvec& residual, const rvec& spatial_weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i)
    s += spatial_weights[i] * std::norm(residual[i]);
  return std::sqrt(s);
}

double score_loocv_direct(const TikhonovProblem& p, double lambda) {
  const std::size_t nx = p.n_nodes();
  const std::size_t ni = p.n_coeffs();
  check_dense_guard(ni, nx);

  const MatrixXcd f = dense_fourier_matrix(*p.op);
  const MatrixXcd a = dense_normal_matrix(f, p.spatial_weights, p.frequency_weights, lambda);
  VectorXcd b = VectorXcd::Zero(ni);
  for (std::size_t x = 0; x < nx; ++x)
    b += p.spatial_weights[x] * p.data[x] * f.row(x).adjoint();

  double score = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const MatrixXcd ax = a - p.spatial_weights[x] * (f.row(x).adjoint() * f.row(x));
    const VectorXcd bx = b - p.spatial_weights[x] * p.data[x] * f.row(x).adjoint();
    Eigen::LDLT<MatrixXcd> ldlt(ax);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14)
      fail_numeric("score_loocv_direct: singular reduced system at node " + std::to_string(x) +
                   " (h_xx = 1 boundary)");
    const VectorXcd y = ldlt.solve(bx);
    const double check = (ax * y - bx).norm();
    if (!std::isfinite(check) || check > 1e-6 * (bx.norm() + 1.0))
      fail_numeric("score_loocv_direct: singular reduced system at node " + std::to_string(x));
    const cplx predicted = (f.row(x) * y).value();
    score += std::norm(predicted - p.data[x]);
  }
  return score;
}

double score_loocv_sherman_morrison(const TikhonovProblem& p, double lambda) {
  const std::size_t nx = p.n_nodes();
  const std::size_t ni = p.n_coeffs();
  check_dense_guard(ni, nx);

  const MatrixXcd f = dense_fourier_matrix(*p.op);
  const MatrixXcd a = dense_normal_matrix(f, p.spatial_weights, p.frequency_weights, lambda);
  Eigen::LDLT<MatrixXcd> ldlt(a);
  const MatrixXcd ainv = ldlt.solve(MatrixXcd::Identity(ni, ni));
  VectorXcd b = VectorXcd::Zero(ni);
  for (std::size_t x = 0; x < nx; ++x)
    b += p.spatial_weights[x] * p.data[x] * f.row(x).adjoint();

  double score = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const VectorXcd arow = ainv * f.row(x).adjoint();  // A^{-1} F_x^H
    const cplx hx = (f.row(x) * arow).value() * p.spatial_weights[x];
    const double denom = 1.0 - hx.real();
    if (std::abs(denom) < 1e-14)
      fail_numeric("score_loocv_sherman_morrison: h_xx = 1 at node " + std::to_string(x));
    const MatrixXcd ax_inv =
        ainv + (p.spatial_weights[x] / denom) * (arow * (f.row(x) * ainv));
    const VectorXcd bx = b - p.spatial_weights[x] * p.data[x] * f.row(x).adjoint();
    const cplx predicted = (f.row(x) * (ax_inv * bx)).value();
    score += std::norm(predicted - p.data[x]);
  }
  return score;
}

ScoreValues score_oracle_dense(const TikhonovProblem& p, double lambda) {
  const std::size_t nx = p.n_nodes();
  const std::size_t ni = p.n_coeffs();
  check_dense_guard(ni, nx);

  const MatrixXcd f = dense_fourier_matrix(*p.op);
  const MatrixXcd a = dense_normal_matrix(f, p.spatial_weights, p.frequency_weights, lambda);
  Eigen::LDLT<MatrixXcd> ldlt(a);
  if (ldlt.info() != Eigen::Success) fail_numeric("score_oracle_dense: factorization failed");

  VectorXcd b = VectorXcd::Zero(ni);
  for (std::size_t x = 0; x < nx; ++x)
    b += p.spatial_weights[x] * p.data[x] * f.row(x).adjoint();
  const VectorXcd sol = ldlt.solve(b);
  const MatrixXcd cols = ldlt.solve(f.adjoint());  // A^{-1} F^H

  HatDiagonals diag;
  diag.kind = HatKind::Exact;
  diag.values.resize(nx);
  cvec residual(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    diag.values[x] = p.spatial_weights[x] * (f.row(x) * cols.col(x)).value().real();
    residual[x] = (f.row(x) * sol).value() - p.data[x];
  }
  return scores_from_residual(residual, diag);
}

ScoreKind parse_score_kind(const std::string& name) {
  if (name == "P") return ScoreKind::P;
  if (name == "V") return ScoreKind::V;
  if (name == "Pt") return ScoreKind::PApprox;
  if (name == "Vt") return ScoreKind::VApprox;
  fail_validation("unknown score kind '" + name + "' (expected P, V, Pt, Vt)");
}

std::string score_kind_name(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::P: return "P";
    case ScoreKind::V: return "V";
    case ScoreKind::PApprox: return "Pt";
    case ScoreKind::VApprox: return "Vt";
  }
  return "?";
}

ScoreEvaluator::ScoreEvaluator(TikhonovProblem problem, EvaluatorOptions opts)
    : problem_(std::move(problem)), opts_(std::move(opts)) {
  gram_diagonal_ = exact_gram_diagonal(problem_.op->index_set());
  if (opts_.truth && opts_.truth->size() != problem_.n_coeffs())
    fail_validation("ScoreEvaluator: truth spectrum size mismatch");
}

ScoreCurveEntry ScoreEvaluator::evaluate(double lambda) const {
  ScoreCurveEntry row;
  row.lambda = lambda;

  SolveResult solved = opts_.certified ? solve_diagonal(problem_, gram_diagonal_, lambda)
                                       : solve_lsqr(problem_, lambda, opts_.lsqr);
  row.solver_iterations = solved.report.iterations;

  static thread_local cvec residual;
  residual.resize(problem_.n_nodes());
  problem_.op->apply(std::span<const cplx>(solved.coefficients), std::span<cplx>(residual));
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= problem_.data[i];
  row.residual = residual_w_norm(residual, problem_.spatial_weights);

  const HatKind kind = opts_.certified ? HatKind::Exact : HatKind::Approximated;
  const HatDiagonals diag = hat_diagonals_closed_form(*problem_.op, problem_.spatial_weights,
                                                      problem_.frequency_weights, lambda, kind);
  const ScoreValues sv = scores_from_residual(residual, diag);
  if (opts_.certified) {
    row.p = sv.p;
    row.v = sv.v;
  } else {
    row.p_approx = sv.p;
    row.v_approx = sv.v;
  }

  if (opts_.with_oracle) {
    const ScoreValues ov = score_oracle_dense(problem_, lambda);
    if (opts_.certified) {
      // oracle values land in the approximated slots for side-by-side CSVs
      row.p_approx = ov.p;
      row.v_approx = ov.v;
    } else {
      row.p = ov.p;
      row.v = ov.v;
    }
  }

  if (opts_.truth)
    row.l2_error = parseval_error(problem_.op->index_set(), solved.coefficients, *opts_.truth);
  return row;
}

double ScoreEvaluator::score_at(double lambda, ScoreKind kind) const {
  SolveResult solved = opts_.certified ? solve_diagonal(problem_, gram_diagonal_, lambda)
                                       : solve_lsqr(problem_, lambda, opts_.lsqr);
  cvec residual = problem_.op->apply(solved.coefficients);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= problem_.data[i];
  const bool wants_exact = kind == ScoreKind::P || kind == ScoreKind::V;
  if (wants_exact && !opts_.certified)
    fail_certification("exact score requested on an uncertified problem");
  const HatKind hk = wants_exact ? HatKind::Exact : HatKind::Approximated;
  const HatDiagonals diag = hat_diagonals_closed_form(*problem_.op, problem_.spatial_weights,
                                                      problem_.frequency_weights, lambda, hk);
  const ScoreValues sv = scores_from_residual(residual, diag);
  return (kind == ScoreKind::P || kind == ScoreKind::PApprox) ? sv.p : sv.v;
}

rvec log_lambda_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo)) fail_validation("lambda range must satisfy 0 < lo < hi");
  if (points < 2) fail_validation("lambda grid needs at least 2 points");
  rvec grid(points);
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo * std::exp(step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

ScoreCurve score_curve(const ScoreEvaluator& eval, const rvec& lambdas, int threads) {
  ScoreCurve curve;
  curve.entries.resize(lambdas.size());
  const int n_threads =
      std::max(1, std::min<int>(threads, static_cast<int>(lambdas.size())));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) curve.entries[i] = eval.evaluate(lambdas[i]);
    return curve;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= lambdas.size()) return;
        curve.entries[i] = eval.evaluate(lambdas[i]);
      }
    });
  for (auto& th : pool) th.join();
  return curve;
}

MinimizeResult minimize_scalar(const std::function<double(double)>& score, double lambda_lo,
                               double lambda_hi, int grid_points) {
  if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo))
    fail_validation("minimize: lambda range must satisfy 0 < lo < hi");
  if (grid_points < 3) fail_validation("minimize: need at least 3 grid points");

  // descending coarse scan from lambda_hi
  rvec grid = log_lambda_grid(lambda_lo, lambda_hi, grid_points);
  std::reverse(grid.begin(), grid.end());
  rvec vals(grid.size());
  std::size_t prefix = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = score(grid[i]);
    if (!std::isfinite(vals[i])) {
      prefix = i;
      break;
    }
  }
  if (prefix == 0) fail_numeric("minimize: no finite score on the grid");

  // first strict local minimum from the large-lambda side; everything below
  // it is the potential oscillation zone and stays out of the bracket.
  // Strictness (relative 1e-12) keeps saturation plateaus at large lambda
  // from registering as minima.
  std::size_t j = prefix;
  for (std::size_t i = 0; i + 1 < prefix; ++i) {
    const bool left_ok = i == 0 || vals[i] <= vals[i - 1];
    const bool right_ok = vals[i] < vals[i + 1] * (1.0 - 1e-12);
    if (left_ok && right_ok) {
      j = i;
      break;
    }
  }
  if (j == prefix) {  // monotone within the finite prefix
    j = 0;
    for (std::size_t i = 1; i < prefix; ++i)
      if (vals[i] < vals[j]) j = i;
  }

  MinimizeResult out;
  out.boundary = j == 0 || j + 1 >= prefix;

  // golden-section refinement in log space inside the bracketing triple
  const double t_hi = std::log(grid[j == 0 ? 0 : j - 1]);
  const double t_lo = std::log(grid[std::min(j + 1, prefix - 1)]);
  auto g = [&](double t) {
    const double s = score(std::exp(t));
    return std::isfinite(s) ? s : kInf;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = t_lo, b = t_hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 60 && (b - a) > 1e-10 * std::max(1.0, std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
    }
  }
  double t_best = 0.5 * (a + b);
  double f_best = g(t_best);
  // keep the best point actually seen
  if (f1 < f_best) {
    t_best = x1;
    f_best = f1;
  }
  if (f2 < f_best) {
    t_best = x2;
    f_best = f2;
  }
  if (vals[j] < f_best) {
    t_best = std::log(grid[j]);
    f_best = vals[j];
  }
  out.lambda_star = std::exp(t_best);
  out.score_star = f_best;
  return out;
}

MinimizeResult minimize_lambda(const ScoreEvaluator& eval, ScoreKind kind, double lambda_lo,
                               double lambda_hi, int grid_points, int threads) {
  MinimizeResult res = minimize_scalar([&](double l) { return eval.score_at(l, kind); }, lambda_lo,
                                       lambda_hi, grid_points);
  res.curve = score_curve(eval, log_lambda_grid(lambda_lo, lambda_hi, grid_points), threads);
  return res;
}

double parseval_error(const IndexSet& set, const cvec& a, const cvec& b) {
  if (a.size() != set.size() || b.size() != set.size())
    fail_validation("parseval_error: size mismatch");
  double s = 0.0;
  if (set.kind() == IndexKind::ChebyshevDegrees) {
    for (std::size_t i = 0; i < a.size(); ++i)
      s += (i == 0 ? kPi : kPi / 2.0) * std::norm(a[i] - b[i]);
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  }
  return std::sqrt(s);
}

}  // namespace fcv
