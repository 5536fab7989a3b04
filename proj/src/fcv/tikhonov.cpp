#include "fcv/tikhonov.hpp"

#include <cmath>

#include "fcv/error.hpp"

namespace fcv {

TikhonovProblem::TikhonovProblem(std::shared_ptr<const FourierOperator> fourier_op, rvec w,
                                 rvec w_hat, cvec f)
    : op(std::move(fourier_op)) {
  if (!op) fail_validation("TikhonovProblem: operator is null");
  spatial_weights = validate_spatial_weights(std::move(w), op->node_set().size());
  frequency_weights = validate_frequency_weights(std::move(w_hat), op->index_set());
  if (f.size() != op->node_set().size())
    fail_validation("TikhonovProblem: data length does not match node count");
  data = std::move(f);
}

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail_validation("lambda must be finite and >= 0");
}

double norm2(const cvec& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// normal-equation residual ||F^H W (F x - f) + lambda W_hat x||
double normal_residual(const TikhonovProblem& p, double lambda, const cvec& x) {
  cvec fx = p.op->apply(x);
  for (std::size_t i = 0; i < fx.size(); ++i) fx[i] = p.spatial_weights[i] * (fx[i] - p.data[i]);
  cvec g = p.op->adjoint_apply(fx);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += lambda * p.frequency_weights[i] * x[i];
  return norm2(g);
}

}  // namespace

SolveResult solve_diagonal(const TikhonovProblem& p, const rvec& gram_diagonal, double lambda) {
  check_lambda(lambda);
  if (gram_diagonal.size() != p.n_coeffs())
    fail_validation("solve_diagonal: Gram diagonal size mismatch");

  static thread_local cvec wf;
  wf.resize(p.n_nodes());
  for (std::size_t i = 0; i < wf.size(); ++i) wf[i] = p.spatial_weights[i] * p.data[i];
  cvec x(p.n_coeffs());
  p.op->adjoint_apply(std::span<const cplx>(wf), std::span<cplx>(x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double denom = gram_diagonal[i] + lambda * p.frequency_weights[i];
    if (!(denom > 0.0)) fail_numeric("solve_diagonal: non-positive diagonal entry");
    x[i] /= denom;
  }

  SolverReport rep;
  rep.path = SolvePath::Diagonal;
  rep.iterations = 0;
  return {std::move(x), rep};
}

double normal_equation_residual(const TikhonovProblem& p, double lambda, const cvec& x) {
  check_lambda(lambda);
  if (x.size() != p.n_coeffs()) fail_validation("normal_equation_residual: size mismatch");
  cvec wf(p.n_nodes());
  for (std::size_t i = 0; i < wf.size(); ++i) wf[i] = p.spatial_weights[i] * p.data[i];
  const double ref = norm2(p.op->adjoint_apply(wf));
  return ref > 0.0 ? normal_residual(p, lambda, x) / ref : 0.0;
}

SolveResult solve_lsqr(const TikhonovProblem& p, double lambda, const LsqrOptions& opts) {
  check_lambda(lambda);
  if (opts.max_iterations < 1) fail_validation("solve_lsqr: max_iterations must be >= 1");

  const std::size_t nx = p.n_nodes();
  const std::size_t ni = p.n_coeffs();
  rvec sqrt_w(nx), sqrt_reg(ni);
  for (std::size_t i = 0; i < nx; ++i) sqrt_w[i] = std::sqrt(p.spatial_weights[i]);
  for (std::size_t i = 0; i < ni; ++i) sqrt_reg[i] = std::sqrt(lambda * p.frequency_weights[i]);

  // stacked operator M v = [W^{1/2} F v ; sqrt(lambda) W_hat^{1/2} v]
  auto apply_m = [&](const cvec& v, cvec& top, cvec& bottom) {
    top.assign(nx, cplx(0.0, 0.0));
    p.op->apply(std::span<const cplx>(v), std::span<cplx>(top));
    for (std::size_t i = 0; i < nx; ++i) top[i] *= sqrt_w[i];
    bottom.resize(ni);
    for (std::size_t i = 0; i < ni; ++i) bottom[i] = sqrt_reg[i] * v[i];
  };
  auto apply_mh = [&](const cvec& top, const cvec& bottom, cvec& out) {
    cvec wt(nx);
    for (std::size_t i = 0; i < nx; ++i) wt[i] = sqrt_w[i] * top[i];
    out.assign(ni, cplx(0.0, 0.0));
    p.op->adjoint_apply(std::span<const cplx>(wt), std::span<cplx>(out));
    for (std::size_t i = 0; i < ni; ++i) out[i] += sqrt_reg[i] * bottom[i];
  };

  SolverReport rep;
  rep.path = SolvePath::Lsqr;

  // b = [W^{1/2} f ; 0]
  cvec u_top(nx), u_bot(ni, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < nx; ++i) u_top[i] = sqrt_w[i] * p.data[i];

  auto stacked_norm = [](const cvec& a, const cvec& b) {
    double s = 0.0;
    for (const cplx& z : a) s += std::norm(z);
    for (const cplx& z : b) s += std::norm(z);
    return std::sqrt(s);
  };

  cvec x(ni, cplx(0.0, 0.0));
  double beta = stacked_norm(u_top, u_bot);
  if (beta == 0.0) return {std::move(x), rep};  // zero data, zero solution
  for (cplx& z : u_top) z /= beta;
  for (cplx& z : u_bot) z /= beta;

  cvec v(ni);
  apply_mh(u_top, u_bot, v);
  double alpha = norm2(v);
  const double ref_normal = alpha * beta;  // ||M^H b||
  if (alpha == 0.0) {
    rep.breakdown = true;
    return {std::move(x), rep};
  }
  for (cplx& z : v) z /= alpha;

  cvec w = v;
  double phibar = beta, rhobar = alpha;
  cvec mt(nx), mb(ni), tmp(ni);

  for (int it = 1; it <= opts.max_iterations; ++it) {
    rep.iterations = it;

    apply_m(v, mt, mb);
    for (std::size_t i = 0; i < nx; ++i) mt[i] -= alpha * u_top[i];
    for (std::size_t i = 0; i < ni; ++i) mb[i] -= alpha * u_bot[i];
    beta = stacked_norm(mt, mb);
    if (beta == 0.0) {
      rep.breakdown = true;
      break;
    }
    for (std::size_t i = 0; i < nx; ++i) u_top[i] = mt[i] / beta;
    for (std::size_t i = 0; i < ni; ++i) u_bot[i] = mb[i] / beta;

    apply_mh(u_top, u_bot, tmp);
    for (std::size_t i = 0; i < ni; ++i) tmp[i] -= beta * v[i];
    alpha = norm2(tmp);

    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    const double step = phi / rho;
    for (std::size_t i = 0; i < ni; ++i) x[i] += step * w[i];

    if (alpha == 0.0) {
      rep.breakdown = true;
      break;
    }
    for (std::size_t i = 0; i < ni; ++i) {
      tmp[i] /= alpha;
      w[i] = tmp[i] - (theta / rho) * w[i];
    }
    v = tmp;

    // running estimate of ||M^H r|| / ||M^H b||
    const double normal_est = phibar * alpha * std::abs(c);
    rep.normal_residual = ref_normal > 0.0 ? normal_est / ref_normal : 0.0;
    if (rep.normal_residual <= opts.tolerance) break;
  }

  rep.normal_residual = normal_equation_residual(p, lambda, x);
  rep.converged = rep.normal_residual <= opts.tolerance || rep.breakdown;
  return {std::move(x), rep};
}

double tikhonov_objective(const TikhonovProblem& p, double lambda, const cvec& coefficients) {
  check_lambda(lambda);
  if (coefficients.size() != p.n_coeffs()) fail_validation("tikhonov_objective: size mismatch");
  cvec fx = p.op->apply(coefficients);
  double fit = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) fit += p.spatial_weights[i] * std::norm(fx[i] - p.data[i]);
  double pen = 0.0;
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    pen += p.frequency_weights[i] * std::norm(coefficients[i]);
  return fit + lambda * pen;
}

}  // namespace fcv
