#include "oracles.hpp"

#include <cmath>

namespace oracle {

namespace {
constexpr double PI = 3.14159265358979323846;
}

cplx basis_value(const fcv::IndexSet& set, std::size_t index_pos, std::span<const double> x) {
  using fcv::IndexKind;
  auto idx = set.index(index_pos);
  switch (set.kind()) {
    case IndexKind::TensorGrid:
    case IndexKind::HyperbolicCross: {
      double phase = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) phase += idx[j] * x[j];
      return std::polar(1.0, 2.0 * PI * phase);
    }
    case IndexKind::ChebyshevDegrees:
      return {std::cos(idx[0] * std::acos(x[0])), 0.0};
    case IndexKind::SphericalDegrees:
      return spherical_harmonic_ref(idx[0], idx[1], x);
  }
  return {0.0, 0.0};
}

Eigen::MatrixXcd dense_matrix(const fcv::IndexSet& set, const fcv::NodeSet& nodes) {
  Eigen::MatrixXcd f(nodes.size(), set.size());
  for (std::size_t xi = 0; xi < nodes.size(); ++xi)
    for (std::size_t i = 0; i < set.size(); ++i)
      f(xi, i) = basis_value(set, i, nodes.coords(xi));
  return f;
}

// per-(l,m) scalar evaluation: diagonal term by the product recurrence, then
// two-term upward recurrence in degree
double plegendre_norm(int l, int m, double x) {
  double pmm = 1.0;
  if (m > 0) {
    const double omx2 = (1.0 - x) * (1.0 + x);
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= omx2 * fact / (fact + 1.0);
      fact += 2.0;
    }
  }
  pmm = std::sqrt((2.0 * m + 1.0) * pmm / (4.0 * PI));
  if (m & 1) pmm = -pmm;
  if (l == m) return pmm;
  double pmmp1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
  if (l == m + 1) return pmmp1;
  double oldfact = std::sqrt(2.0 * m + 3.0);
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double fact = std::sqrt((4.0 * ll * ll - 1.0) / (double(ll) * ll - double(m) * m));
    pll = (x * pmmp1 - pmm / oldfact) * fact;
    oldfact = fact;
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

cplx spherical_harmonic_ref(int n, int k, std::span<const double> x) {
  const int m = std::abs(k);
  const double ct = x[2];
  const double phi = std::atan2(x[1], x[0]);
  const double p = plegendre_norm(n, m, ct);
  const cplx e = std::polar(1.0, k * phi);
  if (k >= 0) return p * e;
  return (m % 2 == 0 ? 1.0 : -1.0) * p * e;
}

cplx spherical_harmonic_table(int n, int k, std::span<const double> xs) {
  const double x = xs[0], y = xs[1], z = xs[2];
  const cplx xp(x, y);   // x + iy
  const cplx xm(x, -y);  // x - iy
  auto c = [](double v) { return std::sqrt(v / PI); };
  switch (n) {
    case 0:
      return c(1.0 / 4.0);
    case 1:
      switch (k) {
        case -1: return c(3.0 / 8.0) * xm;
        case 0: return c(3.0 / 4.0) * z;
        case 1: return -c(3.0 / 8.0) * xp;
      }
      break;
    case 2:
      switch (k) {
        case -2: return c(15.0 / 32.0) * xm * xm;
        case -1: return c(15.0 / 8.0) * xm * z;
        case 0: return c(5.0 / 16.0) * (3.0 * z * z - 1.0);
        case 1: return -c(15.0 / 8.0) * xp * z;
        case 2: return c(15.0 / 32.0) * xp * xp;
      }
      break;
    case 3:
      switch (k) {
        case -3: return c(35.0 / 64.0) * xm * xm * xm;
        case -2: return c(105.0 / 32.0) * xm * xm * z;
        case -1: return c(21.0 / 64.0) * xm * (5.0 * z * z - 1.0);
        case 0: return c(7.0 / 16.0) * (5.0 * z * z * z - 3.0 * z);
        case 1: return -c(21.0 / 64.0) * xp * (5.0 * z * z - 1.0);
        case 2: return c(105.0 / 32.0) * xp * xp * z;
        case 3: return -c(35.0 / 64.0) * xp * xp * xp;
      }
      break;
  }
  throw std::runtime_error("spherical_harmonic_table: degree out of range");
}

std::vector<std::vector<int>> hyperbolic_cross_bruteforce(int dim, int radius) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(dim, -radius);
  for (;;) {
    long prod = 1;
    for (int v : cur) prod *= std::max(1, std::abs(v));
    if (prod <= radius) out.push_back(cur);
    int axis = dim - 1;
    while (axis >= 0 && ++cur[axis] == radius + 1) cur[axis--] = -radius;
    if (axis < 0) break;
  }
  return out;
}

cvec dense_tikhonov_solve(const Eigen::MatrixXcd& f_mat, const rvec& w, const rvec& w_hat,
                          double lambda, const cvec& data) {
  const auto ni = f_mat.cols();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(ni, ni);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(ni);
  for (Eigen::Index x = 0; x < f_mat.rows(); ++x) {
    a.noalias() += w[x] * f_mat.row(x).adjoint() * f_mat.row(x);
    b += w[x] * data[x] * f_mat.row(x).adjoint();
  }
  for (Eigen::Index i = 0; i < ni; ++i) a(i, i) += lambda * w_hat[i];
  const Eigen::VectorXcd sol = a.ldlt().solve(b);
  return cvec(sol.data(), sol.data() + sol.size());
}

rvec dense_hat_diagonals(const Eigen::MatrixXcd& f_mat, const rvec& w, const rvec& w_hat,
                         double lambda) {
  const auto ni = f_mat.cols();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(ni, ni);
  for (Eigen::Index x = 0; x < f_mat.rows(); ++x)
    a.noalias() += w[x] * f_mat.row(x).adjoint() * f_mat.row(x);
  for (Eigen::Index i = 0; i < ni; ++i) a(i, i) += lambda * w_hat[i];
  const Eigen::MatrixXcd sol = a.ldlt().solve(f_mat.adjoint());
  rvec h(f_mat.rows());
  for (Eigen::Index x = 0; x < f_mat.rows(); ++x)
    h[x] = w[x] * (f_mat.row(x) * sol.col(x)).value().real();
  return h;
}

cvec random_cvec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  cvec out(n);
  for (cplx& z : out) z = cplx(gauss(rng), gauss(rng));
  return out;
}

}  // namespace oracle
