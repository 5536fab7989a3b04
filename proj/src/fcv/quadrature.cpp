#include "fcv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fcv/error.hpp"

namespace fcv {

void gauss_legendre(int n, rvec& nodes, rvec& weights) {
  if (n < 1) fail_validation("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    int iter = 0;
    for (;;) {
      // Legendre P_n(z) by the three-term recurrence
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = -p1 / pp;
      z += dz;
      if (std::abs(dz) <= 1e-14) break;
      if (++iter >= 100) fail_numeric("gauss_legendre: Newton iteration did not converge");
    }
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
}

QuadratureRule equispaced_torus_rule(int dim, int n) {
  NodeSet nodes = equispaced_grid_nodes(dim, n);
  const double w = 1.0 / static_cast<double>(nodes.size());
  return {std::move(nodes), rvec(static_cast<std::size_t>(std::llround(std::pow(double(n), dim))), w),
          2 * n - 1};
}

Rank1RuleResult rank1_rule(const Rank1Lattice& lattice, const IndexSet& set) {
  // reconstruction <=> n . z mod M is collision-free over the index set
  std::vector<long long> residues(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto idx = set.index(i);
    long long dot = 0;
    for (int j = 0; j < lattice.dim(); ++j) dot += static_cast<long long>(idx[j]) * lattice.z[j];
    residues[i] = ((dot % lattice.m) + lattice.m) % lattice.m;
  }
  std::sort(residues.begin(), residues.end());
  const bool reconstructing = std::adjacent_find(residues.begin(), residues.end()) == residues.end();

  NodeSet nodes = lattice.nodes();
  rvec w(nodes.size(), 1.0 / static_cast<double>(lattice.m));
  QuadratureRule rule{std::move(nodes), std::move(w), std::nullopt};
  return {std::move(rule), reconstructing};
}

QuadratureRule chebyshev_rule(int n) {
  NodeSet nodes = chebyshev_nodes(n);
  return {std::move(nodes), rvec(static_cast<std::size_t>(n), kPi / n), 2 * n - 2};
}

QuadratureRule gauss_tensor_sphere_rule(int max_degree) {
  if (max_degree < 0) fail_validation("gauss_tensor_sphere_rule: degree must be >= 0");
  const int n_lat = max_degree + 1;
  const int n_lon = 2 * max_degree + 2;
  rvec gl_nodes, gl_weights;
  gauss_legendre(n_lat, gl_nodes, gl_weights);

  std::vector<double> coords;
  rvec weights;
  coords.reserve(static_cast<std::size_t>(n_lat) * n_lon * 3);
  weights.reserve(static_cast<std::size_t>(n_lat) * n_lon);
  const double lon_weight = kTwoPi / n_lon;
  for (int i = 0; i < n_lat; ++i) {
    const double ct = gl_nodes[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < n_lon; ++j) {
      const double phi = kTwoPi * j / n_lon;
      coords.push_back(st * std::cos(phi));
      coords.push_back(st * std::sin(phi));
      coords.push_back(ct);
      weights.push_back(lon_weight * gl_weights[i]);
    }
  }
  return {NodeSet(Domain::sphere(), std::move(coords)), std::move(weights), 2 * max_degree + 1};
}

rvec exact_gram_diagonal(const IndexSet& set) {
  if (set.kind() == IndexKind::ChebyshevDegrees) {
    rvec d(set.size(), kPi / 2.0);
    d[0] = kPi;
    return d;
  }
  return rvec(set.size(), 1.0);
}

double gram_deviation(const FourierOperator& op, const rvec& weights, double max_flops) {
  const std::size_t ni = op.index_set().size();
  const std::size_t nx = op.node_set().size();
  if (weights.size() != nx) fail_validation("gram_deviation: weight count mismatch");
  const rvec diag = exact_gram_diagonal(op.index_set());

  const double dense_flops = static_cast<double>(nx) * ni * ni;
  cvec row(ni);
  double dev = 0.0;
  if (dense_flops <= max_flops) {
    // G = sum_x w_x row_x^H row_x, accumulated densely
    cvec gram(ni * ni, cplx(0.0, 0.0));
    for (std::size_t xi = 0; xi < nx; ++xi) {
      op.basis_row(xi, row);
      for (std::size_t a = 0; a < ni; ++a) {
        const cplx wa = weights[xi] * std::conj(row[a]);
        cplx* g = gram.data() + a * ni;
        for (std::size_t b = 0; b < ni; ++b) g[b] += wa * row[b];
      }
    }
    for (std::size_t a = 0; a < ni; ++a)
      for (std::size_t b = 0; b < ni; ++b) {
        cplx expect = (a == b) ? cplx(diag[a], 0.0) : cplx(0.0, 0.0);
        dev = std::max(dev, std::abs(gram[a * ni + b] - expect));
      }
    return dev;
  }

  // sampled diagnostic: |I| random entries plus the full diagonal
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<std::size_t> pick(0, ni - 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(2 * ni);
  for (std::size_t a = 0; a < ni; ++a) pairs.emplace_back(a, a);
  for (std::size_t k = 0; k < ni; ++k) pairs.emplace_back(pick(rng), pick(rng));
  cvec acc(pairs.size(), cplx(0.0, 0.0));
  for (std::size_t xi = 0; xi < nx; ++xi) {
    op.basis_row(xi, row);
    for (std::size_t p = 0; p < pairs.size(); ++p)
      acc[p] += weights[xi] * std::conj(row[pairs[p].first]) * row[pairs[p].second];
  }
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    cplx expect = (pairs[p].first == pairs[p].second) ? cplx(diag[pairs[p].first], 0.0) : cplx(0.0, 0.0);
    dev = std::max(dev, std::abs(acc[p] - expect));
  }
  return dev;
}

namespace {

bool bitwise_equal_nodes(const NodeSet& a, const NodeSet& b) {
  return a.flat().size() == b.flat().size() &&
         std::equal(a.flat().begin(), a.flat().end(), b.flat().begin());
}

bool all_equal(const rvec& w, double value) {
  for (double x : w)
    if (x != value) return false;
  return true;
}

bool all_equal(const rvec& a, const rvec& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

CertifyResult certify_quadrature(const FourierOperator& op, const rvec& weights,
                                 const Rank1Lattice* lattice, double threshold, double max_flops) {
  const IndexSet& set = op.index_set();
  const NodeSet& nodes = op.node_set();
  if (weights.size() != nodes.size()) fail_validation("certify_quadrature: weight count mismatch");

  CertifyResult res;
  switch (set.kind()) {
    case IndexKind::TensorGrid: {
      // grids of per-axis size G >= N are exact on the difference set
      const int d = set.index_dim();
      const double root = std::pow(static_cast<double>(nodes.size()), 1.0 / d);
      for (int g = std::max(set.param_n(), static_cast<int>(std::llround(root)) - 1);
           g <= static_cast<int>(std::llround(root)) + 1; ++g) {
        std::size_t total = 1;
        for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(g);
        if (total != nodes.size()) continue;
        if (all_equal(weights, 1.0 / static_cast<double>(nodes.size())) &&
            bitwise_equal_nodes(nodes, equispaced_grid_nodes(d, g))) {
          res.certified = true;
          res.method = "structural";
          return res;
        }
      }
      break;
    }
    case IndexKind::HyperbolicCross:
      break;
    case IndexKind::ChebyshevDegrees: {
      const int n = set.param_n();
      if (static_cast<int>(nodes.size()) == n && all_equal(weights, kPi / n) &&
          bitwise_equal_nodes(nodes, chebyshev_nodes(n))) {
        res.certified = true;
        res.method = "structural";
        return res;
      }
      break;
    }
    case IndexKind::SphericalDegrees: {
      const QuadratureRule ref = gauss_tensor_sphere_rule(set.param_n());
      if (nodes.size() == ref.nodes.size() && all_equal(weights, ref.weights) &&
          bitwise_equal_nodes(nodes, ref.nodes)) {
        res.certified = true;
        res.method = "structural";
        return res;
      }
      break;
    }
  }

  if (lattice) {
    const Rank1RuleResult r = rank1_rule(*lattice, set);
    if (r.reconstructing && all_equal(weights, 1.0 / static_cast<double>(lattice->m)) &&
        bitwise_equal_nodes(nodes, r.rule.nodes)) {
      res.certified = true;
      res.method = "structural";
      return res;
    }
  }

  const double dense_flops =
      static_cast<double>(nodes.size()) * static_cast<double>(set.size()) * set.size();
  res.gram_dev = gram_deviation(op, weights, max_flops);
  res.method = dense_flops <= max_flops ? "gram" : "gram-sampled";
  res.certified = res.gram_dev < threshold;
  if (!res.certified) res.method = "none";
  return res;
}

namespace {

double torus_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double d = std::abs(a[j] - b[j]);
    d = std::min(d, 1.0 - d);
    s += d * d;
  }
  return std::sqrt(s);
}

double min_dist_to_nodes_torus(const NodeSet& nodes, std::span<const double> y) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) best = std::min(best, torus_dist(nodes.coords(i), y));
  return best;
}

}  // namespace

double mesh_norm(const NodeSet& nodes) {
  const Domain dom = nodes.domain();
  switch (dom.kind) {
    case DomainKind::Torus: {
      if (dom.dim == 1) {
        // exact on the circle: half the largest wrap-around gap
        rvec xs(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) xs[i] = nodes.coords(i)[0];
        std::sort(xs.begin(), xs.end());
        double max_gap = 1.0 - xs.back() + xs.front();
        for (std::size_t i = 1; i < xs.size(); ++i) max_gap = std::max(max_gap, xs[i] - xs[i - 1]);
        return 0.5 * max_gap;
      }
      if (dom.dim > 2) fail_validation("mesh_norm supports torus dimensions 1 and 2");
      // candidate grid, inflated by the grid's own covering radius
      const int g = 192;
      std::vector<int> cur(dom.dim, 0);
      std::vector<double> y(dom.dim);
      double worst = 0.0;
      for (;;) {
        for (int j = 0; j < dom.dim; ++j) y[j] = (cur[j] + 0.5) / g;
        worst = std::max(worst, min_dist_to_nodes_torus(nodes, y));
        int axis = dom.dim - 1;
        while (axis >= 0 && ++cur[axis] == g) cur[axis--] = 0;
        if (axis < 0) break;
      }
      return worst + 0.5 * std::sqrt(static_cast<double>(dom.dim)) / g;
    }
    case DomainKind::Interval: {
      // metric of the arccos substitution: distances in y = arccos x on [0,pi]
      rvec ys(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) ys[i] = std::acos(nodes.coords(i)[0]);
      std::sort(ys.begin(), ys.end());
      double worst = std::max(ys.front() - 0.0, kPi - ys.back());
      for (std::size_t i = 1; i < ys.size(); ++i) worst = std::max(worst, 0.5 * (ys[i] - ys[i - 1]));
      return worst;
    }
    case DomainKind::Sphere2: {
      // Fibonacci candidate set; covering radius of K Fibonacci points is
      // about 2.4/sqrt(K)
      const int k = 20000;
      const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
      double worst = 0.0;
      for (int i = 0; i < k; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / k;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = kTwoPi * i / golden;
        const double y[3] = {r * std::cos(phi), r * std::sin(phi), z};
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < nodes.size(); ++a) {
          auto p = nodes.coords(a);
          const double dot = std::clamp(p[0] * y[0] + p[1] * y[1] + p[2] * y[2], -1.0, 1.0);
          best = std::min(best, std::acos(dot));
        }
        worst = std::max(worst, best);
      }
      return worst + 2.4 / std::sqrt(static_cast<double>(k));
    }
  }
  fail_validation("mesh_norm: unsupported domain");
}

}  // namespace fcv
