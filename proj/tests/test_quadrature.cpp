#include <doctest.h>

#include <cmath>
#include <random>

#include "fcv/error.hpp"
#include "fcv/io.hpp"
#include "fcv/quadrature.hpp"
#include "oracles.hpp"

using namespace fcv;

TEST_CASE("Gauss-Legendre nodes and weights") {
  rvec x, w;
  for (int n : {1, 2, 5, 9, 16}) {
    gauss_legendre(n, x, w);
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-13));
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(-x[n - 1 - i]).epsilon(1e-12));
    // exact for monomials up to degree 2n-1
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += w[i] * std::pow(x[i], k);
      const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
      CHECK(std::abs(q - exact) < 1e-12);
    }
  }
}

TEST_CASE("equispaced torus rule") {
  SUBCASE("d=1 N=2") {
    QuadratureRule r = equispaced_torus_rule(1, 2);
    REQUIRE(r.nodes.size() == 2);
    CHECK(r.nodes.coords(0)[0] == 0.0);
    CHECK(r.nodes.coords(1)[0] == 0.5);
    CHECK(r.weights[0] == 0.5);
    CHECK(r.weights[1] == 0.5);
  }
  SUBCASE("annihilates frequencies in the difference set, integrates constants") {
    QuadratureRule r = equispaced_torus_rule(1, 4);
    for (int n = -3; n <= 3; ++n) {
      cplx q(0.0, 0.0);
      for (std::size_t i = 0; i < r.nodes.size(); ++i)
        q += r.weights[i] * std::polar(1.0, kTwoPi * n * r.nodes.coords(i)[0]);
      if (n == 0)
        CHECK(std::abs(q - 1.0) < 1e-15);
      else
        CHECK(std::abs(q) < 1e-15);
    }
  }
}

TEST_CASE("Chebyshev rule") {
  SUBCASE("integrates T_0 to pi and higher degrees to zero") {
    QuadratureRule r = chebyshev_rule(8);
    for (int n = 0; n <= 14; ++n) {
      double q = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i)
        q += r.weights[i] * std::cos(n * std::acos(r.nodes.coords(i)[0]));
      if (n == 0)
        CHECK(q == doctest::Approx(kPi).epsilon(1e-14));
      else
        CHECK(std::abs(q) < 1e-13);
    }
  }
  SUBCASE("N=1 is the midpoint rule") {
    QuadratureRule r = chebyshev_rule(1);
    REQUIRE(r.nodes.size() == 1);
    CHECK(std::abs(r.nodes.coords(0)[0]) < 1e-16);
    CHECK(r.weights[0] == doctest::Approx(kPi));
    CHECK(r.exactness_degree == 0);
  }
}

TEST_CASE("Gauss tensor sphere rule") {
  QuadratureRule r = gauss_tensor_sphere_rule(4);
  SUBCASE("weights sum to the sphere area") {
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    CHECK(sum == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  }
  SUBCASE("Gram identity via the dense oracle") {
    auto op = spherical_operator(r.nodes, 4);
    const Eigen::MatrixXcd f = oracle::dense_matrix(op->index_set(), r.nodes);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(f.cols(), f.cols());
    for (Eigen::Index x = 0; x < f.rows(); ++x)
      g.noalias() += r.weights[x] * f.row(x).adjoint() * f.row(x);
    const double dev = (g - Eigen::MatrixXcd::Identity(f.cols(), f.cols())).cwiseAbs().maxCoeff();
    CHECK(dev < 1e-10);
  }
  SUBCASE("integrates nonconstant harmonics to zero up to degree 2N") {
    for (int n = 1; n <= 8; ++n)
      for (int k : {-n, 0, n}) {
        cplx q(0.0, 0.0);
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
          q += r.weights[i] * oracle::spherical_harmonic_ref(n, k, r.nodes.coords(i));
        CHECK(std::abs(q) < 1e-12);
      }
  }
}

TEST_CASE("rank-1 rules and the reconstruction flag") {
  SUBCASE("d=1 z=(1) M=8 equals the equispaced rule") {
    Rank1RuleResult r = rank1_rule(Rank1Lattice({1}, 8), IndexSet::tensor_grid(1, 8));
    CHECK(r.reconstructing);
    auto op = rank1_lattice_operator(Rank1Lattice({1}, 8), IndexSet::tensor_grid(1, 8));
    CHECK(gram_deviation(*op, r.rule.weights) < 1e-12);
  }
  SUBCASE("small 2-d lattice passes the dense Gram oracle") {
    // z=(1,3), M=5 separates {(0,0),(1,0),(0,1)}
    Rank1Lattice lat({1, 3}, 5);
    IndexSet set = IndexSet::hyperbolic_cross(2, 1);  // {(0,0),(+-1,0),(0,+-1),(+-1,+-1)}
    Rank1RuleResult r = rank1_rule(lat, set);
    auto op = rank1_lattice_operator(lat, set);
    const double dev = gram_deviation(*op, r.rule.weights);
    if (r.reconstructing)
      CHECK(dev < 1e-12);
    else
      CHECK(dev > 0.5);
  }
  SUBCASE("colliding residues are flagged") {
    Rank1Lattice lat({1, 1}, 4);
    IndexSet set = IndexSet::hyperbolic_cross(2, 1);
    Rank1RuleResult r = rank1_rule(lat, set);
    CHECK_FALSE(r.reconstructing);  // (1,0) and (0,1) collide
  }
  SUBCASE("shipped lattices reconstruct their index sets") {
    const std::string data = FCV_TEST_DATA_DIR;
    Rank1Lattice l2 = load_lattice(data + "/lattices.json", "hc2-n4");
    CHECK(rank1_rule(l2, IndexSet::hyperbolic_cross(2, 4)).reconstructing);
    Rank1Lattice l7 = load_lattice(data + "/lattices.json", "hc7-n2");
    CHECK(rank1_rule(l7, IndexSet::hyperbolic_cross(7, 2)).reconstructing);
  }
}

TEST_CASE("exact Gram diagonal") {
  const rvec d = exact_gram_diagonal(IndexSet::chebyshev(4));
  CHECK(d[0] == kPi);
  for (int i = 1; i < 4; ++i) CHECK(d[i] == kPi / 2.0);
  const rvec t = exact_gram_diagonal(IndexSet::tensor_grid(2, 4));
  for (double v : t) CHECK(v == 1.0);
}

TEST_CASE("rule certification") {
  SUBCASE("canonical constructions certify structurally") {
    QuadratureRule r = equispaced_torus_rule(1, 16);
    auto op = torus_fft_operator(r.nodes, IndexSet::tensor_grid(1, 16));
    CertifyResult c = certify_quadrature(*op, r.weights);
    CHECK(c.certified);
    CHECK(c.method == "structural");

    QuadratureRule ch = chebyshev_rule(16);
    auto cop = chebyshev_operator(ch.nodes, 16);
    c = certify_quadrature(*cop, ch.weights);
    CHECK(c.certified);
    CHECK(c.method == "structural");
  }
  SUBCASE("external designs certify through the Gram diagnostic") {
    const std::string data = FCV_TEST_DATA_DIR;
    RuleDescriptor desc = load_rule_descriptor(data + "/sphere_design_12.csv.json");
    auto op = spherical_operator(desc.rule.nodes, 2);
    CertifyResult c = certify_quadrature(*op, desc.rule.weights);
    CHECK(c.certified);
    CHECK(c.method == "gram");
    CHECK(c.gram_dev < 1e-10);
  }
  SUBCASE("scattered nodes with Voronoi-like weights fail") {
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> xs(16);
    for (double& x : xs) x = uni(rng);
    NodeSet nodes(Domain::torus(1), xs);
    auto op = torus_ndft_operator(nodes, IndexSet::tensor_grid(1, 8));
    rvec w(16, 1.0 / 16.0);
    CertifyResult c = certify_quadrature(*op, w);
    CHECK_FALSE(c.certified);
  }
}

TEST_CASE("mesh norm") {
  SUBCASE("equispaced circle") {
    NodeSet nodes = equispaced_grid_nodes(1, 16);
    CHECK(mesh_norm(nodes) == doctest::Approx(1.0 / 32.0).epsilon(1e-12));
  }
  SUBCASE("single torus node sees the antipode") {
    NodeSet node(Domain::torus(1), {0.3});
    CHECK(mesh_norm(node) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("random nodes: exactly half the largest gap") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> xs(20);
    for (double& x : xs) x = uni(rng);
    NodeSet nodes(Domain::torus(1), xs);
    std::sort(xs.begin(), xs.end());
    double max_gap = 1.0 - xs.back() + xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) max_gap = std::max(max_gap, xs[i] - xs[i - 1]);
    CHECK(mesh_norm(nodes) == doctest::Approx(0.5 * max_gap).epsilon(1e-12));
  }
  SUBCASE("chebyshev nodes in the arccos metric") {
    NodeSet nodes = chebyshev_nodes(8);
    CHECK(mesh_norm(nodes) == doctest::Approx(kPi / 16.0).epsilon(1e-12));
  }
  SUBCASE("single sphere node") {
    NodeSet node(Domain::sphere(), {0.0, 0.0, 1.0});
    const double d = mesh_norm(node);
    CHECK(d >= kPi);
    CHECK(d < kPi + 0.05);
  }
}

TEST_CASE("Voronoi quadrature error bound") {
  SUBCASE("constants are exact") {
    QuadratureRule r{equispaced_grid_nodes(1, 8), rvec(8, 0.125), std::nullopt};
    auto check = quadrature_error_bound_check(
        r, [](std::span<const double>) { return 3.7; }, 0.0, 3.7);
    CHECK(check.lhs < 1e-14);
    CHECK(check.rhs == 0.0);
  }
  SUBCASE("sin(2 pi x) on random nodes stays under the Lipschitz bound") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> xs(50);
    for (double& x : xs) x = uni(rng);
    NodeSet nodes(Domain::torus(1), xs);
    // periodic half-gap weights, built inline like the interval formula
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    rvec w(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = sorted[i];
      const double prev = sorted[(i + xs.size() - 1) % xs.size()];
      const double next = sorted[(i + 1) % xs.size()];
      double wl = x - prev, wr = next - x;
      if (i == 0) wl += 1.0;
      if (i == xs.size() - 1) wr += 1.0;
      for (std::size_t k = 0; k < xs.size(); ++k)
        if (xs[k] == x) w[k] = 0.5 * (wl + wr);
    }
    QuadratureRule r{nodes, w, std::nullopt};
    auto check = quadrature_error_bound_check(
        r, [](std::span<const double> x) { return std::sin(kTwoPi * x[0]); }, kTwoPi, 0.0);
    CHECK(check.lhs <= check.rhs);
  }
  SUBCASE("equispaced nodes cancel sin exactly") {
    QuadratureRule r = equispaced_torus_rule(1, 16);
    auto check = quadrature_error_bound_check(
        r, [](std::span<const double> x) { return std::sin(kTwoPi * x[0]); }, kTwoPi, 0.0);
    CHECK(check.lhs < 1e-12);
  }
}
