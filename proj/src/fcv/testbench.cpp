#include "fcv/testbench.hpp"

#include <cmath>
#include <random>

#include "fcv/error.hpp"

namespace fcv {

TestFunction parse_test_function(const std::string& name) {
  if (name == "peaks2d") return TestFunction::Peaks2D;
  if (name == "peaks1d") return TestFunction::Peaks1D;
  if (name == "bspline-tensor") return TestFunction::TensorBSpline2;
  if (name == "sphere-bumps") return TestFunction::SphereBSplineSum;
  fail_validation("unknown test function '" + name + "'");
}

std::string test_function_name(TestFunction f) {
  switch (f) {
    case TestFunction::Peaks2D: return "peaks2d";
    case TestFunction::Peaks1D: return "peaks1d";
    case TestFunction::TensorBSpline2: return "bspline-tensor";
    case TestFunction::SphereBSplineSum: return "sphere-bumps";
  }
  return "?";
}

double peaks(double x, double y) {
  return 3.0 * (1.0 - x) * (1.0 - x) * std::exp(-x * x - (y + 1.0) * (y + 1.0)) -
         10.0 * (x / 5.0 - x * x * x - std::pow(y, 5)) * std::exp(-x * x - y * y) -
         (1.0 / 3.0) * std::exp(-(x + 1.0) * (x + 1.0) - y * y);
}

double bspline2(double x) {
  if (x >= 0.0 && x < 0.5) return 2.0 * std::sqrt(3.0) * x;
  if (x >= 0.5 && x < 1.0) return 2.0 * std::sqrt(3.0) * (1.0 - x);
  return 0.0;
}

namespace {

// symmetric quadratic cardinal B-spline, support [-1.5, 1.5]
double quad_bspline_bump(double t) {
  const double a = std::abs(t);
  if (a <= 0.5) return 0.75 - a * a;
  if (a <= 1.5) return 0.5 * (1.5 - a) * (1.5 - a);
  return 0.0;
}

// five radial bumps pinning the sphere test function; (x,y,z) centers and
// angular radii
struct SphereBump {
  double c[3];
  double radius;
  double amplitude;
};
constexpr SphereBump kSphereBumps[5] = {
    {{0.0, 0.0, 1.0}, 0.9, 1.0},
    {{0.8, 0.0, -0.6}, 0.7, 0.8},
    {{-0.36, 0.48, 0.8}, 0.5, 1.2},
    {{-0.48, -0.8, -0.36}, 0.8, 0.6},
    {{0.6, -0.64, 0.48}, 0.6, 0.9},
};

double sphere_bumps(std::span<const double> x) {
  double s = 0.0;
  for (const SphereBump& b : kSphereBumps) {
    const double nc = std::sqrt(b.c[0] * b.c[0] + b.c[1] * b.c[1] + b.c[2] * b.c[2]);
    const double dot = (x[0] * b.c[0] + x[1] * b.c[1] + x[2] * b.c[2]) / nc;
    const double angle = std::acos(std::clamp(dot, -1.0, 1.0));
    s += b.amplitude * quad_bspline_bump(1.5 * angle / b.radius);
  }
  return s;
}

}  // namespace

cvec eval_test_function(TestFunction f, const NodeSet& nodes) {
  const Domain dom = nodes.domain();
  cvec out(nodes.size());
  switch (f) {
    case TestFunction::Peaks2D:
      if (dom.kind != DomainKind::Torus || dom.dim != 2)
        fail_validation("peaks2d needs 2-d torus nodes");
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto c = nodes.coords(i);
        out[i] = peaks(6.0 * c[0] - 3.0, 6.0 * c[1] - 3.0);
      }
      return out;
    case TestFunction::Peaks1D:
      if (dom.kind == DomainKind::Torus && dom.dim == 1) {
        for (std::size_t i = 0; i < nodes.size(); ++i)
          out[i] = peaks(6.0 * nodes.coords(i)[0] - 3.0, 0.0);
        return out;
      }
      if (dom.kind == DomainKind::Interval) {
        for (std::size_t i = 0; i < nodes.size(); ++i)
          out[i] = peaks(3.0 * nodes.coords(i)[0], 0.0);
        return out;
      }
      fail_validation("peaks1d needs 1-d torus or interval nodes");
    case TestFunction::TensorBSpline2:
      if (dom.kind != DomainKind::Torus) fail_validation("bspline-tensor needs torus nodes");
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto c = nodes.coords(i);
        double prod = 1.0;
        for (int j = 0; j < dom.dim; ++j) prod *= bspline2(c[j]);
        out[i] = prod;
      }
      return out;
    case TestFunction::SphereBSplineSum:
      if (dom.kind != DomainKind::Sphere2) fail_validation("sphere-bumps needs sphere nodes");
      for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = sphere_bumps(nodes.coords(i));
      return out;
  }
  fail_validation("eval_test_function: unsupported function");
}

cvec bspline_fourier_coefficients(const IndexSet& set) {
  if (set.kind() != IndexKind::TensorGrid && set.kind() != IndexKind::HyperbolicCross)
    fail_validation("bspline_fourier_coefficients needs a torus index set");
  const double c0 = std::sqrt(0.75);
  cvec out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto idx = set.index(i);
    double prod = 1.0;
    for (int j = 0; j < set.index_dim(); ++j) {
      const int n = idx[j];
      if (n == 0) {
        prod *= c0;
      } else {
        const double half = 0.5 * n * kPi;
        const double sinc = std::sin(half) / half;
        prod *= c0 * sinc * sinc * std::cos(n * kPi);
      }
    }
    out[i] = prod;
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  // splitmix64 over seed ^ golden-ratio-scrambled tag
  std::uint64_t z = seed ^ (tag * 0x9e3779b97f4a7c15ull);
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

cvec add_noise(const cvec& values, double level, std::uint64_t seed) {
  if (level < 0.0) fail_validation("noise level must be >= 0");
  if (level == 0.0) return values;
  double ms = 0.0;
  bool real_data = true;
  for (const cplx& z : values) {
    ms += std::norm(z);
    real_data &= z.imag() == 0.0;
  }
  const double sigma = level * std::sqrt(ms / static_cast<double>(values.size()));

  std::mt19937_64 rng(derive_seed(seed, 0x6e6f697365ull));
  std::normal_distribution<double> gauss(0.0, 1.0);
  cvec out(values.size());
  if (real_data) {
    for (std::size_t i = 0; i < values.size(); ++i)
      out[i] = values[i] + sigma * gauss(rng);
  } else {
    const double s = sigma / std::sqrt(2.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double re = gauss(rng), im = gauss(rng);
      out[i] = values[i] + cplx(s * re, s * im);
    }
  }
  return out;
}

NodeScheme parse_node_scheme(const std::string& name) {
  if (name == "equispaced") return NodeScheme::Equispaced;
  if (name == "rank1") return NodeScheme::Rank1;
  if (name == "squared-uniform") return NodeScheme::SquaredUniform;
  if (name == "chebyshev") return NodeScheme::Chebyshev;
  if (name == "uniform-interval") return NodeScheme::UniformInterval;
  if (name == "sphere-gauss") return NodeScheme::SphereGauss;
  if (name == "sphere-design") return NodeScheme::SphereDesign;
  if (name == "sphere-random") return NodeScheme::SphereRandom;
  fail_validation("unknown node scheme '" + name + "'");
}

std::string node_scheme_name(NodeScheme s) {
  switch (s) {
    case NodeScheme::Equispaced: return "equispaced";
    case NodeScheme::Rank1: return "rank1";
    case NodeScheme::SquaredUniform: return "squared-uniform";
    case NodeScheme::Chebyshev: return "chebyshev";
    case NodeScheme::UniformInterval: return "uniform-interval";
    case NodeScheme::SphereGauss: return "sphere-gauss";
    case NodeScheme::SphereDesign: return "sphere-design";
    case NodeScheme::SphereRandom: return "sphere-random";
  }
  return "?";
}

NodeSet make_scattered_nodes(NodeScheme scheme, const Domain& domain, std::size_t count,
                             std::uint64_t seed) {
  if (count < 1) fail_validation("make_scattered_nodes: count must be >= 1");
  std::mt19937_64 rng(derive_seed(seed, 0x6e6f646573ull));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  switch (scheme) {
    case NodeScheme::SquaredUniform: {
      if (domain.kind != DomainKind::Torus)
        fail_validation("squared-uniform nodes live on the torus");
      std::vector<double> coords(count * domain.dim);
      for (double& c : coords) {
        const double u = uni(rng);
        c = u * u;
      }
      return NodeSet(domain, std::move(coords));
    }
    case NodeScheme::UniformInterval: {
      std::vector<double> coords(count);
      for (double& c : coords) c = 2.0 * uni(rng) - 1.0;
      return NodeSet(Domain::interval(), std::move(coords));
    }
    case NodeScheme::SphereRandom: {
      std::vector<double> coords(count * 3);
      for (std::size_t i = 0; i < count; ++i) {
        double v[3], n2 = 0.0;
        do {
          n2 = 0.0;
          for (double& x : v) {
            x = gauss(rng);
            n2 += x * x;
          }
        } while (n2 < 1e-12);
        const double inv = 1.0 / std::sqrt(n2);
        for (int j = 0; j < 3; ++j) coords[3 * i + j] = v[j] * inv;
      }
      return NodeSet(Domain::sphere(), std::move(coords));
    }
    default:
      fail_validation("make_scattered_nodes: scheme '" + node_scheme_name(scheme) +
                      "' is not a random scheme");
  }
}

}  // namespace fcv
