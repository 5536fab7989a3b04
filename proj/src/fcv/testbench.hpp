#pragma once

#include <cstdint>
#include <string>

#include "fcv/core.hpp"

namespace fcv {

enum class TestFunction { Peaks2D, Peaks1D, TensorBSpline2, SphereBSplineSum };

TestFunction parse_test_function(const std::string& name);
std::string test_function_name(TestFunction f);

/// The classic two-Gaussian-bump surface
///   3(1-x)^2 e^{-x^2-(y+1)^2} - 10(x/5 - x^3 - y^5) e^{-x^2-y^2}
///   - (1/3) e^{-(x+1)^2-y^2}.
double peaks(double x, double y);

/// L2-normalized quadratic B-spline hat on [0,1):
/// 2 sqrt(3) (x on [0,0.5), (1-x) on [0.5,1)).
double bspline2(double x);

/// Pointwise evaluation on a node set. Domain embeddings: torus coordinates
/// map affinely [0,1) -> [-3,3] per axis into the peaks viewport, interval
/// nodes map [-1,1] -> [-3,3].
cvec eval_test_function(TestFunction f, const NodeSet& nodes);

/// Analytic Fourier coefficients of the tensor B-spline on a torus index
/// set: sqrt(3/4) per zero component, otherwise
/// sqrt(3/4) (sin(n pi/2)/(n pi/2))^2 cos(n pi).
cvec bspline_fourier_coefficients(const IndexSet& set);

/// Adds i.i.d. Gaussian noise with standard deviation level * RMS(values);
/// real-valued data stays real, complex data gets independent re/im parts of
/// variance sigma^2/2 each. Deterministic per seed.
cvec add_noise(const cvec& values, double level, std::uint64_t seed);

enum class NodeScheme {
  Equispaced,       // canonical torus grid
  Rank1,            // lattice from the generating vector
  SquaredUniform,   // U^2 per torus coordinate, denser toward 0
  Chebyshev,        // Chebyshev nodes of first kind
  UniformInterval,  // uniform on [-1,1]
  SphereGauss,      // Gauss-Legendre x equispaced longitudes
  SphereDesign,     // external design file
  SphereRandom,     // uniform on S^2 via normalized Gaussians
};

NodeScheme parse_node_scheme(const std::string& name);
std::string node_scheme_name(NodeScheme s);

/// Random node sets matching the experiment sampling patterns; deterministic
/// per seed.
NodeSet make_scattered_nodes(NodeScheme scheme, const Domain& domain, std::size_t count,
                             std::uint64_t seed);

/// Splittable seeding: child streams derived from (seed, tag) so concurrent
/// generation stays deterministic.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace fcv
