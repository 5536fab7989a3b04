#pragma once

#include "fcv/core.hpp"

namespace fcv {

/// Orthonormal spherical harmonics on S^2 with Condon-Shortley phase:
/// integral |Y_{n,k}|^2 dsigma = 1 with the surface measure totaling 4 pi,
/// and Y_{n,-k} = (-1)^k conj(Y_{n,k}).

/// Fills `out` with Y_{n,k}(x) for all 0 <= n <= max_degree, -n <= k <= n in
/// degree-major, order-ascending enumeration ((N+1)^2 entries). `x` is a unit
/// vector. Uses the stable three-term recurrence on fully normalized
/// associated Legendre functions, seeded by the closed-form diagonal.
void spherical_harmonics(std::span<const double> x, int max_degree, std::span<cplx> out);

/// Single value Y_{n,k}(x); convenience wrapper for tests and row assembly.
cplx spherical_harmonic(int n, int k, std::span<const double> x);

}  // namespace fcv
