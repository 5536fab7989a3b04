#pragma once

#include "fcv/core.hpp"

namespace fcv {

/// Discrete cosine transforms, matching the matrix conventions
///   C^I_{N+1}  = sqrt(2/N) [ g(n) g(m) cos(n m pi / N) ],   n,m = 0..N
///   C^II_N     = sqrt(2/N) [ g(n) cos(n (2m+1) pi / (2N)) ], n,m = 0..N-1
///   C^III_N    = (C^II_N)^T
/// with g(0) = g(N) = sqrt(2)/2 and g(n) = 1 otherwise. C^III is the inverse
/// of C^II and C^I is symmetric. All run in O(N log N) by embedding into
/// complex FFTs of doubled resp. quadrupled length.

enum class DctKind { I, II, III };

/// Scaling factor g above; `n` is the matrix size parameter N.
double dct_gamma(int n, int k);

/// C^I_{v.size()} v ; requires v.size() >= 2 (N = v.size()-1 >= 1).
rvec dct_i(const rvec& v);

/// C^II_N v with N = v.size().
rvec dct_ii(const rvec& v);

/// C^III_N v with N = v.size().
rvec dct_iii(const rvec& v);

/// Dispatching form; kind I needs v.size() >= 2.
rvec dct(DctKind kind, const rvec& v);

}  // namespace fcv
