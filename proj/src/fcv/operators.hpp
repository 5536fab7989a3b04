#pragma once

#include <memory>
#include <vector>

#include "fcv/core.hpp"

namespace fcv {

/// Rank-1 lattice Lambda(z, M): nodes (m z mod M 1)/M for m = 0..M-1.
struct Rank1Lattice {
  std::vector<long long> z;
  long long m = 0;

  Rank1Lattice(std::vector<long long> gen, long long size);
  int dim() const { return static_cast<int>(z.size()); }
  NodeSet nodes() const;
};

/// Canonical equispaced grid {m/N : m in [0,N)^d}, row-major in m with the
/// leftmost coordinate slowest; the same expression everywhere so grids
/// compare bit-exactly.
NodeSet equispaced_grid_nodes(int dim, int n);

/// Chebyshev nodes of first kind cos((2m+1) pi / (2N)), m = 0..N-1.
NodeSet chebyshev_nodes(int n);

/// Equispaced-grid FFT operator; `grid` must be exactly equispaced_grid_nodes
/// and `set` the matching TensorGrid. O(N^d log N) per application.
std::shared_ptr<const FourierOperator> torus_fft_operator(NodeSet grid, IndexSet set);

/// Rank-1 lattice operator for an arbitrary torus index set; one length-M FFT
/// plus residue-class scatter/gather, O(M log M + d |I|).
std::shared_ptr<const FourierOperator> rank1_lattice_operator(const Rank1Lattice& lattice,
                                                              IndexSet set);

/// Direct nonequispaced torus transform (exact dense sums, O(|I||X|)).
std::shared_ptr<const FourierOperator> torus_ndft_operator(NodeSet nodes, IndexSet set);

/// Chebyshev polynomial operator on [-1,1]; routed through DCT-II/III when
/// the nodes are exactly the N Chebyshev nodes of first kind, direct cosine
/// sums otherwise.
std::shared_ptr<const FourierOperator> chebyshev_operator(NodeSet nodes, int degree_count);

/// Spherical harmonic synthesis/analysis up to max degree N, direct
/// O((N+1)^2 |X|) evaluation through Legendre recurrences.
std::shared_ptr<const FourierOperator> spherical_operator(NodeSet nodes, int max_degree);

/// Builds the operator a domain/index pair calls for: FFT fast paths when the
/// nodes match a canonical pattern, direct transforms otherwise.
std::shared_ptr<const FourierOperator> make_operator(const NodeSet& nodes, const IndexSet& set);

}  // namespace fcv
