#include "fcv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fcv/dct.hpp"
#include "fcv/error.hpp"
#include "fcv/fft.hpp"
#include "fcv/sphharm.hpp"

namespace fcv {

Rank1Lattice::Rank1Lattice(std::vector<long long> gen, long long size) : z(std::move(gen)), m(size) {
  if (z.empty()) fail_validation("rank-1 lattice needs a nonempty generating vector");
  if (m < 1) fail_validation("rank-1 lattice size must be >= 1");
}

NodeSet Rank1Lattice::nodes() const {
  const int d = dim();
  std::vector<double> coords(static_cast<std::size_t>(m) * d);
  for (long long i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) {
      const long long r = ((i * z[j]) % m + m) % m;
      coords[static_cast<std::size_t>(i) * d + j] = static_cast<double>(r) / static_cast<double>(m);
    }
  return NodeSet(Domain::torus(d), std::move(coords));
}

NodeSet equispaced_grid_nodes(int dim, int n) {
  if (n < 1) fail_validation("grid size must be >= 1");
  std::size_t total = 1;
  for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(n);
  std::vector<double> coords(total * dim);
  std::vector<int> m(dim, 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (int j = 0; j < dim; ++j)
      coords[i * dim + j] = static_cast<double>(m[j]) / static_cast<double>(n);
    int axis = dim - 1;
    while (axis >= 0 && ++m[axis] == n) m[axis--] = 0;
  }
  return NodeSet(Domain::torus(dim), std::move(coords));
}

NodeSet chebyshev_nodes(int n) {
  if (n < 1) fail_validation("Chebyshev node count must be >= 1");
  std::vector<double> coords(n);
  for (int m = 0; m < n; ++m) coords[m] = std::cos((2.0 * m + 1.0) * kPi / (2.0 * n));
  return NodeSet(Domain::interval(), std::move(coords));
}

namespace {

bool same_coords(const NodeSet& a, const NodeSet& b) {
  return a.flat().size() == b.flat().size() &&
         std::memcmp(a.flat().data(), b.flat().data(), a.flat().size() * sizeof(double)) == 0;
}

class TorusFftOperator final : public FourierOperator {
 public:
  // grid_n is the per-axis node count; it may exceed the index range
  // (oversampled grids), the packing mod grid_n stays collision-free as long
  // as grid_n covers the index extent
  TorusFftOperator(NodeSet grid, IndexSet set, int grid_n)
      : nodes_(std::move(grid)), set_(std::move(set)), n_(grid_n), dim_(set_.index_dim()) {
    total_ = 1;
    for (int j = 0; j < dim_; ++j) total_ *= static_cast<std::size_t>(n_);
    shape_.assign(dim_, n_);
    bins_.resize(set_.size());
    for (std::size_t i = 0; i < set_.size(); ++i) {
      auto idx = set_.index(i);
      std::size_t bin = 0;
      for (int j = 0; j < dim_; ++j) {
        const int r = ((idx[j] % n_) + n_) % n_;
        bin = bin * n_ + static_cast<std::size_t>(r);
      }
      bins_[i] = bin;
    }
  }

  const IndexSet& index_set() const override { return set_; }
  const NodeSet& node_set() const override { return nodes_; }

  void apply(std::span<const cplx> coeffs, std::span<cplx> values) const override {
    check_apply_shapes(coeffs.size(), values.size());
    // the grid has exactly the output's size, so pack and transform in place
    std::fill(values.begin(), values.end(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < coeffs.size(); ++i) values[bins_[i]] += coeffs[i];
    fft_nd(values, shape_, /*forward=*/false);
  }

  void adjoint_apply(std::span<const cplx> values, std::span<cplx> coeffs) const override {
    check_adjoint_shapes(values.size(), coeffs.size());
    // per-thread scratch: repeated sweeps run without allocator churn
    static thread_local cvec packed;
    packed.assign(values.begin(), values.end());
    fft_nd(packed, shape_, /*forward=*/true);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = packed[bins_[i]];
  }

  void basis_row(std::size_t node_index, std::span<cplx> out) const override {
    auto x = nodes_.coords(node_index);
    for (std::size_t i = 0; i < set_.size(); ++i) {
      auto idx = set_.index(i);
      double phase = 0.0;
      for (int j = 0; j < dim_; ++j) phase += idx[j] * x[j];
      out[i] = std::polar(1.0, kTwoPi * phase);
    }
  }

 private:
  NodeSet nodes_;
  IndexSet set_;
  int n_, dim_;
  std::size_t total_;
  std::vector<int> shape_;
  std::vector<std::size_t> bins_;
};

class Rank1LatticeOperator final : public FourierOperator {
 public:
  Rank1LatticeOperator(const Rank1Lattice& lattice, IndexSet set)
      : nodes_(lattice.nodes()), set_(std::move(set)), m_(lattice.m) {
    if (set_.index_dim() != lattice.dim())
      fail_validation("lattice dimension does not match index set dimension");
    residues_.resize(set_.size());
    for (std::size_t i = 0; i < set_.size(); ++i) {
      auto idx = set_.index(i);
      long long dot = 0;
      for (int j = 0; j < lattice.dim(); ++j) dot += static_cast<long long>(idx[j]) * lattice.z[j];
      residues_[i] = static_cast<std::size_t>(((dot % m_) + m_) % m_);
    }
  }

  const IndexSet& index_set() const override { return set_; }
  const NodeSet& node_set() const override { return nodes_; }

  /// Distinct residue classes n.z mod M over the index set; the lattice
  /// reconstructs the index set iff there are no collisions.
  bool has_residue_collision() const {
    std::vector<std::size_t> r = residues_;
    std::sort(r.begin(), r.end());
    return std::adjacent_find(r.begin(), r.end()) != r.end();
  }

  void apply(std::span<const cplx> coeffs, std::span<cplx> values) const override {
    check_apply_shapes(coeffs.size(), values.size());
    cvec packed(static_cast<std::size_t>(m_), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < coeffs.size(); ++i) packed[residues_[i]] += coeffs[i];
    fft_backward(packed);
    std::copy(packed.begin(), packed.end(), values.begin());
  }

  void adjoint_apply(std::span<const cplx> values, std::span<cplx> coeffs) const override {
    check_adjoint_shapes(values.size(), coeffs.size());
    cvec packed(values.begin(), values.end());
    fft_forward(packed);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = packed[residues_[i]];
  }

  void basis_row(std::size_t node_index, std::span<cplx> out) const override {
    for (std::size_t i = 0; i < set_.size(); ++i)
      out[i] = std::polar(1.0, kTwoPi * static_cast<double>(node_index) *
                                   static_cast<double>(residues_[i]) / static_cast<double>(m_));
  }

 private:
  NodeSet nodes_;
  IndexSet set_;
  long long m_;
  std::vector<std::size_t> residues_;
};

// Direct nonequispaced transform with per-node, per-axis phase tables so an
// entry e^{2 pi i n.x} costs d complex multiplications.
class TorusNdftOperator final : public FourierOperator {
 public:
  TorusNdftOperator(NodeSet nodes, IndexSet set) : nodes_(std::move(nodes)), set_(std::move(set)) {
    const int d = set_.index_dim();
    lo_.assign(d, 0);
    len_.assign(d, 0);
    for (int j = 0; j < d; ++j) {
      int lo = set_.index(0)[j], hi = lo;
      for (std::size_t i = 1; i < set_.size(); ++i) {
        lo = std::min(lo, set_.index(i)[j]);
        hi = std::max(hi, set_.index(i)[j]);
      }
      lo_[j] = lo;
      len_[j] = hi - lo + 1;
    }
    std::size_t table_len = 0;
    for (int j = 0; j < d; ++j) table_len += static_cast<std::size_t>(len_[j]);
    table_.resize(nodes_.size() * table_len);
    axis_offset_.assign(d, 0);
    for (int j = 1; j < d; ++j) axis_offset_[j] = axis_offset_[j - 1] + len_[j - 1];
    stride_ = table_len;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      auto x = nodes_.coords(i);
      for (int j = 0; j < d; ++j)
        for (int v = 0; v < len_[j]; ++v)
          table_[i * stride_ + axis_offset_[j] + v] = std::polar(1.0, kTwoPi * (lo_[j] + v) * x[j]);
    }
  }

  const IndexSet& index_set() const override { return set_; }
  const NodeSet& node_set() const override { return nodes_; }

  void apply(std::span<const cplx> coeffs, std::span<cplx> values) const override {
    check_apply_shapes(coeffs.size(), values.size());
    const int d = set_.index_dim();
    for (std::size_t xi = 0; xi < nodes_.size(); ++xi) {
      const cplx* tab = table_.data() + xi * stride_;
      cplx acc(0.0, 0.0);
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        auto idx = set_.index(i);
        cplx e = tab[axis_offset_[0] + (idx[0] - lo_[0])];
        for (int j = 1; j < d; ++j) e *= tab[axis_offset_[j] + (idx[j] - lo_[j])];
        acc += coeffs[i] * e;
      }
      values[xi] = acc;
    }
  }

  void adjoint_apply(std::span<const cplx> values, std::span<cplx> coeffs) const override {
    check_adjoint_shapes(values.size(), coeffs.size());
    const int d = set_.index_dim();
    std::fill(coeffs.begin(), coeffs.end(), cplx(0.0, 0.0));
    for (std::size_t xi = 0; xi < nodes_.size(); ++xi) {
      const cplx* tab = table_.data() + xi * stride_;
      const cplx f = values[xi];
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        auto idx = set_.index(i);
        cplx e = tab[axis_offset_[0] + (idx[0] - lo_[0])];
        for (int j = 1; j < d; ++j) e *= tab[axis_offset_[j] + (idx[j] - lo_[j])];
        coeffs[i] += std::conj(e) * f;
      }
    }
  }

  void basis_row(std::size_t node_index, std::span<cplx> out) const override {
    const int d = set_.index_dim();
    const cplx* tab = table_.data() + node_index * stride_;
    for (std::size_t i = 0; i < set_.size(); ++i) {
      auto idx = set_.index(i);
      cplx e = tab[axis_offset_[0] + (idx[0] - lo_[0])];
      for (int j = 1; j < d; ++j) e *= tab[axis_offset_[j] + (idx[j] - lo_[j])];
      out[i] = e;
    }
  }

 private:
  NodeSet nodes_;
  IndexSet set_;
  std::vector<int> lo_, len_;
  std::vector<std::size_t> axis_offset_;
  std::size_t stride_ = 0;
  cvec table_;
};

class ChebyshevOperator final : public FourierOperator {
 public:
  ChebyshevOperator(NodeSet nodes, int degree_count)
      : nodes_(std::move(nodes)), set_(IndexSet::chebyshev(degree_count)) {
    const int n = degree_count;
    fast_path_ = static_cast<int>(nodes_.size()) == n && same_coords(nodes_, chebyshev_nodes(n));
    angles_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) angles_[i] = std::acos(nodes_.coords(i)[0]);
  }

  const IndexSet& index_set() const override { return set_; }
  const NodeSet& node_set() const override { return nodes_; }
  bool fast_path() const { return fast_path_; }

  void apply(std::span<const cplx> coeffs, std::span<cplx> values) const override {
    check_apply_shapes(coeffs.size(), values.size());
    const int n = set_.param_n();
    if (fast_path_) {
      // values_m = sum_n c_n cos(n (2m+1) pi / (2N)) = sqrt(N/2) C^III (c/gamma)
      const double s = std::sqrt(n / 2.0);
      rvec re(n), im(n);
      for (int k = 0; k < n; ++k) {
        const double u = s / dct_gamma(n, k);
        re[k] = coeffs[k].real() * u;
        im[k] = coeffs[k].imag() * u;
      }
      const rvec vr = dct_iii(re), vi = dct_iii(im);
      for (int m = 0; m < n; ++m) values[m] = cplx(vr[m], vi[m]);
      return;
    }
    for (std::size_t xi = 0; xi < nodes_.size(); ++xi) {
      cplx acc(0.0, 0.0);
      for (int k = 0; k < n; ++k) acc += coeffs[k] * std::cos(k * angles_[xi]);
      values[xi] = acc;
    }
  }

  void adjoint_apply(std::span<const cplx> values, std::span<cplx> coeffs) const override {
    check_adjoint_shapes(values.size(), coeffs.size());
    const int n = set_.param_n();
    if (fast_path_) {
      const double s = std::sqrt(n / 2.0);
      rvec re(n), im(n);
      for (int m = 0; m < n; ++m) {
        re[m] = values[m].real();
        im[m] = values[m].imag();
      }
      const rvec cr = dct_ii(re), ci = dct_ii(im);
      for (int k = 0; k < n; ++k) coeffs[k] = cplx(cr[k], ci[k]) * (s / dct_gamma(n, k));
      return;
    }
    std::fill(coeffs.begin(), coeffs.end(), cplx(0.0, 0.0));
    for (std::size_t xi = 0; xi < nodes_.size(); ++xi)
      for (int k = 0; k < n; ++k) coeffs[k] += values[xi] * std::cos(k * angles_[xi]);
  }

  void basis_row(std::size_t node_index, std::span<cplx> out) const override {
    for (int k = 0; k < set_.param_n(); ++k) out[k] = cplx(std::cos(k * angles_[node_index]), 0.0);
  }

 private:
  NodeSet nodes_;
  IndexSet set_;
  bool fast_path_;
  rvec angles_;
};

class SphericalOperator final : public FourierOperator {
 public:
  SphericalOperator(NodeSet nodes, int max_degree)
      : nodes_(std::move(nodes)), set_(IndexSet::spherical(max_degree)) {}

  const IndexSet& index_set() const override { return set_; }
  const NodeSet& node_set() const override { return nodes_; }

  void apply(std::span<const cplx> coeffs, std::span<cplx> values) const override {
    check_apply_shapes(coeffs.size(), values.size());
    cvec row(set_.size());
    for (std::size_t xi = 0; xi < nodes_.size(); ++xi) {
      spherical_harmonics(nodes_.coords(xi), set_.param_n(), row);
      cplx acc(0.0, 0.0);
      for (std::size_t i = 0; i < row.size(); ++i) acc += coeffs[i] * row[i];
      values[xi] = acc;
    }
  }

  void adjoint_apply(std::span<const cplx> values, std::span<cplx> coeffs) const override {
    check_adjoint_shapes(values.size(), coeffs.size());
    std::fill(coeffs.begin(), coeffs.end(), cplx(0.0, 0.0));
    cvec row(set_.size());
    for (std::size_t xi = 0; xi < nodes_.size(); ++xi) {
      spherical_harmonics(nodes_.coords(xi), set_.param_n(), row);
      for (std::size_t i = 0; i < row.size(); ++i) coeffs[i] += std::conj(row[i]) * values[xi];
    }
  }

  void basis_row(std::size_t node_index, std::span<cplx> out) const override {
    spherical_harmonics(nodes_.coords(node_index), set_.param_n(), out);
  }

 private:
  NodeSet nodes_;
  IndexSet set_;
};

}  // namespace

namespace {

// per-axis size G when the node count is a perfect d-th power, else 0
int grid_size_of(const NodeSet& nodes, int dim) {
  const double root = std::pow(static_cast<double>(nodes.size()), 1.0 / dim);
  for (int g = std::max(1, static_cast<int>(std::llround(root)) - 1);
       g <= static_cast<int>(std::llround(root)) + 1; ++g) {
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(g);
    if (total == nodes.size()) return g;
  }
  return 0;
}

}  // namespace

std::shared_ptr<const FourierOperator> torus_fft_operator(NodeSet grid, IndexSet set) {
  if (set.kind() != IndexKind::TensorGrid) fail_validation("torus_fft_operator needs a TensorGrid index set");
  const int d = set.index_dim();
  if (grid.domain() != Domain::torus(d)) fail_validation("torus_fft_operator: node/index dimension mismatch");
  const int g = grid_size_of(grid, d);
  if (g < set.param_n() || g == 0 || !same_coords(grid, equispaced_grid_nodes(d, g)))
    fail_validation("torus_fft_operator: nodes are not a canonical equispaced grid covering the index set");
  return std::make_shared<TorusFftOperator>(std::move(grid), std::move(set), g);
}

std::shared_ptr<const FourierOperator> rank1_lattice_operator(const Rank1Lattice& lattice, IndexSet set) {
  return std::make_shared<Rank1LatticeOperator>(lattice, std::move(set));
}

std::shared_ptr<const FourierOperator> torus_ndft_operator(NodeSet nodes, IndexSet set) {
  if (set.kind() != IndexKind::TensorGrid && set.kind() != IndexKind::HyperbolicCross)
    fail_validation("torus_ndft_operator needs a torus index set");
  if (nodes.domain() != set.domain()) fail_validation("torus_ndft_operator: domain mismatch");
  return std::make_shared<TorusNdftOperator>(std::move(nodes), std::move(set));
}

std::shared_ptr<const FourierOperator> chebyshev_operator(NodeSet nodes, int degree_count) {
  if (nodes.domain().kind != DomainKind::Interval) fail_validation("chebyshev_operator needs interval nodes");
  return std::make_shared<ChebyshevOperator>(std::move(nodes), degree_count);
}

std::shared_ptr<const FourierOperator> spherical_operator(NodeSet nodes, int max_degree) {
  if (nodes.domain().kind != DomainKind::Sphere2) fail_validation("spherical_operator needs sphere nodes");
  return std::make_shared<SphericalOperator>(std::move(nodes), max_degree);
}

std::shared_ptr<const FourierOperator> make_operator(const NodeSet& nodes, const IndexSet& set) {
  switch (set.kind()) {
    case IndexKind::TensorGrid: {
      const int d = set.index_dim();
      const int g = grid_size_of(nodes, d);
      if (g >= set.param_n() && same_coords(nodes, equispaced_grid_nodes(d, g)))
        return torus_fft_operator(nodes, set);
      return torus_ndft_operator(nodes, set);
    }
    case IndexKind::HyperbolicCross:
      return torus_ndft_operator(nodes, set);
    case IndexKind::ChebyshevDegrees:
      return chebyshev_operator(nodes, set.param_n());
    case IndexKind::SphericalDegrees:
      return spherical_operator(nodes, set.param_n());
  }
  fail_validation("make_operator: unsupported index kind");
}

}  // namespace fcv
