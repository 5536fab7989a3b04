#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fcv {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class DomainKind { Torus, Interval, Sphere2 };

/// Approximation domain. The torus carries its dimension d >= 1; the unit
/// interval [-1,1] (Chebyshev measure) and the unit sphere S^2 have none.
struct Domain {
  DomainKind kind = DomainKind::Torus;
  int dim = 1;  // meaningful for Torus only

  static Domain torus(int d);
  static Domain interval();
  static Domain sphere();

  /// Number of coordinate columns a node uses: d / 1 / 3.
  int coord_count() const;
  /// Total measure: 1 (torus), pi (interval, Chebyshev weight), 4pi (sphere).
  double measure() const;
  std::string name() const;

  bool operator==(const Domain& o) const {
    return kind == o.kind && (kind != DomainKind::Torus || dim == o.dim);
  }
};

Domain parse_domain(const std::string& name);

enum class IndexKind { TensorGrid, HyperbolicCross, ChebyshevDegrees, SphericalDegrees };

/// Finite frequency index set with a fixed, documented enumeration order:
///  - TensorGrid:       Z^d cap prod [-N/2, N/2), lexicographic ascending
///                      (leftmost coordinate most significant)
///  - HyperbolicCross:  prod_j max(1,|n_j|) <= N, same lexicographic order
///  - ChebyshevDegrees: 0..N-1
///  - SphericalDegrees: (n,k), 0<=n<=N, -n<=k<=n, degree-major then order
/// Immutable and cheap to copy.
class IndexSet {
 public:
  static IndexSet tensor_grid(int dim, int n);
  static IndexSet hyperbolic_cross(int dim, int n);
  static IndexSet chebyshev(int n);
  static IndexSet spherical(int n);

  IndexKind kind() const { return d_->kind; }
  Domain domain() const { return d_->domain; }
  int param_n() const { return d_->n; }
  /// Entries per multi-index: d (torus kinds), 1 (Chebyshev), 2 (spherical).
  int index_dim() const { return d_->idx_dim; }
  std::size_t size() const { return d_->flat.size() / d_->idx_dim; }
  std::span<const int> index(std::size_t i) const {
    return {d_->flat.data() + i * d_->idx_dim, static_cast<std::size_t>(d_->idx_dim)};
  }
  std::span<const int> flat() const { return d_->flat; }

  /// Position of the zero-order index (all-zero / degree 0 / (0,0)).
  std::size_t zero_index() const { return d_->zero_pos; }

  bool operator==(const IndexSet& o) const;

 private:
  struct Data {
    IndexKind kind;
    Domain domain;
    int n;
    int dim;
    int idx_dim;
    std::size_t zero_pos;
    std::vector<int> flat;
  };
  explicit IndexSet(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

/// All pairwise differences {n1 - n2 : n1,n2 in set}, deduplicated and sorted
/// lexicographically. Only defined for TensorGrid and HyperbolicCross.
std::vector<std::vector<int>> difference_set(const IndexSet& set);

/// Sample locations with canonical coordinates: torus in [0,1)^d (reduced
/// mod 1 at construction), interval in [-1,1], sphere as unit vectors in R^3
/// (norm within 1e-12). Exact duplicates are rejected. Immutable.
class NodeSet {
 public:
  NodeSet(Domain domain, std::vector<double> coords);

  Domain domain() const { return d_->domain; }
  std::size_t size() const { return d_->coords.size() / d_->stride; }
  int stride() const { return d_->stride; }
  std::span<const double> coords(std::size_t i) const {
    return {d_->coords.data() + i * d_->stride, static_cast<std::size_t>(d_->stride)};
  }
  std::span<const double> flat() const { return d_->coords; }

 private:
  struct Data {
    Domain domain;
    int stride;
    std::vector<double> coords;
  };
  std::shared_ptr<const Data> d_;
};

/// Strictly positive quadrature weights aligned with a NodeSet.
rvec validate_spatial_weights(rvec w, std::size_t n_nodes);

/// Non-negative frequency weights aligned with an IndexSet; only the
/// zero-order entry may vanish.
rvec validate_frequency_weights(rvec w, const IndexSet& set);

/// Coefficient vector over an index set; sizes checked at construction.
struct Spectrum {
  IndexSet index_set;
  cvec coefficients;

  Spectrum(IndexSet set, cvec coeff);
};

/// Value vector over a node set; sizes checked at construction.
struct SampleVector {
  NodeSet node_set;
  cvec values;

  SampleVector(NodeSet nodes, cvec vals);
};

/// Abstract linear map f_hat -> (sum_n f_hat_n phi_n(x))_x and its adjoint.
/// Implementations are immutable; apply/adjoint_apply are pure and reentrant.
class FourierOperator {
 public:
  virtual ~FourierOperator() = default;

  virtual const IndexSet& index_set() const = 0;
  virtual const NodeSet& node_set() const = 0;

  /// values = F coeffs ; coeffs.size() == |I|, values.size() == |X|.
  virtual void apply(std::span<const cplx> coeffs, std::span<cplx> values) const = 0;
  /// coeffs = F^H values.
  virtual void adjoint_apply(std::span<const cplx> values, std::span<cplx> coeffs) const = 0;

  /// Row (phi_n(x_i))_n of the Fourier matrix, evaluated directly.
  virtual void basis_row(std::size_t node_index, std::span<cplx> out) const = 0;

  cvec apply(const cvec& coeffs) const;
  cvec adjoint_apply(const cvec& values) const;

 protected:
  void check_apply_shapes(std::size_t in, std::size_t out) const;
  void check_adjoint_shapes(std::size_t in, std::size_t out) const;
};

}  // namespace fcv
