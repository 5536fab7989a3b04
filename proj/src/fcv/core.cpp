#include "fcv/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "fcv/error.hpp"

namespace fcv {

Domain Domain::torus(int d) {
  if (d < 1) fail_validation("torus dimension must be >= 1, got " + std::to_string(d));
  return Domain{DomainKind::Torus, d};
}

Domain Domain::interval() { return Domain{DomainKind::Interval, 1}; }

Domain Domain::sphere() { return Domain{DomainKind::Sphere2, 2}; }

int Domain::coord_count() const {
  switch (kind) {
    case DomainKind::Torus: return dim;
    case DomainKind::Interval: return 1;
    case DomainKind::Sphere2: return 3;
  }
  return 0;
}

double Domain::measure() const {
  switch (kind) {
    case DomainKind::Torus: return 1.0;
    case DomainKind::Interval: return kPi;
    case DomainKind::Sphere2: return 4.0 * kPi;
  }
  return 0.0;
}

std::string Domain::name() const {
  switch (kind) {
    case DomainKind::Torus: return "torus" + std::to_string(dim);
    case DomainKind::Interval: return "interval";
    case DomainKind::Sphere2: return "sphere";
  }
  return "?";
}

Domain parse_domain(const std::string& name) {
  if (name == "interval") return Domain::interval();
  if (name == "sphere") return Domain::sphere();
  if (name.rfind("torus", 0) == 0) {
    const std::string rest = name.substr(5);
    if (!rest.empty() && rest.find_first_not_of("0123456789") == std::string::npos)
      return Domain::torus(std::stoi(rest));
  }
  fail_validation("unknown domain '" + name + "' (expected torusD, interval, sphere)");
}

namespace {

std::size_t find_zero_pos(const std::vector<int>& flat, int idx_dim) {
  const std::size_t count = flat.size() / idx_dim;
  for (std::size_t i = 0; i < count; ++i) {
    bool zero = true;
    for (int j = 0; j < idx_dim; ++j) zero &= flat[i * idx_dim + j] == 0;
    if (zero) return i;
  }
  fail_validation("index set does not contain the zero-order index");
}

}  // namespace

IndexSet IndexSet::tensor_grid(int dim, int n) {
  if (dim < 1) fail_validation("tensor grid dimension must be >= 1");
  if (n < 1) fail_validation("tensor grid size must be >= 1");
  const int lo = -(n / 2);
  const int hi = n - n / 2;  // half-open [lo, hi), n values per axis
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(std::pow(double(n), dim)) * dim);
  std::vector<int> cur(dim, lo);
  for (;;) {
    flat.insert(flat.end(), cur.begin(), cur.end());
    int axis = dim - 1;
    while (axis >= 0 && ++cur[axis] == hi) cur[axis--] = lo;
    if (axis < 0) break;
  }
  auto data = std::make_shared<Data>();
  data->kind = IndexKind::TensorGrid;
  data->domain = Domain::torus(dim);
  data->n = n;
  data->dim = dim;
  data->idx_dim = dim;
  data->flat = std::move(flat);
  data->zero_pos = find_zero_pos(data->flat, dim);
  return IndexSet(std::move(data));
}

IndexSet IndexSet::hyperbolic_cross(int dim, int n) {
  if (dim < 1) fail_validation("hyperbolic cross dimension must be >= 1");
  if (n < 1) fail_validation("hyperbolic cross radius must be >= 1");
  std::vector<int> flat;
  std::vector<int> cur(dim, -n);
  for (;;) {
    long prod = 1;
    for (int j = 0; j < dim; ++j) prod *= std::max(1, std::abs(cur[j]));
    if (prod <= n) flat.insert(flat.end(), cur.begin(), cur.end());
    int axis = dim - 1;
    while (axis >= 0 && ++cur[axis] == n + 1) cur[axis--] = -n;
    if (axis < 0) break;
  }
  auto data = std::make_shared<Data>();
  data->kind = IndexKind::HyperbolicCross;
  data->domain = Domain::torus(dim);
  data->n = n;
  data->dim = dim;
  data->idx_dim = dim;
  data->flat = std::move(flat);
  data->zero_pos = find_zero_pos(data->flat, dim);
  return IndexSet(std::move(data));
}

IndexSet IndexSet::chebyshev(int n) {
  if (n < 1) fail_validation("Chebyshev degree count must be >= 1");
  std::vector<int> flat(n);
  for (int i = 0; i < n; ++i) flat[i] = i;
  auto data = std::make_shared<Data>();
  data->kind = IndexKind::ChebyshevDegrees;
  data->domain = Domain::interval();
  data->n = n;
  data->dim = 1;
  data->idx_dim = 1;
  data->flat = std::move(flat);
  data->zero_pos = 0;
  return IndexSet(std::move(data));
}

IndexSet IndexSet::spherical(int n) {
  if (n < 0) fail_validation("spherical max degree must be >= 0");
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(n + 1) * (n + 1) * 2);
  for (int deg = 0; deg <= n; ++deg)
    for (int k = -deg; k <= deg; ++k) {
      flat.push_back(deg);
      flat.push_back(k);
    }
  auto data = std::make_shared<Data>();
  data->kind = IndexKind::SphericalDegrees;
  data->domain = Domain::sphere();
  data->n = n;
  data->dim = 2;
  data->idx_dim = 2;
  data->flat = std::move(flat);
  data->zero_pos = 0;
  return IndexSet(std::move(data));
}

bool IndexSet::operator==(const IndexSet& o) const {
  return d_->kind == o.d_->kind && d_->n == o.d_->n && d_->dim == o.d_->dim;
}

std::vector<std::vector<int>> difference_set(const IndexSet& set) {
  if (set.kind() != IndexKind::TensorGrid && set.kind() != IndexKind::HyperbolicCross)
    fail_validation("difference set is only defined for torus index sets");
  const int d = set.index_dim();
  std::set<std::vector<int>> out;
  std::vector<int> diff(d);
  for (std::size_t a = 0; a < set.size(); ++a) {
    auto na = set.index(a);
    for (std::size_t b = 0; b < set.size(); ++b) {
      auto nb = set.index(b);
      for (int j = 0; j < d; ++j) diff[j] = na[j] - nb[j];
      out.insert(diff);
    }
  }
  return {out.begin(), out.end()};
}

NodeSet::NodeSet(Domain domain, std::vector<double> coords) {
  const int stride = domain.coord_count();
  if (coords.empty() || coords.size() % stride != 0)
    fail_validation("node coordinate array size must be a positive multiple of " +
                    std::to_string(stride));
  const std::size_t count = coords.size() / stride;

  switch (domain.kind) {
    case DomainKind::Torus:
      for (double& c : coords) {
        c -= std::floor(c);
        if (c >= 1.0) c = 0.0;  // floor rounding at the seam
      }
      break;
    case DomainKind::Interval:
      for (std::size_t i = 0; i < count; ++i)
        if (!(coords[i] >= -1.0 && coords[i] <= 1.0))
          fail_validation("interval node " + std::to_string(i) + " outside [-1,1]");
      break;
    case DomainKind::Sphere2:
      for (std::size_t i = 0; i < count; ++i) {
        const double* p = coords.data() + 3 * i;
        const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        if (std::abs(norm - 1.0) > 1e-12)
          fail_validation("sphere node " + std::to_string(i) +
                          " is not unit length (|norm-1| = " + std::to_string(std::abs(norm - 1.0)) + ")");
      }
      break;
  }

  // exact duplicate detection
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::memcmp(coords.data() + a * stride, coords.data() + b * stride,
                       stride * sizeof(double)) < 0;
  });
  for (std::size_t i = 1; i < count; ++i) {
    if (std::memcmp(coords.data() + order[i - 1] * stride, coords.data() + order[i] * stride,
                    stride * sizeof(double)) == 0)
      fail_validation("duplicate nodes at indices " + std::to_string(order[i - 1]) + " and " +
                      std::to_string(order[i]));
  }

  auto data = std::make_shared<Data>();
  data->domain = domain;
  data->stride = stride;
  data->coords = std::move(coords);
  d_ = std::move(data);
}

rvec validate_spatial_weights(rvec w, std::size_t n_nodes) {
  if (w.size() != n_nodes)
    fail_validation("spatial weight count " + std::to_string(w.size()) +
                    " does not match node count " + std::to_string(n_nodes));
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0)) fail_validation("spatial weight " + std::to_string(i) + " is not positive");
  return w;
}

rvec validate_frequency_weights(rvec w, const IndexSet& set) {
  if (w.size() != set.size())
    fail_validation("frequency weight count " + std::to_string(w.size()) +
                    " does not match index set size " + std::to_string(set.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] >= 0.0))
      fail_validation("frequency weight " + std::to_string(i) + " is negative");
    if (w[i] == 0.0 && i != set.zero_index())
      fail_validation("frequency weight " + std::to_string(i) +
                      " is zero; only the zero-order entry may vanish");
  }
  return w;
}

Spectrum::Spectrum(IndexSet set, cvec coeff) : index_set(std::move(set)), coefficients(std::move(coeff)) {
  if (coefficients.size() != index_set.size())
    fail_validation("spectrum length " + std::to_string(coefficients.size()) +
                    " does not match index set size " + std::to_string(index_set.size()));
}

SampleVector::SampleVector(NodeSet nodes, cvec vals) : node_set(std::move(nodes)), values(std::move(vals)) {
  if (values.size() != node_set.size())
    fail_validation("sample vector length " + std::to_string(values.size()) +
                    " does not match node count " + std::to_string(node_set.size()));
}

cvec FourierOperator::apply(const cvec& coeffs) const {
  cvec out(node_set().size());
  apply(std::span<const cplx>(coeffs), std::span<cplx>(out));
  return out;
}

cvec FourierOperator::adjoint_apply(const cvec& values) const {
  cvec out(index_set().size());
  adjoint_apply(std::span<const cplx>(values), std::span<cplx>(out));
  return out;
}

void FourierOperator::check_apply_shapes(std::size_t in, std::size_t out) const {
  if (in != index_set().size() || out != node_set().size())
    fail_validation("apply: shape mismatch");
}

void FourierOperator::check_adjoint_shapes(std::size_t in, std::size_t out) const {
  if (in != node_set().size() || out != index_set().size())
    fail_validation("adjoint_apply: shape mismatch");
}

}  // namespace fcv
