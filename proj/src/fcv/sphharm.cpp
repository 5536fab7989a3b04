#include "fcv/sphharm.hpp"

#include <cmath>
#include <vector>

#include "fcv/error.hpp"

namespace fcv {

void spherical_harmonics(std::span<const double> x, int max_degree, std::span<cplx> out) {
  if (x.size() != 3) fail_validation("spherical_harmonics: node must have 3 coordinates");
  const int nn = max_degree;
  const std::size_t count = static_cast<std::size_t>(nn + 1) * (nn + 1);
  if (out.size() != count) fail_validation("spherical_harmonics: output size mismatch");

  const double ct = x[2];                                   // cos(theta)
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));  // sin(theta) >= 0
  // e^{i phi}; at the poles sin(theta)=0 and any phase works since P_n^m
  // vanishes there for m > 0
  cplx eiphi(1.0, 0.0);
  if (st > 0.0) eiphi = cplx(x[0] / st, x[1] / st);

  // q[l] holds the normalized associated Legendre value Q_l^m(cos theta)
  // with Y_l^m = Q_l^m e^{i m phi}; storage indexed (l,m) -> l(l+1)/2 + m
  std::vector<double> q(static_cast<std::size_t>(nn + 1) * (nn + 2) / 2);
  auto qi = [](int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; };

  q[qi(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= nn; ++m)
    q[qi(m, m)] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * q[qi(m - 1, m - 1)];
  for (int m = 0; m < nn; ++m)
    q[qi(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * q[qi(m, m)];
  for (int m = 0; m <= nn; ++m) {
    for (int l = m + 2; l <= nn; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt(((static_cast<double>(l - 1) * (l - 1)) - static_cast<double>(m) * m) /
                                 (4.0 * static_cast<double>(l - 1) * (l - 1) - 1.0));
      q[qi(l, m)] = a * (ct * q[qi(l - 1, m)] - b * q[qi(l - 2, m)]);
    }
  }

  // phases e^{i m phi}
  std::vector<cplx> phase(nn + 1);
  phase[0] = cplx(1.0, 0.0);
  for (int m = 1; m <= nn; ++m) phase[m] = phase[m - 1] * eiphi;

  std::size_t pos = 0;
  for (int l = 0; l <= nn; ++l) {
    for (int k = -l; k <= l; ++k) {
      const int m = std::abs(k);
      const cplx ypos = q[qi(l, m)] * phase[m];
      if (k >= 0)
        out[pos++] = ypos;
      else
        out[pos++] = (m % 2 == 0 ? std::conj(ypos) : -std::conj(ypos));
    }
  }
}

cplx spherical_harmonic(int n, int k, std::span<const double> x) {
  if (std::abs(k) > n) fail_validation("spherical_harmonic: |k| must be <= n");
  cvec all(static_cast<std::size_t>(n + 1) * (n + 1));
  spherical_harmonics(x, n, all);
  return all[static_cast<std::size_t>(n) * n + (k + n)];
}

}  // namespace fcv
