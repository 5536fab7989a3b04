#include "fcv/dct.hpp"

#include <cmath>

#include "fcv/error.hpp"
#include "fcv/fft.hpp"

namespace fcv {

double dct_gamma(int n, int k) { return (k == 0 || k == n) ? std::sqrt(0.5) : 1.0; }

rvec dct_i(const rvec& v) {
  if (v.size() < 2) fail_validation("dct_i: input length must be >= 2");
  const int n = static_cast<int>(v.size()) - 1;

  // even extension of length 2N; real FFT output is
  //   F_j = v_0 + (-1)^j v_N + 2 sum_{k=1}^{N-1} v_k cos(pi j k / N)
  cvec ext(2 * static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (int k = 0; k <= n; ++k) ext[k] = cplx(v[k], 0.0);
  for (int k = 1; k < n; ++k) ext[2 * n - k] = cplx(v[k], 0.0);
  fft_forward(ext);

  const double scale = std::sqrt(2.0 / n);
  rvec out(v.size());
  for (int j = 0; j <= n; ++j) {
    const double ends = v[0] + ((j & 1) ? -v[n] : v[n]);
    const double interior = 0.5 * (ext[j].real() - ends);
    out[j] = scale * dct_gamma(n, j) * (std::sqrt(0.5) * ends + interior);
  }
  return out;
}

rvec dct_ii(const rvec& v) {
  if (v.empty()) fail_validation("dct_ii: empty input");
  const int n = static_cast<int>(v.size());

  // place v_m at slot 2m+1 of a length-4N array, then
  //   Re FFT_{4N}(w)_j = sum_m v_m cos(j (2m+1) pi / (2N))
  cvec ext(4 * static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (int m = 0; m < n; ++m) ext[2 * m + 1] = cplx(v[m], 0.0);
  fft_forward(ext);

  const double scale = std::sqrt(2.0 / n);
  rvec out(v.size());
  for (int j = 0; j < n; ++j) out[j] = scale * dct_gamma(n, j) * ext[j].real();
  return out;
}

rvec dct(DctKind kind, const rvec& v) {
  switch (kind) {
    case DctKind::I: return dct_i(v);
    case DctKind::II: return dct_ii(v);
    case DctKind::III: return dct_iii(v);
  }
  fail_validation("dct: unknown kind");
}

rvec dct_iii(const rvec& v) {
  if (v.empty()) fail_validation("dct_iii: empty input");
  const int n = static_cast<int>(v.size());

  // transpose of dct_ii: read the odd FFT bins of the gamma-weighted input
  cvec ext(4 * static_cast<std::size_t>(n), cplx(0.0, 0.0));
  for (int k = 0; k < n; ++k) ext[k] = cplx(dct_gamma(n, k) * v[k], 0.0);
  fft_forward(ext);

  const double scale = std::sqrt(2.0 / n);
  rvec out(v.size());
  for (int m = 0; m < n; ++m) out[m] = scale * ext[2 * m + 1].real();
  return out;
}

}  // namespace fcv
