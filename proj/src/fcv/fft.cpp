#include "fcv/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fcv/error.hpp"

namespace fcv {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// forward roots exp(-2 pi i j / n), j < n/2
cvec root_table(std::size_t n) {
  cvec table(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    table[j] = cplx(std::cos(ang), std::sin(ang));
  }
  return table;
}

// Iterative radix-2 Cooley-Tukey over a shared root table of size n/2.
void fft_pow2(std::span<cplx> a, const cvec& table, bool forward) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx w = forward ? table[k * step] : std::conj(table[k * step]);
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

// Bluestein chirp-z transform for arbitrary n; one power-of-two convolution
// whose three internal transforms share a single root table.
void fft_bluestein(std::span<cplx> a, bool forward) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;
  const double sign = forward ? -1.0 : 1.0;

  // chirp c_k = exp(sign * pi i k^2 / n); k^2 reduced mod 2n keeps the trig
  // argument small for large n
  cvec chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = sign * kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = cplx(std::cos(ang), std::sin(ang));
  }

  cvec x(m, cplx(0.0, 0.0)), y(m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) y[k] = y[m - k] = std::conj(chirp[k]);

  const cvec table = root_table(m);
  fft_pow2(x, table, true);
  fft_pow2(y, table, true);
  for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
  fft_pow2(x, table, false);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * inv_m * chirp[k];
}

}  // namespace

void fft(std::span<cplx> data, bool forward) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  if (is_pow2(n))
    fft_pow2(data, root_table(n), forward);
  else
    fft_bluestein(data, forward);
}

void fft_nd(std::span<cplx> data, std::span<const int> shape, bool forward) {
  std::size_t total = 1;
  for (int s : shape) {
    if (s < 1) fail_validation("fft_nd: axis length must be >= 1");
    total *= static_cast<std::size_t>(s);
  }
  if (total != data.size()) fail_validation("fft_nd: shape does not match data size");

  // transform axis by axis; contiguous lines run in place, strided lines are
  // gathered in tiles of adjacent lines so every cache line is touched once;
  // all lines of an axis share one root table
  std::size_t stride = total;
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const std::size_t len = static_cast<std::size_t>(shape[axis]);
    stride /= len;
    if (len == 1) continue;
    const std::size_t n_blocks = total / (len * stride);
    const bool pow2 = is_pow2(len);
    const cvec table = pow2 ? root_table(len) : cvec{};
    auto line_fft = [&](std::span<cplx> line) {
      if (pow2)
        fft_pow2(line, table, forward);
      else
        fft_bluestein(line, forward);
    };

    if (stride == 1) {
      for (std::size_t b = 0; b < n_blocks; ++b) line_fft(data.subspan(b * len, len));
      continue;
    }
    constexpr std::size_t kTile = 16;
    cvec buf(kTile * len);
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const std::size_t base = b * len * stride;
      for (std::size_t off = 0; off < stride; off += kTile) {
        const std::size_t width = std::min(kTile, stride - off);
        for (std::size_t k = 0; k < len; ++k) {
          const cplx* src = data.data() + base + k * stride + off;
          for (std::size_t t = 0; t < width; ++t) buf[t * len + k] = src[t];
        }
        for (std::size_t t = 0; t < width; ++t) line_fft(std::span<cplx>(buf.data() + t * len, len));
        for (std::size_t k = 0; k < len; ++k) {
          cplx* dst = data.data() + base + k * stride + off;
          for (std::size_t t = 0; t < width; ++t) dst[t] = buf[t * len + k];
        }
      }
    }
  }
}

}  // namespace fcv
