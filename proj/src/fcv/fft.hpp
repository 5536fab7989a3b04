#pragma once

#include <span>

#include "fcv/core.hpp"

namespace fcv {

/// In-place unscaled DFT of arbitrary length:
///   forward:  X_j = sum_k x_k exp(-2 pi i j k / n)
///   backward: X_j = sum_k x_k exp(+2 pi i j k / n)
/// Neither direction applies a 1/n factor. Power-of-two lengths use an
/// iterative radix-2 kernel, everything else goes through Bluestein's
/// chirp-z embedding.
void fft(std::span<cplx> data, bool forward);

inline void fft_forward(std::span<cplx> data) { fft(data, true); }
inline void fft_backward(std::span<cplx> data) { fft(data, false); }

/// Unscaled multi-dimensional DFT on a row-major array with the given shape
/// (leftmost axis slowest). Transforms every axis with the 1-d kernel.
void fft_nd(std::span<cplx> data, std::span<const int> shape, bool forward);

}  // namespace fcv
