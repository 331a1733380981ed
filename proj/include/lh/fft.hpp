#pragma once

#include "lh/common.hpp"

namespace lh::fft {

enum class Direction { Forward, Backward };

/// In-place unnormalized 2-D DFT of an n x n row-major array.
/// Forward uses exp(-2 pi i k x / n), Backward exp(+2 pi i k x / n).
void transform_2d(int n, cplx* data, Direction dir);

/// In-place unnormalized 1-D DFT of length len with the given stride.
void transform_1d(int len, cplx* data, Direction dir, int stride = 1);

}  // namespace lh::fft
