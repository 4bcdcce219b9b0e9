#pragma once

#include "nvist/grid.hpp"

namespace nvist {

// 2-D DFT in place on row-major arrays, sum_x e^{-i x.xi} f(x) forward.
// Plans are cached per shape and shared across threads; execution is reentrant.
void fft2(ComplexArray& a);
/// Inverse DFT including the 1/(rows*cols) factor.
void ifft2(ComplexArray& a);

/// Smallest 2^a 3^b 5^c that is >= n.
int fft_friendly_size(int n);

}  // namespace nvist
