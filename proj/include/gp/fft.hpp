#pragma once

#include <complex>
#include <cstddef>

namespace gp::fft {

/// Unnormalized in-place DFT on an n^dim complex array (row-major).
/// sign = -1 forward, +1 backward. Plans are cached per (dim, n, sign).
void transform(int dim, int n, std::complex<double>* data, int sign);

}  // namespace gp::fft
