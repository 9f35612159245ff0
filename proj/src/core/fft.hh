#pragma once

#include <complex>

namespace sh::fft {

// In-place unnormalized DFT of a row-major ndim-dimensional array.
// sign -1: sum f_j e^{-2 pi i jk/N} per axis; sign +1: conjugate transform.
// Neither direction applies a 1/N factor.
void transform(int ndim, const long* dims, std::complex<double>* data, int sign);

}  // namespace sh::fft
