#pragma once

#include <complex>
#include <vector>

namespace sfglab {

/// Exact linear autoconvolution out[q] = sum_k in[k] * in[q - k],
/// q = 0 .. 2n-2, computed by zero-padded power-of-two FFTs. Plans are
/// cached per size and execution is thread-safe.
std::vector<std::complex<double>> linear_autoconvolution(
    const std::vector<std::complex<double>>& in);

/// Linear convolution of two sequences, output size |a| + |b| - 1.
std::vector<std::complex<double>> linear_convolution(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b);

/// Real-sequence convenience overload.
std::vector<double> linear_convolution(const std::vector<double>& a,
                                       const std::vector<double>& b);

/// Plain DFT. The inverse transform carries the 1/N factor, so the two
/// compose to the identity.
std::vector<std::complex<double>> fourier_transform(
    const std::vector<std::complex<double>>& in, bool inverse);

} // namespace sfglab
