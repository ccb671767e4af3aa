#pragma once

#include <complex>
#include <span>
#include <vector>

namespace peup::fft {

using Complex = std::complex<double>;

// Unnormalized DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
std::vector<Complex> forward(std::span<const Complex> in);

// Unnormalized inverse, x_j = sum_k X_k exp(+2 pi i j k / n). No 1/n factor.
std::vector<Complex> backward(std::span<const Complex> in);

}  // namespace peup::fft
