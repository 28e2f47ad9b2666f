#ifndef OPUC_FFT_HPP
#define OPUC_FFT_HPP

#include <vector>

#include "opuc/common.hpp"

namespace opuc::fft {

/// In-place radix-2 FFT. Size must be a power of two.
/// Forward: X_k = sum_j x_j e^{-2*pi*i*j*k/N}. Inverse applies the 1/N scale.
void transform(std::vector<cdouble>& a, bool inverse);

/// Linear convolution of two coefficient arrays (polynomial product).
std::vector<cdouble> multiply(const std::vector<cdouble>& a, const std::vector<cdouble>& b);

/// Values of the polynomial sum_j c_j z^j at z = e^{2*pi*i*k/M}, k = 0..M-1.
/// M must be a power of two with M >= coeffs.size().
std::vector<cdouble> evaluate_on_pow2_grid(const std::vector<cdouble>& coeffs, std::size_t M);

}  // namespace opuc::fft

#endif
