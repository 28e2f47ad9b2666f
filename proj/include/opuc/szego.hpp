#ifndef OPUC_SZEGO_HPP
#define OPUC_SZEGO_HPP

#include <span>
#include <vector>

#include "opuc/types.hpp"

namespace opuc {

/// One step of the Szego recursion:
///   Phi_{n+1}(z) = z Phi_n(z) - conj(alpha_n) Phi_n*(z),
///   Phi_{n+1}*   = reversed complex conjugate of Phi_{n+1}.
/// Rejects |alpha_n| >= 1.
MonicPair szego_step(const MonicPair& state, cdouble alpha_n);

/// Run the recursion from Phi_0 = 1 through degree n by repeated stepping.
MonicPair szego_run(const VerblunskySequence& alpha, std::size_t n);

/// Same result as szego_run via a divide-and-conquer transfer-matrix product
/// with FFT polynomial multiplication; O(n log^2 n). Intended for the
/// decaying families the scanner uses (guards against coefficient blow-up).
MonicPair szego_run_fast(const VerblunskySequence& alpha, std::size_t n);

/// Phi_n(e^{i eta}) by Horner evaluation of the stored coefficients.
std::vector<cdouble> evaluate_on_circle(const MonicPair& state, std::span<const double> etas);

/// Orthonormal values phi_n = Phi_n / sqrt(norm_sq) at the given angles.
std::vector<cdouble> evaluate_orthonormal_on_circle(const MonicPair& state,
                                                    std::span<const double> etas);

/// Phi_n at the M-point uniform grid eta_k = 2 pi k / M via one FFT.
/// M must be a power of two with M > degree.
std::vector<cdouble> evaluate_on_grid(const MonicPair& state, std::size_t M);

/// Value of Phi_n(e^{i eta}) in scaled form: Phi = exp(log_abs) * unit.
/// Computed by running the recursion pointwise at z = e^{i eta} with periodic
/// rescaling, so it stays finite for long sequences with |alpha| near 1.
struct CircleValue {
    double log_abs = 0.0;
    cdouble unit = cdouble(1.0, 0.0);
};

/// Pointwise-recursion evaluation of Phi_n at e^{i eta} for the rotated
/// coefficients e^{i beta} alpha_j.
CircleValue evaluate_recursive(const VerblunskySequence& alpha, double eta, double beta,
                               std::size_t n);

/// Gram-Schmidt in L^2(d mu) on {1, z, ..., z^n} using the Toeplitz moment
/// matrix (modified Gram-Schmidt); reads alpha_k = -conj(Phi_{k+1}(0)).
/// Throws guard_error when the moment matrix is numerically singular
/// (measure concentrated on fewer than n+1 points).
VerblunskySequence verblunsky_from_measure(const CircleMeasure& m, std::size_t n);

}  // namespace opuc

#endif
