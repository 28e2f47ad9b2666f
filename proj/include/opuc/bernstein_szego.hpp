#ifndef OPUC_BERNSTEIN_SZEGO_HPP
#define OPUC_BERNSTEIN_SZEGO_HPP

#include <span>
#include <vector>

#include "opuc/types.hpp"

namespace opuc {

/// Bernstein-Szego approximant at level n: the purely absolutely continuous
/// measure with density 1 / (2 pi |phi_n(e^{i eta})|^2) on the grid.
/// Requires n <= alpha length and grid_size >= 8 n (resolution guard).
CircleMeasure bs_density(const VerblunskySequence& alpha, std::size_t n, std::size_t grid_size,
                         std::size_t threads = 0);

/// Fejer kernel F_n(eta) = (1/(n+1)) (sin((n+1) eta/2) / sin(eta/2))^2,
/// with the removable singularity at eta = 0 set to n+1.
std::vector<double> fejer_kernel(std::size_t n, std::span<const double> etas);

/// sigma_n = F_n * chi_{2I} (normalized convolution), evaluated through the
/// exact antiderivative of F_n; values lie in [0, 1] up to roundoff.
std::vector<double> fejer_smooth_indicator(const IntervalOnCircle& I, std::size_t n,
                                           std::span<const double> etas);

/// sigma_n sampled on the M-point uniform grid via its Fourier coefficients
/// (one FFT); M must be a power of two with M >= 2n + 2.
std::vector<double> fejer_smooth_indicator_grid(const IntervalOnCircle& I, std::size_t n,
                                                std::size_t M);

/// Record of the two-measure interval comparison mu(I) <= nu(3I) + C delta^kappa.
struct IntervalComparison {
    double mu_mass = 0.0;             // mu(I)
    double nu_mass_3i = 0.0;          // nu(3I)
    double delta = 0.0;               // |I|
    double delta_kappa = 0.0;         // delta^kappa
    double c_impl = 0.0;              // max(0, mu(I) - nu(3I)) / delta^kappa
    double max_moment_mismatch = 0.0; // through the checked order
    long checked_order = 0;
    bool moment_warning = false;      // mismatch > 1e-6
};

/// Requires delta = |I| >= n^{-1/(2+kappa)}; moment agreement through order n
/// is measured and reported, never assumed.
IntervalComparison interval_comparison(const CircleMeasure& mu, const CircleMeasure& nu,
                                       const IntervalOnCircle& I, std::size_t n, double kappa);

}  // namespace opuc

#endif
