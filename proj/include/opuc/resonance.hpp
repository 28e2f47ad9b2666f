#ifndef OPUC_RESONANCE_HPP
#define OPUC_RESONANCE_HPP

#include <span>
#include <vector>

#include "opuc/types.hpp"

namespace opuc {

/// Vector in the weighted space H_n: <f, g> = sum_j conj(f_j) g_j (1+j).
class WeightedVector {
public:
    WeightedVector() = default;
    explicit WeightedVector(std::vector<cdouble> entries) : entries_(std::move(entries)) {}

    std::size_t size() const { return entries_.size(); }
    const std::vector<cdouble>& entries() const { return entries_; }
    cdouble& operator[](std::size_t j) { return entries_[j]; }
    cdouble operator[](std::size_t j) const { return entries_[j]; }

    cdouble inner(const WeightedVector& other) const;
    double norm_sq() const;
    double norm() const { return std::sqrt(norm_sq()); }

private:
    std::vector<cdouble> entries_;
};

/// Almost-orthogonality record: Q = K max_{k != l} |<e_k, e_l>|,
/// lhs = sum_l |<g, e_l>|^2, rhs = (1+Q) ||g||^2. The inequality lhs <= rhs
/// holds whenever Q < 1; bessel_asserted records that.
struct AlmostOrthogonality {
    double q = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool bessel_asserted = false;
};

/// Requires every e_l to be a unit vector within 1e-10.
AlmostOrthogonality almost_orthogonality_bound(std::span<const WeightedVector> vectors,
                                               const WeightedVector& g);

/// The proof's trial vector at angle eta:
///   e(j) = E_n^{-1/2} e^{-i[(j+1) eta + 2 theta_j(eta, 0)]} (1+j)^{-1},
/// normalized by E_n = sum_{j<n} (1+j)^{-1}, so that
/// <(alpha_0..alpha_{n-1}), e> = E_n^{-1/2} conj(A(n, eta)).
WeightedVector resonance_unit_vector(const VerblunskySequence& alpha, std::size_t n, double eta);

/// sup_{n <= n_max} |sum_{j=1}^n j^{-1} e^{i[j xi + g(j)]}| by direct
/// summation, with an Abel-summation (summation-by-parts) evaluation of the
/// same series reported as an accuracy cross-check.
struct AbelSup {
    double sup_partial = 0.0;
    double sbp_discrepancy = 0.0;
};

/// g spans indices j = 1..n_max (g[j-1]); empty g means g == 0.
AbelSup abel_sup(double xi, std::span<const double> g, std::size_t n_max);

/// Least-squares fit sup(xi) ~ c1 log(1/xi) + c2.
struct AbelFit {
    double c1 = 0.0;
    double c2 = 0.0;
    double r_squared = 0.0;
};

AbelFit abel_fit(std::span<const double> xis, std::span<const double> sups);

/// Combined record for one xi plus a fit across a xi grid (same g).
struct AbelBound {
    double sup_partial = 0.0;
    double fitted_c1 = 0.0;
    double fitted_c2 = 0.0;
    double r_squared = 0.0;
    double sbp_discrepancy = 0.0;
};

AbelBound abel_log_bound(double xi, std::span<const double> g, std::size_t n_max,
                         std::span<const double> xi_grid = {});

struct ResonantAngle {
    double eta = 0.0;
    double abs_a = 0.0;
};

/// The 14 and 1/(3K^2) defaults are conventional, not tuned; both stay
/// configurable.
struct ResonanceOptions {
    double larger_divisor = 14.0;        // threshold (log n) / divisor
    double separation_power_scale = 3.0; // pairwise distance >= n^{-1/(scale K^2)}
    double beta = 0.0;
    std::size_t refine_iters = 48;
    std::size_t threads = 0;
};

/// Local maxima of |A(n, eta)| over the grid exceeding (log n)/14, refined by
/// golden section and greedily thinned (largest |A| first) so the returned
/// family of size K has pairwise distances >= n^{-1/(3 K^2)}.
std::vector<ResonantAngle> resonant_angles(const VerblunskySequence& alpha, std::size_t n,
                                           std::size_t eta_grid_size,
                                           const ResonanceOptions& opts = {});

struct KmaxReport {
    std::size_t k_found = 0;
    double a_est = 0.0;
    double bound_392a = 0.0;
    double c_fit = 0.0;
    bool bound_holds = false;
    double e_n_minus_log_n = 0.0;
    std::vector<ResonantAngle> angles;
};

struct KmaxOptions {
    std::size_t eta_grid = 0;  // 0: clamp(next_pow2(n/2), 2^12, 2^16)
    std::size_t abel_n_max = 20000;
    ResonanceOptions res;
};

/// Counts resonant angles and checks them against the 392 A budget and the
/// fitted logarithmic-bound constant; also reports E_n - log n.
KmaxReport kmax_check(const VerblunskySequence& alpha, std::size_t n, const KmaxOptions& opts = {});

}  // namespace opuc

#endif
