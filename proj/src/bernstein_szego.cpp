#include "opuc/bernstein_szego.hpp"

#include <algorithm>
#include <cmath>

#include "opuc/fft.hpp"
#include "opuc/parallel.hpp"
#include "opuc/szego.hpp"

namespace opuc {

CircleMeasure bs_density(const VerblunskySequence& alpha, std::size_t n, std::size_t grid_size,
                         std::size_t threads) {
    if (n > alpha.size())
        throw std::invalid_argument("bs_density: level n exceeds the stored sequence length");
    if (grid_size < 8 * n || grid_size < 8)
        throw guard_error("bs_density: resolution guard requires grid_size >= 8 n");

    std::vector<double> density(grid_size);
    const double log_norm = [&] {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::log1p(-std::norm(alpha.at(j)));
        return s;
    }();

    // Large decaying families: coefficient route (D&C product + one FFT).
    // Otherwise: pointwise recursion per grid node, stable for any |alpha| < 1.
    const bool fast = n >= 2048 && is_pow2(grid_size) && alpha.sum_abs() <= 12.0;
    if (fast) {
        MonicPair state = szego_run_fast(alpha, n);
        auto values = evaluate_on_grid(state, grid_size);
        for (std::size_t k = 0; k < grid_size; ++k) {
            const double phi_sq = std::norm(values[k]) * std::exp(-log_norm);
            density[k] = 1.0 / (two_pi * phi_sq);
        }
    } else {
        parallel_for(grid_size, threads, [&](std::size_t k) {
            const double eta = two_pi * double(k) / double(grid_size);
            const CircleValue v = evaluate_recursive(alpha, eta, 0.0, n);
            density[k] = std::exp(-(2.0 * v.log_abs - log_norm)) / two_pi;
        });
    }
    return CircleMeasure(std::move(density));
}

std::vector<double> fejer_kernel(std::size_t n, std::span<const double> etas) {
    std::vector<double> out(etas.size());
    for (std::size_t i = 0; i < etas.size(); ++i) {
        const double s = std::sin(0.5 * etas[i]);
        if (s == 0.0) {
            out[i] = double(n + 1);
        } else {
            const double t = std::sin(0.5 * double(n + 1) * etas[i]) / s;
            out[i] = t * t / double(n + 1);
        }
    }
    return out;
}

namespace {

// Antiderivative on the real line: Gt(x) with Gt' = F_n / (2 pi) and
// Gt(x + 2 pi) = Gt(x) + 1. Exact closed form from the kernel's Fourier series.
double fejer_antiderivative(std::size_t n, double x) {
    double k_turns = std::floor((x + pi) / two_pi);
    const double r = x - two_pi * k_turns;  // in [-pi, pi)
    double s = r / two_pi;
    for (std::size_t k = 1; k <= n; ++k) {
        const double w = (1.0 - double(k) / double(n + 1)) / double(k);
        s += w * std::sin(double(k) * r) / pi;
    }
    return k_turns + s;
}

}  // namespace

std::vector<double> fejer_smooth_indicator(const IntervalOnCircle& I, std::size_t n,
                                           std::span<const double> etas) {
    const double a = I.center - I.length();  // 2I spans [center - |I|, center + |I|]
    const double b = I.center + I.length();
    std::vector<double> out(etas.size());
    if (b - a >= two_pi) {  // 2I wraps the full circle
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    for (std::size_t i = 0; i < etas.size(); ++i) {
        // keep eta - b and eta - a in one periodic window
        double lo = wrap_angle(etas[i] - b);
        double hi = lo + (b - a);
        out[i] = fejer_antiderivative(n, hi) - fejer_antiderivative(n, lo);
    }
    return out;
}

std::vector<double> fejer_smooth_indicator_grid(const IntervalOnCircle& I, std::size_t n,
                                                std::size_t M) {
    if (!is_pow2(M) || M < 2 * n + 2)
        throw std::invalid_argument("fejer_smooth_indicator_grid: need power-of-two M >= 2n+2");
    const double a = I.center - I.length();
    const double b = I.center + I.length();
    if (b - a >= two_pi) return std::vector<double>(M, 1.0);
    std::vector<cdouble> coeff(M, cdouble(0.0, 0.0));
    coeff[0] = cdouble((b - a) / two_pi, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double fk = 1.0 - double(k) / double(n + 1);
        const cdouble chi = (std::polar(1.0, -double(k) * a) - std::polar(1.0, -double(k) * b)) /
                            cdouble(0.0, two_pi * double(k));
        coeff[k] = fk * chi;
        coeff[M - k] = std::conj(coeff[k]);
    }
    auto values = fft::evaluate_on_pow2_grid(coeff, M);
    std::vector<double> out(M);
    for (std::size_t j = 0; j < M; ++j) out[j] = values[j].real();
    return out;
}

IntervalComparison interval_comparison(const CircleMeasure& mu, const CircleMeasure& nu,
                                       const IntervalOnCircle& I, std::size_t n, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("interval_comparison: need kappa > 0");
    IntervalComparison out;
    out.delta = I.length();
    const double delta_min = std::pow(double(std::max<std::size_t>(n, 1)), -1.0 / (2.0 + kappa));
    if (out.delta < delta_min)
        throw guard_error("interval_comparison: |I| must be >= n^{-1/(2+kappa)}");

    out.mu_mass = measure_interval_mass(mu, I);
    out.nu_mass_3i = measure_interval_mass(nu, I.tripled());
    out.delta_kappa = std::pow(out.delta, kappa);
    out.c_impl = std::max(0.0, out.mu_mass - out.nu_mass_3i) / out.delta_kappa;

    const long guard = long(std::min(mu.grid_size(), nu.grid_size()) / 4);
    out.checked_order = std::min(long(n), guard);
    for (long k = 0; k <= out.checked_order; ++k) {
        const double d = std::abs(measure_moment(mu, k) - measure_moment(nu, k));
        out.max_moment_mismatch = std::max(out.max_moment_mismatch, d);
    }
    out.moment_warning = out.max_moment_mismatch > 1e-6;
    return out;
}

}  // namespace opuc
