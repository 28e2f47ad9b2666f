#include "opuc/resonance.hpp"

#include <algorithm>
#include <cmath>

#include "opuc/generators.hpp"
#include "opuc/pruefer.hpp"

namespace opuc {

cdouble WeightedVector::inner(const WeightedVector& other) const {
    if (other.size() != size())
        throw std::invalid_argument("WeightedVector::inner: dimension mismatch");
    cdouble s(0.0, 0.0);
    for (std::size_t j = 0; j < size(); ++j)
        s += std::conj(entries_[j]) * other.entries_[j] * double(1 + j);
    return s;
}

double WeightedVector::norm_sq() const {
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j) s += std::norm(entries_[j]) * double(1 + j);
    return s;
}

AlmostOrthogonality almost_orthogonality_bound(std::span<const WeightedVector> vectors,
                                               const WeightedVector& g) {
    for (const auto& e : vectors)
        if (std::fabs(e.norm() - 1.0) > 1e-10)
            throw std::invalid_argument("almost_orthogonality_bound: vectors must be unit norm");
    const std::size_t k_count = vectors.size();
    double max_cross = 0.0;
    for (std::size_t k = 0; k < k_count; ++k)
        for (std::size_t l = k + 1; l < k_count; ++l)
            max_cross = std::max(max_cross, std::abs(vectors[k].inner(vectors[l])));
    AlmostOrthogonality out;
    out.q = double(k_count) * max_cross;
    for (const auto& e : vectors) out.lhs += std::norm(g.inner(e));
    out.rhs = (1.0 + out.q) * g.norm_sq();
    out.bessel_asserted = out.q < 1.0;
    return out;
}

WeightedVector resonance_unit_vector(const VerblunskySequence& alpha, std::size_t n, double eta) {
    if (n == 0) throw std::invalid_argument("resonance_unit_vector: need n >= 1");
    const PrueferTrajectory traj = pruefer_evolve(alpha, eta, 0.0, n);
    const double inv_sqrt_en = 1.0 / std::sqrt(harmonic_number(n));
    std::vector<cdouble> e(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double gamma = double(j + 1) * eta + 2.0 * traj.phases[j];
        e[j] = inv_sqrt_en * std::polar(1.0, -gamma) / double(1 + j);
    }
    return WeightedVector(std::move(e));
}

AbelSup abel_sup(double xi, std::span<const double> g, std::size_t n_max) {
    if (!(xi > 0.0 && xi < two_pi)) throw std::invalid_argument("abel_sup: need xi in (0, 2 pi)");
    if (!g.empty() && g.size() < n_max)
        throw std::invalid_argument("abel_sup: g must cover j = 1..n_max");
    auto g_at = [&](std::size_t j) { return g.empty() ? 0.0 : g[j - 1]; };

    AbelSup out;
    cdouble direct(0.0, 0.0);
    for (std::size_t j = 1; j <= n_max; ++j) {
        direct += std::polar(1.0 / double(j), double(j) * xi + g_at(j));
        out.sup_partial = std::max(out.sup_partial, std::abs(direct));
    }

    // Abel route over the same range: a(j) = -sum_{k>=j} k^{-1} e^{ik xi}
    // realized as a(1) = log(1 - e^{i xi}), a(j+1) = a(j) + j^{-1} e^{ij xi};
    // b(j) = e^{i g(j)} with b(0) := b(1).
    cdouble a = std::log(cdouble(1.0, 0.0) - std::polar(1.0, xi));
    cdouble b_prev = std::polar(1.0, g_at(1));
    cdouble boundary_low = a * b_prev;  // a(1) b(0)
    cdouble correction(0.0, 0.0);
    for (std::size_t j = 1; j <= n_max; ++j) {
        const cdouble b = std::polar(1.0, g_at(j));
        correction += a * (b - b_prev);
        a += std::polar(1.0 / double(j), double(j) * xi);  // a(j+1)
        b_prev = b;
    }
    const cdouble sbp = a * b_prev - boundary_low - correction;
    out.sbp_discrepancy = std::abs(direct - sbp);
    return out;
}

AbelFit abel_fit(std::span<const double> xis, std::span<const double> sups) {
    if (xis.size() != sups.size() || xis.size() < 2)
        throw std::invalid_argument("abel_fit: need matching arrays with >= 2 points");
    const std::size_t m = xis.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(1.0 / xis[i]);
        sx += x;
        sy += sups[i];
        sxx += x * x;
        sxy += x * sups[i];
    }
    const double det = double(m) * sxx - sx * sx;
    AbelFit fit;
    fit.c1 = (double(m) * sxy - sx * sy) / det;
    fit.c2 = (sy * sxx - sx * sxy) / det;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean_y = sy / double(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(1.0 / xis[i]);
        const double pred = fit.c1 * x + fit.c2;
        ss_res += (sups[i] - pred) * (sups[i] - pred);
        ss_tot += (sups[i] - mean_y) * (sups[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

AbelBound abel_log_bound(double xi, std::span<const double> g, std::size_t n_max,
                         std::span<const double> xi_grid) {
    AbelBound out;
    const AbelSup at_xi = abel_sup(xi, g, n_max);
    out.sup_partial = at_xi.sup_partial;
    out.sbp_discrepancy = at_xi.sbp_discrepancy;

    std::vector<double> xis(xi_grid.begin(), xi_grid.end());
    if (xis.empty()) {
        for (int i = 0; i < 12; ++i)
            xis.push_back(1e-3 * std::pow(0.5 / 1e-3, double(i) / 11.0));
    }
    std::vector<double> sups(xis.size());
    for (std::size_t i = 0; i < xis.size(); ++i) sups[i] = abel_sup(xis[i], g, n_max).sup_partial;
    const AbelFit fit = abel_fit(xis, sups);
    out.fitted_c1 = fit.c1;
    out.fitted_c2 = fit.c2;
    out.r_squared = fit.r_squared;
    return out;
}

namespace {

// Golden-section maximization of |A(n, eta)| on [lo, hi].
ResonantAngle refine_peak(const VerblunskySequence& alpha, std::size_t n, double beta, double lo,
                          double hi, std::size_t iters) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [&](double eta) { return std::abs(pruefer_accumulate(alpha, eta, beta, n).a); };
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (std::size_t i = 0; i < iters; ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        }
    }
    ResonantAngle out;
    out.eta = wrap_angle(0.5 * (lo + hi));
    out.abs_a = std::max(f1, f2);
    return out;
}

}  // namespace

std::vector<ResonantAngle> resonant_angles(const VerblunskySequence& alpha, std::size_t n,
                                           std::size_t eta_grid_size,
                                           const ResonanceOptions& opts) {
    if (n < 3) throw std::invalid_argument("resonant_angles: need n >= 3 (log n > 1)");
    if (eta_grid_size < 8) throw std::invalid_argument("resonant_angles: grid too small");
    const double threshold = std::log(double(n)) / opts.larger_divisor;

    const auto samples = pruefer_scan_grid(alpha, n, opts.beta, eta_grid_size, opts.threads);
    const double h = two_pi / double(eta_grid_size);

    std::vector<ResonantAngle> candidates;
    for (std::size_t i = 0; i < eta_grid_size; ++i) {
        const double cur = std::abs(samples[i].a);
        if (cur < threshold) continue;
        const double prev = std::abs(samples[(i + eta_grid_size - 1) % eta_grid_size].a);
        const double next = std::abs(samples[(i + 1) % eta_grid_size].a);
        if (cur >= prev && cur > next) {
            const double eta = h * double(i);
            candidates.push_back(
                refine_peak(alpha, n, opts.beta, eta - h, eta + h, opts.refine_iters));
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const ResonantAngle& x, const ResonantAngle& y) { return x.abs_a > y.abs_a; });

    // refinement may have moved a candidate below the threshold bar
    std::erase_if(candidates, [&](const ResonantAngle& c) { return c.abs_a < threshold; });

    // greedy thinning: accept in decreasing |A| order; with K accepted, every
    // pair must satisfy distance >= n^{-1/(scale K^2)}
    std::vector<ResonantAngle> accepted;
    for (const auto& cand : candidates) {
        const double k_new = double(accepted.size() + 1);
        const double d_min =
            std::pow(double(n), -1.0 / (opts.separation_power_scale * k_new * k_new));
        bool ok = true;
        for (const auto& a : accepted)
            if (circle_distance(a.eta, cand.eta) < d_min) {
                ok = false;
                break;
            }
        if (ok && accepted.size() >= 2) {
            for (std::size_t x = 0; x < accepted.size() && ok; ++x)
                for (std::size_t y = x + 1; y < accepted.size(); ++y)
                    if (circle_distance(accepted[x].eta, accepted[y].eta) < d_min) {
                        ok = false;
                        break;
                    }
        }
        if (ok) accepted.push_back(cand);
    }
    return accepted;
}

KmaxReport kmax_check(const VerblunskySequence& alpha, std::size_t n, const KmaxOptions& opts) {
    KmaxReport out;
    std::size_t grid = opts.eta_grid;
    if (grid == 0) grid = std::clamp<std::size_t>(next_pow2(n / 2), 4096, 65536);
    out.angles = resonant_angles(alpha, n, grid, opts.res);
    out.k_found = out.angles.size();
    if (alpha.size() >= 10) out.a_est = estimate_log_constant(alpha).a_est;
    out.bound_392a = 392.0 * out.a_est;

    const AbelBound ab = abel_log_bound(0.1, {}, opts.abel_n_max);
    out.c_fit = std::max(ab.fitted_c1, ab.fitted_c2);
    out.bound_holds = double(out.k_found) <= std::max(out.c_fit, out.bound_392a);
    out.e_n_minus_log_n = harmonic_number(n) - std::log(double(n));
    return out;
}

}  // namespace opuc
