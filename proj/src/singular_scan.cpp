#include "opuc/singular_scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opuc/bernstein_szego.hpp"
#include "opuc/generators.hpp"
#include "opuc/resonance.hpp"

namespace opuc {

double epsilon_energy(const CircleMeasure& m, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("epsilon_energy: need eps in (0, 1)");
    if (!m.atoms().empty()) return std::numeric_limits<double>::infinity();

    const std::size_t M = m.grid_size();
    const double h = two_pi / double(M);
    const auto& rho = m.density();

    // Exact cell-pair integrals of |x-y|^{-eps} per circular offset, treating
    // the density as constant per cell: offset o pairs see distances in
    // ((o-1)h, (o+1)h) with triangular weight. The diagonal (o = 0) uses the
    // analytic self-cell value; offsets whose distance range crosses the
    // antipode fall back to the midpoint rule (kernel is smooth there).
    auto f1 = [eps](double t) { return std::pow(t, 1.0 - eps) / (1.0 - eps); };
    auto f2 = [eps](double t) { return std::pow(t, 2.0 - eps) / (2.0 - eps); };
    std::vector<double> kernel(M / 2 + 1, 0.0);  // cell-pair integral of |x-y|^{-eps}
    kernel[0] = 2.0 * std::pow(h, 2.0 - eps) / ((1.0 - eps) * (2.0 - eps));
    for (std::size_t o = 1; o <= M / 2; ++o) {
        const double a = double(o - 1) * h, b = double(o) * h, c = double(o + 1) * h;
        if (c <= pi) {
            const double rising = f2(b) - f2(a) - a * (f1(b) - f1(a));
            const double falling = c * (f1(c) - f1(b)) - (f2(c) - f2(b));
            kernel[o] = rising + falling;
        } else {
            kernel[o] = h * h * std::pow(std::min(b, two_pi - b), -eps);
        }
    }

    double energy = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            std::size_t o = i > j ? i - j : j - i;
            if (o > M / 2) o = M - o;
            energy += rho[i] * rho[j] * (h * h + kernel[o]);
        }
    }
    return energy;
}

SalemZygmundRecord salem_zygmund_test(const VerblunskySequence& alpha, const CircleMeasure& nu,
                                      double eps,
                                      const std::function<std::size_t(double)>& m_fn) {
    if (!nu.atoms().empty())
        throw std::invalid_argument("salem_zygmund_test: nu has atoms (infinite eps-energy)");
    const double energy = epsilon_energy(nu, eps);

    const std::size_t M = nu.grid_size();
    const double h = two_pi / double(M);
    double integral = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
        const double eta = nu.grid_angle(k);
        const std::size_t stop = std::min(m_fn(eta), alpha.size() == 0 ? std::size_t(0)
                                                                       : alpha.size() - 1);
        const cdouble z = std::polar(1.0, -eta);
        cdouble w(1.0, 0.0);
        cdouble sum(0.0, 0.0);
        for (std::size_t n = 0; n <= stop && n < alpha.size(); ++n) {
            sum += alpha.at(n) * w;
            w *= z;
        }
        integral += nu.density()[k] * std::abs(sum) * h;
    }

    SalemZygmundRecord out;
    out.lhs = integral * integral;
    double weighted = 0.0;
    for (std::size_t n = 0; n < alpha.size(); ++n)
        weighted += std::pow(double(n + 1), 1.0 - eps) * std::norm(alpha.at(n));
    out.rhs = energy * weighted;
    out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
    return out;
}

std::vector<double> local_scaling_exponent(const CircleMeasure& m, double k,
                                           std::span<const double> deltas) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0))
            throw std::invalid_argument("local_scaling_exponent: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("local_scaling_exponent: deltas must be decreasing");
    }
    std::vector<double> out(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const IntervalOnCircle I(k, std::min(deltas[i], pi));
        out[i] = measure_interval_mass(m, I) / std::sqrt(2.0 * deltas[i]);
    }
    return out;
}

std::vector<DetectedAtom> detect_atoms(const VerblunskySequence& alpha, std::size_t n,
                                       std::span<const double> candidates, double threshold) {
    if (n < 8) throw std::invalid_argument("detect_atoms: need n >= 8");
    std::vector<DetectedAtom> out(candidates.size());
    const std::size_t cp1 = n / 4, cp2 = n / 2;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const double eta = candidates[c];
        const cdouble z = std::polar(1.0, eta);
        cdouble u(1.0, 0.0), v(1.0, 0.0);
        double scale = 0.0;       // log rescaling of (u, v)
        double log_norm = 0.0;    // log prod (1 - |alpha_j|^2)
        double cd_sum = 0.0;      // sum_{i<=j} |phi_i|^2
        double s1 = 0.0, s2 = 0.0;
        cd_sum += 1.0;  // phi_0 = 1
        for (std::size_t j = 0; j < n; ++j) {
            const cdouble al = alpha.at(j);
            const cdouble zu = z * u;
            const cdouble nu_ = zu - std::conj(al) * v;
            const cdouble nv = v - al * zu;
            u = nu_;
            v = nv;
            log_norm += std::log1p(-std::norm(al));
            if ((j & 31u) == 31u) {
                const double mabs = std::max(std::abs(u), std::abs(v));
                if (mabs > 0.0 && (mabs > 1e100 || mabs < 1e-100)) {
                    scale += std::log(mabs);
                    u /= mabs;
                    v /= mabs;
                }
            }
            const double log_phi_sq = 2.0 * (scale + std::log(std::abs(u))) - log_norm;
            cd_sum += log_phi_sq > 700.0 ? std::numeric_limits<double>::infinity()
                                         : std::exp(log_phi_sq);
            if (j + 1 == cp1) s1 = cd_sum;
            if (j + 1 == cp2) s2 = cd_sum;
        }
        const double r1 = 1.0 / s1, r2 = 1.0 / s2, r3 = 1.0 / cd_sum;
        const double denom = (r3 - r2) - (r2 - r1);
        double mass = denom != 0.0 ? r3 - (r3 - r2) * (r3 - r2) / denom : r3;
        // stabilization guards: the reciprocal differences must be shrinking
        // (a still-linear Christoffel sum has expanding Aitken differences and
        // would masquerade as an atom), and the sums must grow subexponentially
        if (std::fabs(r3 - r2) > std::fabs(r2 - r1)) mass = 0.0;
        if (!(cd_sum <= 8.0 * s2)) mass = 0.0;
        if (!(mass >= threshold)) mass = 0.0;
        if (mass > 1.0) mass = 1.0;
        out[c] = DetectedAtom{wrap_angle(eta), mass};
    }
    // candidates probing the same atom (within the level-n resolution) would
    // double-count its mass: keep the strongest probe per cluster
    const double dedupe_radius = 8.0 * two_pi / double(n);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].mass == 0.0) continue;
        for (std::size_t j = 0; j < out.size(); ++j) {
            if (j == i || out[j].mass == 0.0) continue;
            if (circle_distance(out[i].angle, out[j].angle) < dedupe_radius &&
                (out[j].mass < out[i].mass || (out[j].mass == out[i].mass && j > i)))
                out[j].mass = 0.0;
        }
    }
    return out;
}

namespace {

std::vector<double> density_peaks(const CircleMeasure& m, std::size_t count) {
    const auto& rho = m.density();
    const std::size_t M = rho.size();
    std::vector<std::pair<double, double>> peaks;  // (density, angle)
    for (std::size_t i = 0; i < M; ++i) {
        const double prev = rho[(i + M - 1) % M];
        const double next = rho[(i + 1) % M];
        if (rho[i] >= prev && rho[i] > next) peaks.emplace_back(rho[i], m.grid_angle(i));
    }
    std::sort(peaks.rbegin(), peaks.rend());
    std::vector<double> out;
    for (std::size_t i = 0; i < peaks.size() && i < count; ++i) out.push_back(peaks[i].second);
    return out;
}

// Minimal greedy cover of the given angles by intervals of the given length,
// starting after the largest circular gap.
std::size_t greedy_circular_cover(std::vector<double> angles, double length) {
    if (angles.empty()) return 0;
    if (length >= two_pi) return 1;
    std::sort(angles.begin(), angles.end());
    const std::size_t n = angles.size();
    std::size_t start = 0;
    double max_gap = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double next = angles[(i + 1) % n] + (i + 1 == n ? two_pi : 0.0);
        const double gap = next - angles[i];
        if (gap > max_gap) {
            max_gap = gap;
            start = (i + 1) % n;
        }
    }
    std::size_t covers = 0;
    std::size_t i = 0;
    while (i < n) {
        const double anchor = angles[(start + i) % n] + (start + i >= n ? two_pi : 0.0);
        ++covers;
        while (i < n) {
            const double a = angles[(start + i) % n] + (start + i >= n ? two_pi : 0.0);
            if (a - anchor <= length)
                ++i;
            else
                break;
        }
    }
    return covers;
}

}  // namespace

ScanReport singular_interval_scan(const VerblunskySequence& alpha, double eps0, int m_max,
                                  const ScanOptions& opts) {
    if (!(eps0 > 0.0 && eps0 < 1.0))
        throw std::invalid_argument("singular_interval_scan: need eps0 in (0, 1)");
    if (m_max < 1) throw std::invalid_argument("singular_interval_scan: need m_max >= 1");

    ScanReport report;
    report.eps0 = eps0;
    report.m_max = m_max;
    report.n_budget = opts.n_budget;
    report.proxy_note =
        "singular masses use the Bernstein-Szego approximant at level n_m = ceil(eps_m^-3) "
        "with detected atom masses subtracted; the singular continuous part itself has no "
        "finite representation";

    if (alpha.size() >= 10) report.a_est = estimate_log_constant(alpha).a_est;
    if (opts.kmax_override > 0) {
        report.k_max = opts.kmax_override;
    } else {
        KmaxOptions ko;
        ko.eta_grid = opts.kmax_probe_grid;
        ko.res.threads = opts.threads;
        const std::size_t probe_n = std::min(opts.kmax_probe_n, std::max<std::size_t>(alpha.size(), 8));
        const KmaxReport km = kmax_check(alpha, probe_n, ko);
        report.k_max =
            std::max<std::size_t>(1, std::size_t(std::ceil(std::max(km.bound_392a, km.c_fit))));
    }

    for (int m = 1; m <= m_max; ++m) {
        const double eps_m = std::pow(eps0, m);
        const double n_m_real = std::ceil(std::pow(eps_m, -3.0));
        if (n_m_real > double(opts.n_budget)) {
            report.exhausted_at_scale = m;
            break;
        }
        const std::size_t n_m = std::size_t(n_m_real);
        if (n_m > alpha.size())
            throw std::invalid_argument(
                "singular_interval_scan: stored sequence shorter than level n_m = " +
                std::to_string(n_m) + "; generate a longer family or lower m_max");

        ScaleReport scale;
        scale.m = m;
        scale.eps_m = eps_m;
        scale.n_m = n_m;
        scale.below_n0 = n_m < opts.n0;
        scale.grid = std::max<std::size_t>(8192, next_pow2(8 * n_m));
        scale.singular_threshold = std::sqrt(eps_m);

        const CircleMeasure mu_m = bs_density(alpha, n_m, scale.grid, opts.threads);
        const CumulativeMeasure cum(mu_m);

        const auto candidates = density_peaks(mu_m, opts.atom_candidates);
        auto probes = n_m >= 8 ? detect_atoms(alpha, n_m, candidates, opts.atom_threshold)
                               : std::vector<DetectedAtom>{};
        std::vector<DetectedAtom> detected;
        for (const auto& p : probes)
            if (p.mass > 0.0) detected.push_back(p);

        scale.tile_count = std::size_t(std::ceil(two_pi / eps_m));
        for (std::size_t t = 0; t < scale.tile_count; ++t) {
            const double lo = double(t) * eps_m;
            const double width = std::min(eps_m, two_pi - lo);
            if (width <= 0.0) break;
            const IntervalOnCircle tile(lo + 0.5 * width, 0.5 * width);
            double mass = cum.interval_mass(tile);
            for (const auto& atom : detected)
                if (tile.contains(atom.angle)) mass -= atom.mass;
            if (mass > scale.singular_threshold) {
                SingularTile st;
                st.center = tile.center;
                st.proxy_mass = mass;
                st.mass_3j = cum.interval_mass(tile.tripled());
                scale.singular_tiles.push_back(st);
            }
        }

        // maximal separated family, heaviest tiles first
        scale.separation_threshold =
            3.0 * std::pow(eps_m, 1.0 / double(report.k_max * report.k_max));
        std::vector<std::size_t> order(scale.singular_tiles.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return scale.singular_tiles[x].proxy_mass > scale.singular_tiles[y].proxy_mass;
        });
        std::vector<double> chosen;
        for (std::size_t idx : order) {
            const double c = scale.singular_tiles[idx].center;
            bool ok = true;
            for (double other : chosen)
                if (circle_distance(c, other) < scale.separation_threshold) {
                    ok = false;
                    break;
                }
            if (ok) {
                chosen.push_back(c);
                scale.singular_tiles[idx].in_separated_family = true;
            }
        }
        scale.separated_count = chosen.size();

        scale.cover_length = std::pow(eps_m, 1.0 / double(report.k_max * report.k_max));
        std::vector<double> centers;
        for (const auto& st : scale.singular_tiles) centers.push_back(st.center);
        scale.cover_count = greedy_circular_cover(std::move(centers), scale.cover_length);
        scale.cover_within_budget = scale.cover_count <= 8 * report.k_max;

        if (m == m_max || std::ceil(std::pow(eps0, -3.0 * (m + 1))) > double(opts.n_budget))
            report.atoms = std::move(probes);
        report.scales.push_back(std::move(scale));
    }
    return report;
}

}  // namespace opuc
