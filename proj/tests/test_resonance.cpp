#include <cmath>

#include "doctest.h"
#include "opuc/generators.hpp"
#include "opuc/pruefer.hpp"
#include "opuc/resonance.hpp"

using namespace opuc;

namespace {

WeightedVector unit_basis(std::size_t n, std::size_t k) {
    std::vector<cdouble> v(n, cdouble(0.0, 0.0));
    v[k] = cdouble(1.0 / std::sqrt(double(1 + k)), 0.0);
    return WeightedVector(std::move(v));
}

WeightedVector random_vector(std::uint64_t seed, std::size_t n) {
    std::vector<cdouble> v(n);
    for (std::size_t j = 0; j < n; ++j)
        v[j] = cdouble(uniform01(seed, 2 * j) - 0.5, uniform01(seed, 2 * j + 1) - 0.5);
    return WeightedVector(std::move(v));
}

WeightedVector normalized(WeightedVector v) {
    const double inv = 1.0 / v.norm();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] *= inv;
    return v;
}

}  // namespace

TEST_CASE("weighted inner product and norm") {
    WeightedVector f(std::vector<cdouble>{cdouble(1.0, 0.0), cdouble(0.0, 1.0)});
    WeightedVector g(std::vector<cdouble>{cdouble(0.0, 2.0), cdouble(1.0, 0.0)});
    // <f,g> = conj(1)(2i)(1) + conj(i)(1)(2) = 2i - 2i = 0
    CHECK(std::abs(f.inner(g)) < 1e-15);
    CHECK(f.norm_sq() == doctest::Approx(1.0 + 2.0));
}

TEST_CASE("almost orthogonality: orthonormal family reduces to Bessel") {
    const std::size_t n = 8;
    std::vector<WeightedVector> basis{unit_basis(n, 0), unit_basis(n, 3), unit_basis(n, 5)};
    auto g = random_vector(1, n);
    auto rec = almost_orthogonality_bound(basis, g);
    CHECK(rec.q == 0.0);
    CHECK(rec.bessel_asserted);
    CHECK(rec.lhs <= g.norm_sq() + 1e-12);  // Bessel
    // tight when g lies in the span
    WeightedVector in_span(std::vector<cdouble>(n, cdouble(0.0, 0.0)));
    in_span[0] = cdouble(2.0, 0.0);
    in_span[3] = cdouble(0.0, -1.0) / std::sqrt(4.0);
    auto rec2 = almost_orthogonality_bound(basis, in_span);
    CHECK(rec2.lhs == doctest::Approx(in_span.norm_sq()).epsilon(1e-12));
}

TEST_CASE("almost orthogonality: K = 1 is Cauchy-Schwarz") {
    const std::size_t n = 12;
    std::vector<WeightedVector> one{normalized(random_vector(3, n))};
    auto g = random_vector(4, n);
    auto rec = almost_orthogonality_bound(one, g);
    CHECK(rec.q == 0.0);
    CHECK(rec.lhs <= g.norm_sq() * (1.0 + 1e-12));
}

TEST_CASE("almost orthogonality: randomized near-orthogonal families") {
    const std::size_t n = 24;
    std::size_t q_small_seen = 0;
    for (std::uint64_t trial = 0; trial < 2000; ++trial) {
        // perturbed orthogonal directions keep Q below 1
        std::vector<WeightedVector> fam;
        const std::size_t k_count = 2 + std::size_t(counter_hash(trial, 0) % 3);
        for (std::size_t l = 0; l < k_count; ++l) {
            auto v = unit_basis(n, 2 * l);
            auto noise = random_vector(trial * 31 + l, n);
            const double t = 0.15 * uniform01(trial, 100 + l);
            for (std::size_t j = 0; j < n; ++j) v[j] += t * noise[j];
            fam.push_back(normalized(std::move(v)));
        }
        auto g = random_vector(trial * 7 + 5, n);
        auto rec = almost_orthogonality_bound(fam, g);
        if (!rec.bessel_asserted) continue;
        ++q_small_seen;
        CHECK(rec.lhs <= rec.rhs + 1e-12 * std::max(1.0, rec.rhs));
    }
    CHECK(q_small_seen > 1000);
}

TEST_CASE("unit norm check is enforced") {
    std::vector<WeightedVector> bad{random_vector(9, 6)};
    CHECK_THROWS_AS(almost_orthogonality_bound(bad, random_vector(10, 6)),
                    std::invalid_argument);
}

TEST_CASE("proof vectors: unit norm and the accumulator pairing") {
    auto alpha = coulomb_family(0.3, PhaseRule::random(12), 600);
    const std::size_t n = 512;
    const double en = harmonic_number(n);
    for (double eta : {0.9, 2.2, 5.0}) {
        auto e = resonance_unit_vector(alpha, n, eta);
        CHECK(std::fabs(e.norm() - 1.0) < 1e-10);

        // <g, e> = E_n^{-1/2} conj(A(n, eta)) with g = (alpha_0..alpha_{n-1})
        std::vector<cdouble> g_entries(n);
        for (std::size_t j = 0; j < n; ++j) g_entries[j] = alpha.at(j);
        WeightedVector g(std::move(g_entries));
        const cdouble pairing = g.inner(e);
        const cdouble a_n = pruefer_evolve(alpha, eta, 0.0, n).accumulator[n];
        CHECK(std::abs(pairing - std::conj(a_n) / std::sqrt(en)) < 1e-10);
        CHECK(std::fabs(std::abs(pairing) - std::abs(a_n) / std::sqrt(en)) < 1e-10);
    }
}

TEST_CASE("abel sums: closed-form and alternating oracles") {
    SUBCASE("xi = 0.1, g = 0: sup is near |log(1 - e^{i xi})|") {
        auto r = abel_sup(0.1, {}, 200000);
        const double target = std::abs(std::log(cdouble(1.0, 0.0) - std::polar(1.0, 0.1)));
        CHECK(r.sup_partial >= target * 0.999);  // partial sups dominate the limit here
        CHECK(r.sup_partial <= target * 1.2);
        CHECK(r.sbp_discrepancy < 1e-8);
    }
    SUBCASE("xi = pi: alternating series stays below 2") {
        auto r = abel_sup(pi, {}, 100000);
        CHECK(r.sup_partial <= 2.0);
        CHECK(r.sbp_discrepancy < 1e-8);
    }
}

TEST_CASE("abel fit: affine growth in log(1/xi)") {
    std::vector<double> xis, sups;
    for (int i = 0; i < 10; ++i) {
        xis.push_back(1e-3 * std::pow(300.0, double(i) / 9.0));
        sups.push_back(abel_sup(xis.back(), {}, 60000).sup_partial);
    }
    auto fit = abel_fit(xis, sups);
    CHECK(fit.r_squared > 0.95);
    CHECK(fit.c1 > 0.5);
    CHECK(fit.c1 < 2.0);
}

TEST_CASE("abel bound with prufer phase differences") {
    auto alpha = coulomb_family(0.2, PhaseRule::zero(), 40000);
    const double eta_base = 2.0;
    std::vector<double> xis, sups;
    for (int i = 0; i < 8; ++i) {
        const double xi = 1e-3 * std::pow(400.0, double(i) / 7.0);
        auto t1 = pruefer_evolve(alpha, eta_base, 0.0, 40000);
        auto t2 = pruefer_evolve(alpha, eta_base + xi, 0.0, 40000);
        std::vector<double> g(40000);
        for (std::size_t j = 1; j <= 40000; ++j)
            g[j - 1] = 2.0 * t2.phases[j - 1] - 2.0 * t1.phases[j - 1];
        auto r = abel_sup(xi, g, 40000);
        CHECK(r.sbp_discrepancy < 1e-7);
        xis.push_back(xi);
        sups.push_back(r.sup_partial);
    }
    auto fit = abel_fit(xis, sups);
    CHECK(fit.r_squared > 0.9);
    // slope comparable to the g = 0 slope (phase feedback does not break the law)
    CHECK(fit.c1 < 4.0);
}

TEST_CASE("abel_log_bound aggregates the sup, the fit, and the sbp check") {
    auto rec = abel_log_bound(0.05, {}, 40000);
    CHECK(rec.sup_partial > 0.0);
    CHECK(rec.sbp_discrepancy < 1e-8);
    CHECK(rec.r_squared > 0.95);
    // slope stability: fits over the small-xi and large-xi halves agree to 30%
    std::vector<double> lo_x, lo_s, hi_x, hi_s;
    for (int i = 0; i < 6; ++i) {
        const double xl = 1e-4 * std::pow(10.0, double(i) / 5.0);   // [1e-4, 1e-3]
        const double xh = 1e-2 * std::pow(10.0, double(i) / 5.0);   // [1e-2, 1e-1]
        lo_x.push_back(xl);
        lo_s.push_back(abel_sup(xl, {}, 200000).sup_partial);
        hi_x.push_back(xh);
        hi_s.push_back(abel_sup(xh, {}, 200000).sup_partial);
    }
    const double slope_lo = abel_fit(lo_x, lo_s).c1;
    const double slope_hi = abel_fit(hi_x, hi_s).c1;
    CHECK(std::fabs(slope_lo - slope_hi) <= 0.3 * std::max(slope_lo, slope_hi));
}

TEST_CASE("resonant angles: free case is empty") {
    CHECK(resonant_angles(zero_family(1000), 1000, 1024).empty());
}

TEST_CASE("resonant angles: single-frequency family locks near omega") {
    const double omega = 2.5;
    ResonanceOptions opts;
    opts.threads = 2;

    auto run = [&](std::size_t n) {
        auto alpha = coulomb_family(0.3, PhaseRule::constant(omega), n);
        return resonant_angles(alpha, n, 4096, opts);
    };
    auto found3 = run(1000);
    auto found4 = run(10000);
    REQUIRE(found4.size() == 1);
    CHECK(circle_distance(found4[0].eta, omega) < 0.3);
    // the peak grows with n roughly like c log n
    if (!found3.empty()) CHECK(found4[0].abs_a > found3[0].abs_a);
    CHECK(found4[0].abs_a > std::log(10000.0) / 14.0);

    // peak versus a reference angle far away: ratio grows with n
    auto alpha3 = coulomb_family(0.3, PhaseRule::constant(omega), 1000);
    auto alpha4 = coulomb_family(0.3, PhaseRule::constant(omega), 10000);
    const double off = wrap_angle(omega + pi);
    const double off3 = std::abs(pruefer_accumulate(alpha3, off, 0.0, 1000).a);
    const double off4 = std::abs(pruefer_accumulate(alpha4, off, 0.0, 10000).a);
    const double peak3 = found3.empty() ? 0.0 : found3[0].abs_a;
    CHECK(found4[0].abs_a / std::max(off4, 1e-9) > peak3 / std::max(off3, 1e-9) * 0.9);
}

TEST_CASE("kmax check: free case and harmonic drift") {
    auto rep = kmax_check(zero_family(1000), 1000, {});
    CHECK(rep.k_found == 0);
    CHECK(rep.bound_holds);
    for (std::size_t n : {1000u, 10000u, 100000u, 1000000u}) {
        const double drift = harmonic_number(n) - std::log(double(n));
        CHECK(drift >= 0.5);
        CHECK(drift <= 0.65);
    }
}
