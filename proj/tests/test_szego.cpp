#include <cmath>

#include "doctest.h"
#include "opuc/bernstein_szego.hpp"
#include "opuc/generators.hpp"
#include "opuc/szego.hpp"

using namespace opuc;

namespace {

VerblunskySequence random_sequence(std::uint64_t seed, std::size_t n, double cap) {
    std::vector<cdouble> v(n);
    for (std::size_t j = 0; j < n; ++j)
        v[j] = std::polar(cap * uniform01(seed, 2 * j), uniform_angle(seed, 2 * j + 1));
    return VerblunskySequence(std::move(v));
}

double coeff_distance(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a[k] - b[k]));
        scale = std::max(scale, std::abs(a[k]));
    }
    return m / scale;
}

}  // namespace

TEST_CASE("szego step: free case and first step") {
    auto p0 = MonicPair::identity();
    auto p1 = szego_step(p0, cdouble(0.0, 0.0));
    CHECK(p1.degree == 1);
    CHECK(p1.phi[0] == cdouble(0.0, 0.0));
    CHECK(p1.phi[1] == cdouble(1.0, 0.0));  // Phi_1 = z
    CHECK(p1.norm_sq() == doctest::Approx(1.0));

    const cdouble a(0.3, -0.4);
    auto q1 = szego_step(p0, a);
    CHECK(q1.phi[0] == -std::conj(a));  // Phi_1 = z - conj(a)
    CHECK(q1.phi[1] == cdouble(1.0, 0.0));
    CHECK(q1.norm_sq() == doctest::Approx(1.0 - std::norm(a)));
    CHECK(q1.phi_star[0] == std::conj(q1.phi[1]));
    CHECK(q1.phi_star[1] == std::conj(q1.phi[0]));

    CHECK_THROWS_AS(szego_step(p0, cdouble(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("constant-term identity and norm product") {
    auto alpha = random_sequence(11, 24, 0.9);
    auto state = MonicPair::identity();
    double log_prod = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        state = szego_step(state, alpha.at(j));
        CHECK(state.phi[0] == -std::conj(alpha.at(j)));  // exact by construction
        CHECK(state.phi.back() == cdouble(1.0, 0.0));
        log_prod += std::log1p(-std::norm(alpha.at(j)));
        CHECK(state.norm_sq() == doctest::Approx(std::exp(log_prod)).epsilon(1e-12));
    }
}

TEST_CASE("star symmetry on the circle") {
    auto alpha = random_sequence(7, 16, 0.8);
    auto state = szego_run(alpha, 16);
    std::vector<double> etas;
    for (int i = 0; i < 24; ++i) etas.push_back(uniform_angle(100, i));
    auto phi_vals = evaluate_on_circle(state, etas);
    MonicPair star_view = state;
    std::swap(star_view.phi, star_view.phi_star);
    auto star_vals = evaluate_on_circle(star_view, etas);
    for (std::size_t i = 0; i < etas.size(); ++i) {
        const cdouble expected =
            std::polar(1.0, double(state.degree) * etas[i]) * std::conj(phi_vals[i]);
        CHECK(std::abs(star_vals[i] - expected) < 1e-12);
    }
}

TEST_CASE("fast transfer-matrix product matches stepping") {
    SUBCASE("random moderate coefficients") {
        auto alpha = random_sequence(21, 300, 0.5);
        auto slow = szego_run(alpha, 300);
        auto fast = szego_run_fast(alpha, 300);
        CHECK(coeff_distance(slow.phi, fast.phi) < 1e-12);
        CHECK(coeff_distance(slow.phi_star, fast.phi_star) < 1e-12);
        CHECK(slow.log_norm_sq == doctest::Approx(fast.log_norm_sq).epsilon(1e-12));
    }
    SUBCASE("coulomb family, larger degree") {
        auto alpha = coulomb_family(0.3, PhaseRule::constant(1.1), 3000);
        auto slow = szego_run(alpha, 3000);
        auto fast = szego_run_fast(alpha, 3000);
        CHECK(coeff_distance(slow.phi, fast.phi) < 1e-10);
    }
}

TEST_CASE("grid evaluation matches Horner") {
    auto alpha = random_sequence(31, 64, 0.6);
    auto state = szego_run(alpha, 64);
    auto grid_vals = evaluate_on_grid(state, 512);
    std::vector<double> etas(512);
    for (std::size_t k = 0; k < 512; ++k) etas[k] = two_pi * double(k) / 512.0;
    auto direct = evaluate_on_circle(state, etas);
    for (std::size_t k = 0; k < 512; ++k) CHECK(std::abs(grid_vals[k] - direct[k]) < 1e-10);
}

TEST_CASE("pointwise recursion evaluation matches Horner") {
    auto alpha = random_sequence(41, 24, 0.8);
    auto state = szego_run(alpha, 24);
    for (int i = 0; i < 16; ++i) {
        const double eta = uniform_angle(200, i);
        const auto cv = evaluate_recursive(alpha, eta, 0.0, 24);
        const auto direct = evaluate_on_circle(state, std::vector<double>{eta})[0];
        CHECK(cv.log_abs == doctest::Approx(std::log(std::abs(direct))).epsilon(1e-11));
        CHECK(std::abs(cv.unit - direct / std::abs(direct)) < 1e-10);
    }
}

TEST_CASE("evaluate: monomial case has modulus one") {
    auto alpha = zero_family(12);
    auto state = szego_run(alpha, 12);
    for (int i = 0; i < 8; ++i) {
        const double eta = uniform_angle(300, i);
        const auto v = evaluate_on_circle(state, std::vector<double>{eta})[0];
        CHECK(std::abs(v - std::polar(1.0, 12.0 * eta)) < 1e-12);
    }
}

TEST_CASE("orthonormal values divide out the norm product") {
    auto alpha = random_sequence(51, 10, 0.7);
    auto state = szego_run(alpha, 10);
    std::vector<double> etas{0.4, 2.2};
    auto monic = evaluate_on_circle(state, etas);
    auto ortho = evaluate_orthonormal_on_circle(state, etas);
    for (std::size_t i = 0; i < etas.size(); ++i)
        CHECK(std::abs(ortho[i] * std::sqrt(state.norm_sq()) - monic[i]) < 1e-12);
}

TEST_CASE("verblunsky_from_measure: uniform gives zero coefficients") {
    auto rec = verblunsky_from_measure(CircleMeasure::uniform(256), 8);
    CHECK(rec.size() == 8);
    for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(rec.at(j)) < 1e-12);
}

TEST_CASE("verblunsky_from_measure: concentrated measure trips the guard") {
    auto m = CircleMeasure::pure_atoms({{0.5, 0.4}, {2.0, 0.3}, {4.0, 0.3}}, 256);
    CHECK_THROWS_AS(verblunsky_from_measure(m, 5), guard_error);
}

TEST_CASE("round trip: single coefficient") {
    VerblunskySequence alpha({cdouble(0.5, 0.0)});
    std::vector<cdouble> padded(alpha.values());
    padded.resize(8, cdouble(0.0, 0.0));
    auto m = bs_density(VerblunskySequence(padded), 8, 1024);
    auto rec = verblunsky_from_measure(m, 8);
    CHECK(std::abs(rec.at(0) - cdouble(0.5, 0.0)) < 1e-8);
    for (std::size_t j = 1; j < 8; ++j) CHECK(std::abs(rec.at(j)) < 1e-8);
}

TEST_CASE("round trip: random sequences at level 16") {
    // grid chosen so the level-16 density spikes stay quadrature-resolved
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto alpha = random_sequence(seed, 16, 0.6);
        auto m = bs_density(alpha, 16, 1 << 17, 2);
        auto rec = verblunsky_from_measure(m, 16);
        double err = 0.0;
        for (std::size_t j = 0; j < 16; ++j) err = std::max(err, std::abs(rec.at(j) - alpha.at(j)));
        CHECK(err < 1e-6);
    }
}

TEST_CASE("recursion agrees with the Gram-Schmidt oracle at degree 32") {
    // caps above ~0.5 put polynomial zeros exponentially close to the circle;
    // the grid measure then misses Lorentzian density spikes and no affordable
    // grid recovers the moments, so the oracle runs where quadrature converges
    auto alpha = random_sequence(77, 32, 0.45);
    auto direct = szego_run(alpha, 32);
    // oracle: orthogonalize in L^2 of the level-32 Bernstein-Szego measure
    auto m = bs_density(alpha, 32, 1 << 19, 2);
    auto rec = verblunsky_from_measure(m, 32);
    auto oracle = szego_run(rec, 32);
    CHECK(coeff_distance(direct.phi, oracle.phi) < 1e-8);
}
