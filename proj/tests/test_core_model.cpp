#include <cmath>

#include "doctest.h"
#include "opuc/types.hpp"

using namespace opuc;

TEST_CASE("verblunsky sequence validates the open disk") {
    CHECK_THROWS_AS(VerblunskySequence({cdouble(1.0, 0.0)}), std::invalid_argument);
    CHECK_THROWS_AS(VerblunskySequence({cdouble(0.8, 0.8)}), std::invalid_argument);
    VerblunskySequence s({cdouble(0.5, 0.0), cdouble(0.0, -0.9)});
    CHECK(s.size() == 2);
    CHECK(s.at(5) == cdouble(0.0, 0.0));  // zero beyond the stored range
}

TEST_CASE("interval membership is modulo 2 pi") {
    IntervalOnCircle I(0.05, 0.2);
    CHECK(I.contains(0.1));
    CHECK(I.contains(two_pi - 0.1));  // wraps across 0
    CHECK(!I.contains(1.0));
    IntervalOnCircle J = I.tripled();
    CHECK(J.half_width == doctest::Approx(0.6));
    CHECK(J.center == doctest::Approx(0.05));
    CHECK_THROWS_AS(IntervalOnCircle(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("interval mass: uniform and atoms") {
    const auto uni = CircleMeasure::uniform(256);
    CHECK(uni.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    // width pi of the uniform measure carries half the mass
    CHECK(measure_interval_mass(uni, IntervalOnCircle(1.3, pi / 2.0)) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // full circle
    CHECK(measure_interval_mass(uni, IntervalOnCircle(0.0, pi)) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const auto atom = CircleMeasure::pure_atoms({{0.0, 1.0}});
    CHECK(measure_interval_mass(atom, IntervalOnCircle(0.0, 0.1)) == doctest::Approx(1.0));
    CHECK(measure_interval_mass(atom, IntervalOnCircle(pi, 0.1)) == doctest::Approx(0.0));
}

TEST_CASE("interval mass: Poisson kernel density integrates to one") {
    const double a = 0.5;
    const std::size_t M = 512;
    std::vector<double> rho(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double eta = two_pi * double(k) / double(M);
        rho[k] = (1.0 - a * a) / (two_pi * std::norm(std::polar(1.0, eta) - cdouble(a, 0.0)));
    }
    CircleMeasure m(rho);
    CHECK(measure_interval_mass(m, IntervalOnCircle(0.0, pi)) ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("moments: normalization, orthogonality, atoms, aliasing guard") {
    const auto uni = CircleMeasure::uniform(128);
    CHECK(std::abs(measure_moment(uni, 0) - cdouble(1.0, 0.0)) < 1e-13);
    CHECK(std::abs(measure_moment(uni, 3)) < 1e-13);

    const auto atom = CircleMeasure::pure_atoms({{pi, 1.0}}, 128);
    CHECK(std::abs(measure_moment(atom, 1) - cdouble(-1.0, 0.0)) < 1e-12);

    CHECK_THROWS_AS(measure_moment(uni, 33), guard_error);
    CHECK_NOTHROW(measure_moment(uni, 32));
}

TEST_CASE("moment conjugation for real densities") {
    const std::size_t M = 256;
    std::vector<double> rho(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double eta = two_pi * double(k) / double(M);
        rho[k] = (1.0 + 0.4 * std::cos(eta) + 0.2 * std::sin(2 * eta)) / two_pi;
    }
    CircleMeasure m(rho);
    for (long k = 1; k <= 8; ++k)
        CHECK(std::abs(measure_moment(m, -k) - std::conj(measure_moment(m, k))) < 1e-13);
}

TEST_CASE("quadrature refinement is second order on smooth densities") {
    auto make = [](std::size_t M) {
        std::vector<double> rho(M);
        const double i0 = 1.2660658777520083356;  // Bessel I_0(1)
        for (std::size_t k = 0; k < M; ++k) {
            const double eta = two_pi * double(k) / double(M);
            rho[k] = std::exp(std::cos(eta)) / (two_pi * i0);
        }
        return CircleMeasure(rho);
    };
    const IntervalOnCircle I(1.0, 0.7);
    const double ref = measure_interval_mass(make(8192), I);
    const double e128 = std::fabs(measure_interval_mass(make(128), I) - ref);
    const double e256 = std::fabs(measure_interval_mass(make(256), I) - ref);
    CHECK(e256 < 1e-4);
    CHECK(e128 > 2.0 * e256);  // at least ~O(M^-2) decay
}

TEST_CASE("cumulative view agrees with direct interval mass") {
    std::vector<double> rho(200);
    for (std::size_t k = 0; k < rho.size(); ++k)
        rho[k] = (1.0 + 0.8 * std::sin(two_pi * double(k) / 200.0)) / two_pi;
    CircleMeasure m(rho, {{2.5, 0.25}});
    CumulativeMeasure cum(m);
    for (double c : {0.0, 1.0, 2.49, 5.9}) {
        for (double w : {0.05, 0.8, 2.0, pi}) {
            const IntervalOnCircle I(c, w);
            CHECK(cum.interval_mass(I) ==
                  doctest::Approx(measure_interval_mass(m, I)).epsilon(1e-12));
        }
    }
}

TEST_CASE("circle measure validation") {
    CHECK_THROWS_AS(CircleMeasure(std::vector<double>{1.0, -0.1, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(CircleMeasure(std::vector<double>(8, 0.0), {{1.0, 0.5}, {1.0, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CircleMeasure(std::vector<double>(8, 0.0), {{1.0, 0.0}}),
                    std::invalid_argument);
}
