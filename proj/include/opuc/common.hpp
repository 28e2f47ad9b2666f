#ifndef OPUC_COMMON_HPP
#define OPUC_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace opuc {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Thrown when a numerical guard trips (resolution, aliasing, conditioning,
/// scale budget). Input validation failures use std::invalid_argument instead.
class guard_error : public std::runtime_error {
public:
    explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// Normalize an angle to [0, 2*pi).
inline double wrap_angle(double x) {
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;  // fmod can land exactly on two_pi after rounding
    return r;
}

/// Distance between two angles on the circle, in [0, pi].
inline double circle_distance(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return d > pi ? two_pi - d : d;
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Harmonic number H_n = sum_{j=0}^{n-1} 1/(1+j).
inline double harmonic_number(std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += 1.0 / double(1 + j);
    return s;
}

// --- counter-based RNG: reproducible and safe to evaluate from any thread ---

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic value for (seed, counter); no internal state.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(splitmix64(seed) ^ splitmix64(counter * 0xd1342543de82ef95ULL + 1));
}

/// Uniform double in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    return double(counter_hash(seed, counter) >> 11) * 0x1.0p-53;
}

/// Uniform angle in [0, 2*pi).
inline double uniform_angle(std::uint64_t seed, std::uint64_t counter) {
    return uniform01(seed, counter) * two_pi;
}

}  // namespace opuc

#endif
