#ifndef OPUC_TYPES_HPP
#define OPUC_TYPES_HPP

#include <string>
#include <vector>

#include "opuc/common.hpp"

namespace opuc {

/// Default relative tolerance for grid quadrature consistency checks.
inline constexpr double quadrature_tol = 1e-8;

/// A finite truncation of a Verblunsky coefficient sequence. Entries beyond
/// the stored range are treated as exactly zero (Bernstein-Szego convention).
class VerblunskySequence {
public:
    VerblunskySequence() = default;
    explicit VerblunskySequence(std::vector<cdouble> values, std::string generator_tag = "");

    std::size_t size() const { return values_.size(); }
    /// alpha_j, zero beyond the stored range.
    cdouble at(std::size_t j) const { return j < values_.size() ? values_[j] : cdouble(0.0, 0.0); }
    const std::vector<cdouble>& values() const { return values_; }
    const std::string& generator_tag() const { return generator_tag_; }

    double max_abs() const;
    double sum_abs() const;

private:
    std::vector<cdouble> values_;
    std::string generator_tag_;
};

/// Arc on the circle given by center and half width; membership is modulo 2*pi.
struct IntervalOnCircle {
    double center = 0.0;
    double half_width = 0.0;

    IntervalOnCircle() = default;
    IntervalOnCircle(double center_, double half_width_);

    double length() const { return 2.0 * half_width; }
    bool contains(double angle) const { return circle_distance(angle, center) <= half_width; }
    /// Same center, triple the width (capped at the full circle).
    IntervalOnCircle tripled() const;
};

struct Atom {
    double angle = 0.0;
    double mass = 0.0;
};

/// Measure on [0, 2*pi): nonnegative density sampled on a uniform grid plus a
/// finite list of atoms. Quadrature over the grid is periodic trapezoid.
class CircleMeasure {
public:
    CircleMeasure() = default;
    CircleMeasure(std::vector<double> density, std::vector<Atom> atoms = {});

    static CircleMeasure uniform(std::size_t grid_size);
    static CircleMeasure pure_atoms(std::vector<Atom> atoms, std::size_t grid_size = 64);

    std::size_t grid_size() const { return density_.size(); }
    const std::vector<double>& density() const { return density_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double total_mass() const { return total_mass_; }
    double grid_angle(std::size_t k) const { return two_pi * double(k) / double(grid_size()); }

private:
    std::vector<double> density_;
    std::vector<Atom> atoms_;
    double total_mass_ = 0.0;
};

/// mu(I) by trapezoid quadrature of the density plus the atoms inside I.
double measure_interval_mass(const CircleMeasure& m, const IntervalOnCircle& I);

/// Prefix-sum view of a measure for repeated interval-mass queries
/// (same quadrature as measure_interval_mass, O(1) per query after O(M) setup).
class CumulativeMeasure {
public:
    explicit CumulativeMeasure(const CircleMeasure& m);
    double interval_mass(const IntervalOnCircle& I) const;

private:
    double prefix_at(double t) const;  // integral of the interpolant over [0, t]
    const CircleMeasure& m_;
    std::vector<double> prefix_;  // per-cell cumulative trapezoid sums
};

/// Moment integral e^{-ik eta} d mu(eta). Rejects |k| > grid_size/4 (aliasing guard).
cdouble measure_moment(const CircleMeasure& m, long k);

/// Coefficient state of the Szego recursion: monic Phi_n, reversed Phi_n*,
/// and the accumulated norm product prod_{j<n} (1 - |alpha_j|^2).
struct MonicPair {
    std::vector<cdouble> phi;       // degree n, leading coefficient exactly 1
    std::vector<cdouble> phi_star;  // reversed complex conjugate of phi
    double log_norm_sq = 0.0;       // log of prod (1 - |alpha_j|^2), tracked in log domain
    std::size_t degree = 0;

    static MonicPair identity();
    double norm_sq() const { return std::exp(log_norm_sq); }
};

/// One Prufer trajectory along a fixed (eta, beta): log radii, continuously
/// lifted phases, and the resonance accumulator partial sums
/// A(j) = sum_{k<j} alpha_k e^{i[(k+1) eta + beta + 2 theta_k]}.
struct PrueferTrajectory {
    double eta = 0.0;
    double beta = 0.0;
    std::vector<double> radii_log;     // length n+1, radii_log[0] = 0
    std::vector<double> phases;        // length n+1, phases[0] = 0, continuous lift
    std::vector<cdouble> accumulator;  // length n+1, accumulator[0] = 0
    std::size_t length = 0;            // n
};

}  // namespace opuc

#endif
