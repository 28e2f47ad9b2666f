#include "opuc/types.hpp"

#include <algorithm>
#include <cmath>

namespace opuc {

VerblunskySequence::VerblunskySequence(std::vector<cdouble> values, std::string generator_tag)
    : values_(std::move(values)), generator_tag_(std::move(generator_tag)) {
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!(std::abs(values_[j]) < 1.0))
            throw std::invalid_argument("VerblunskySequence: |alpha_" + std::to_string(j) +
                                        "| must be < 1");
    }
}

double VerblunskySequence::max_abs() const {
    double m = 0.0;
    for (const auto& a : values_) m = std::max(m, std::abs(a));
    return m;
}

double VerblunskySequence::sum_abs() const {
    double s = 0.0;
    for (const auto& a : values_) s += std::abs(a);
    return s;
}

IntervalOnCircle::IntervalOnCircle(double center_, double half_width_)
    : center(wrap_angle(center_)), half_width(half_width_) {
    if (!(half_width_ > 0.0) || half_width_ > pi)
        throw std::invalid_argument("IntervalOnCircle: half_width must be in (0, pi]");
}

IntervalOnCircle IntervalOnCircle::tripled() const {
    return IntervalOnCircle(center, std::min(3.0 * half_width, pi));
}

CircleMeasure::CircleMeasure(std::vector<double> density, std::vector<Atom> atoms)
    : density_(std::move(density)), atoms_(std::move(atoms)) {
    if (density_.empty()) throw std::invalid_argument("CircleMeasure: empty density grid");
    for (double v : density_)
        if (!(v >= 0.0)) throw std::invalid_argument("CircleMeasure: density must be nonnegative");
    for (auto& a : atoms_) {
        if (!(a.mass > 0.0)) throw std::invalid_argument("CircleMeasure: atom mass must be > 0");
        a.angle = wrap_angle(a.angle);
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& x, const Atom& y) { return x.angle < y.angle; });
    for (std::size_t i = 1; i < atoms_.size(); ++i)
        if (atoms_[i].angle == atoms_[i - 1].angle)
            throw std::invalid_argument("CircleMeasure: atom angles must be pairwise distinct");
    const double h = two_pi / double(density_.size());
    double s = 0.0;
    for (double v : density_) s += v;
    total_mass_ = h * s;
    for (const auto& a : atoms_) total_mass_ += a.mass;
}

CircleMeasure CircleMeasure::uniform(std::size_t grid_size) {
    return CircleMeasure(std::vector<double>(grid_size, 1.0 / two_pi));
}

CircleMeasure CircleMeasure::pure_atoms(std::vector<Atom> atoms, std::size_t grid_size) {
    return CircleMeasure(std::vector<double>(grid_size, 0.0), std::move(atoms));
}

namespace {

// Integral of the periodic piecewise-linear density interpolant over [0, t],
// t in [0, 2*pi]. Trapezoid cell sums plus a linear partial cell.
double density_prefix_integral(const std::vector<double>& rho, double t) {
    const std::size_t m = rho.size();
    const double h = two_pi / double(m);
    double cells = std::floor(t / h);
    if (cells > double(m)) cells = double(m);
    std::size_t full = std::size_t(cells);
    if (full > m) full = m;
    double sum = 0.0;
    for (std::size_t k = 0; k < full; ++k) {
        const double a = rho[k];
        const double b = rho[(k + 1) % m];
        sum += 0.5 * (a + b) * h;
    }
    const double s = t - double(full) * h;
    if (s > 0.0 && full < m) {
        const double a = rho[full];
        const double b = rho[(full + 1) % m];
        sum += a * s + (b - a) * s * s / (2.0 * h);
    }
    return sum;
}

}  // namespace

double measure_interval_mass(const CircleMeasure& m, const IntervalOnCircle& I) {
    const double lo = wrap_angle(I.center - I.half_width);
    const double width = std::min(I.length(), two_pi);

    double mass;
    const double hi = lo + width;
    if (hi <= two_pi) {
        mass = density_prefix_integral(m.density(), hi) - density_prefix_integral(m.density(), lo);
    } else {
        mass = density_prefix_integral(m.density(), two_pi) -
               density_prefix_integral(m.density(), lo) +
               density_prefix_integral(m.density(), hi - two_pi);
    }
    for (const auto& a : m.atoms())
        if (I.contains(a.angle)) mass += a.mass;

    if (mass < 0.0) mass = 0.0;
    if (mass > m.total_mass()) mass = m.total_mass();
    return mass;
}

cdouble measure_moment(const CircleMeasure& m, long k) {
    const long guard = long(m.grid_size() / 4);
    if (std::labs(k) > guard)
        throw guard_error("measure_moment: |k| = " + std::to_string(std::labs(k)) +
                          " exceeds the anti-aliasing guard grid_size/4 = " + std::to_string(guard));
    const std::size_t M = m.grid_size();
    const double h = two_pi / double(M);
    cdouble sum(0.0, 0.0);
    if (k == 0) {
        for (double v : m.density()) sum += v;
        sum *= h;
    } else {
        const cdouble step = std::polar(1.0, -double(k) * h);
        cdouble w(1.0, 0.0);
        for (std::size_t j = 0; j < M; ++j) {
            sum += m.density()[j] * w;
            w *= step;
        }
        sum *= h;
    }
    for (const auto& a : m.atoms()) sum += a.mass * std::polar(1.0, -double(k) * a.angle);
    return sum;
}

CumulativeMeasure::CumulativeMeasure(const CircleMeasure& m) : m_(m) {
    const std::size_t M = m.grid_size();
    const double h = two_pi / double(M);
    prefix_.assign(M + 1, 0.0);
    for (std::size_t k = 0; k < M; ++k)
        prefix_[k + 1] = prefix_[k] + 0.5 * (m.density()[k] + m.density()[(k + 1) % M]) * h;
}

double CumulativeMeasure::prefix_at(double t) const {
    const std::size_t M = m_.grid_size();
    const double h = two_pi / double(M);
    double cells = std::floor(t / h);
    if (cells > double(M)) cells = double(M);
    std::size_t full = std::size_t(cells);
    if (full > M) full = M;
    double sum = prefix_[full];
    const double s = t - double(full) * h;
    if (s > 0.0 && full < M) {
        const double a = m_.density()[full];
        const double b = m_.density()[(full + 1) % M];
        sum += a * s + (b - a) * s * s / (2.0 * h);
    }
    return sum;
}

double CumulativeMeasure::interval_mass(const IntervalOnCircle& I) const {
    const double lo = wrap_angle(I.center - I.half_width);
    const double width = std::min(I.length(), two_pi);
    const double hi = lo + width;
    double mass;
    if (hi <= two_pi)
        mass = prefix_at(hi) - prefix_at(lo);
    else
        mass = prefix_at(two_pi) - prefix_at(lo) + prefix_at(hi - two_pi);
    for (const auto& a : m_.atoms())
        if (I.contains(a.angle)) mass += a.mass;
    if (mass < 0.0) mass = 0.0;
    if (mass > m_.total_mass()) mass = m_.total_mass();
    return mass;
}

MonicPair MonicPair::identity() {
    MonicPair p;
    p.phi = {cdouble(1.0, 0.0)};
    p.phi_star = {cdouble(1.0, 0.0)};
    p.log_norm_sq = 0.0;
    p.degree = 0;
    return p;
}

}  // namespace opuc
