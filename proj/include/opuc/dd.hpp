#ifndef OPUC_DD_HPP
#define OPUC_DD_HPP

// Compensated (double-double) arithmetic for the trajectory recursions.
// Radius drawdowns amplify roundoff by exp(drawdown); carrying the recursion
// state in ~32 significant digits keeps the amplified noise far below the
// double-precision readouts.

#include <cmath>

#include "opuc/common.hpp"

namespace opuc::dd {

struct Dd {
    double hi = 0.0, lo = 0.0;
};

inline Dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline Dd renorm(double hi, double lo) {
    const double s = hi + lo;
    return {s, lo - (s - hi)};
}

inline Dd add(Dd a, Dd b) {
    Dd s = two_sum(a.hi, b.hi);
    return renorm(s.hi, s.lo + a.lo + b.lo);
}

inline Dd neg(Dd a) { return {-a.hi, -a.lo}; }
inline Dd sub(Dd a, Dd b) { return add(a, neg(b)); }

inline Dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Dd mul(Dd a, Dd b) {
    Dd p = two_prod(a.hi, b.hi);
    return renorm(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline Dd mul_d(Dd a, double b) {
    Dd p = two_prod(a.hi, b);
    return renorm(p.hi, p.lo + a.lo * b);
}

inline Dd div(Dd a, Dd b) {
    const double q0 = a.hi / b.hi;
    Dd r = sub(a, mul_d(b, q0));
    const double q1 = r.hi / b.hi;
    r = sub(r, mul_d(b, q1));
    const double q2 = r.hi / b.hi;
    Dd q = renorm(q0, q1);
    return add(q, {q2, 0.0});
}

struct Ddc {
    Dd re, im;
};

inline Ddc cmul(const Ddc& a, const Ddc& b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)), add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline Ddc cmul_d(const cdouble& a, const Ddc& b) {
    return {sub(mul_d(b.re, a.real()), mul_d(b.im, a.imag())),
            add(mul_d(b.im, a.real()), mul_d(b.re, a.imag()))};
}

inline Ddc csub(const Ddc& a, const Ddc& b) { return {sub(a.re, b.re), sub(a.im, b.im)}; }

inline Ddc conj(const Ddc& a) { return {a.re, neg(a.im)}; }

inline Dd cnorm(const Ddc& a) { return add(mul(a.re, a.re), mul(a.im, a.im)); }

inline double cabs_hi(const Ddc& a) { return std::hypot(a.re.hi, a.im.hi); }

/// e^{i angle} with the angle taken as an exact double-double value.
/// Exact 2^-16 argument reduction, a short Taylor series, then 16 squarings;
/// good to ~1e-31 for |angle| up to a few hundred.
inline Ddc unit_phase(Dd angle) {
    const Dd x{std::ldexp(angle.hi, -16), std::ldexp(angle.lo, -16)};
    const Dd x2 = mul(x, x);
    // c = 1 - x^2/2 + x^4/24 - x^6/720, s = x - x^3/6 + x^5/120 - x^7/5040
    Dd c{1.0, 0.0};
    c = sub(c, mul_d(x2, 0.5));
    const Dd x4 = mul(x2, x2);
    c = add(c, mul_d(x4, 1.0 / 24.0));
    c = sub(c, mul_d(mul(x4, x2), 1.0 / 720.0));
    Dd s = x;
    s = sub(s, mul_d(mul(x2, x), 1.0 / 6.0));
    s = add(s, mul_d(mul(x4, x), 1.0 / 120.0));
    s = sub(s, mul_d(mul(mul(x4, x2), x), 1.0 / 5040.0));
    Ddc z{c, s};
    for (int i = 0; i < 16; ++i) z = cmul(z, z);
    return z;
}

inline Ddc unit_phase(double angle) { return unit_phase(Dd{angle, 0.0}); }

}  // namespace opuc::dd

#endif
