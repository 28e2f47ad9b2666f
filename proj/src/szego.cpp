#include "opuc/szego.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opuc/dd.hpp"
#include "opuc/fft.hpp"

namespace opuc {

namespace {

void check_in_disk(cdouble alpha) {
    if (!(std::abs(alpha) < 1.0))
        throw std::invalid_argument("szego: |alpha| must be < 1, got " +
                                    std::to_string(std::abs(alpha)));
}

std::vector<cdouble> reversed_conjugate(const std::vector<cdouble>& c) {
    std::vector<cdouble> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = std::conj(c[c.size() - 1 - k]);
    return out;
}

}  // namespace

MonicPair szego_step(const MonicPair& state, cdouble alpha_n) {
    check_in_disk(alpha_n);
    const std::size_t n = state.degree;
    MonicPair next;
    next.degree = n + 1;
    next.phi.assign(n + 2, cdouble(0.0, 0.0));
    const cdouble ca = std::conj(alpha_n);
    for (std::size_t k = 0; k <= n; ++k) {
        next.phi[k + 1] += state.phi[k];       // z * Phi_n
        next.phi[k] -= ca * state.phi_star[k];  // - conj(alpha_n) Phi_n*
    }
    next.phi[n + 1] = cdouble(1.0, 0.0);  // monic by construction
    next.phi_star = reversed_conjugate(next.phi);
    next.log_norm_sq = state.log_norm_sq + std::log1p(-std::norm(alpha_n));
    return next;
}

MonicPair szego_run(const VerblunskySequence& alpha, std::size_t n) {
    MonicPair state = MonicPair::identity();
    for (std::size_t j = 0; j < n; ++j) state = szego_step(state, alpha.at(j));
    return state;
}

namespace {

// 2x2 matrix of polynomials; the product T_{hi-1} ... T_{lo} of one-step
// transfer matrices T_j(z) = [[z, -conj(alpha_j)], [-alpha_j z, 1]].
// Applying the product to [1; 1] gives [Phi; Phi*].
struct TransferBlock {
    std::vector<cdouble> a, b, c, d;  // each stored with length = steps + 1
};

TransferBlock transfer_leaf(const VerblunskySequence& alpha, std::size_t lo, std::size_t hi) {
    const std::size_t s = hi - lo;
    TransferBlock m;
    m.a.assign(s + 1, cdouble(0.0, 0.0));
    m.b.assign(s + 1, cdouble(0.0, 0.0));
    m.c.assign(s + 1, cdouble(0.0, 0.0));
    m.d.assign(s + 1, cdouble(0.0, 0.0));
    m.a[0] = cdouble(1.0, 0.0);
    m.d[0] = cdouble(1.0, 0.0);
    // multiply by T_j on the left, one step at a time
    std::vector<cdouble> za(s + 1), zb(s + 1);
    for (std::size_t j = lo; j < hi; ++j) {
        const cdouble al = alpha.at(j);
        check_in_disk(al);
        const cdouble ca = std::conj(al);
        const std::size_t deg = j - lo + 1;
        std::fill(za.begin(), za.end(), cdouble(0.0, 0.0));
        std::fill(zb.begin(), zb.end(), cdouble(0.0, 0.0));
        for (std::size_t k = 0; k < deg; ++k) {
            za[k + 1] = m.a[k];
            zb[k + 1] = m.b[k];
        }
        for (std::size_t k = 0; k <= deg; ++k) {
            const cdouble na = za[k] - ca * m.c[k];
            const cdouble nb = zb[k] - ca * m.d[k];
            const cdouble nc = m.c[k] - al * za[k];
            const cdouble nd = m.d[k] - al * zb[k];
            m.a[k] = na;
            m.b[k] = nb;
            m.c[k] = nc;
            m.d[k] = nd;
        }
    }
    return m;
}

void check_block_scale(const TransferBlock& m) {
    double mx = 0.0;
    for (const auto* v : {&m.a, &m.b, &m.c, &m.d})
        for (const auto& x : *v) mx = std::max(mx, std::abs(x));
    if (!(mx < 1e120))
        throw guard_error("szego_run_fast: transfer-matrix coefficients exceed 1e120; "
                          "sequence too far from the decaying class for the fast path");
}

TransferBlock transfer_merge(const TransferBlock& m2, const TransferBlock& m1) {
    // result = m2 * m1; share the forward transforms across the 8 products
    const std::size_t out_len = m1.a.size() + m2.a.size() - 1;
    const std::size_t n = next_pow2(out_len);
    auto load = [n](const std::vector<cdouble>& src) {
        std::vector<cdouble> buf(n, cdouble(0.0, 0.0));
        std::copy(src.begin(), src.end(), buf.begin());
        fft::transform(buf, false);
        return buf;
    };
    std::vector<cdouble> a1 = load(m1.a), b1 = load(m1.b), c1 = load(m1.c), d1 = load(m1.d);
    std::vector<cdouble> a2 = load(m2.a), b2 = load(m2.b), c2 = load(m2.c), d2 = load(m2.d);
    TransferBlock out;
    auto combine = [&](const std::vector<cdouble>& x1, const std::vector<cdouble>& y1,
                       const std::vector<cdouble>& x2, const std::vector<cdouble>& y2) {
        std::vector<cdouble> buf(n);
        for (std::size_t i = 0; i < n; ++i) buf[i] = x2[i] * x1[i] + y2[i] * y1[i];
        fft::transform(buf, true);
        buf.resize(out_len);
        return buf;
    };
    out.a = combine(a1, c1, a2, b2);
    out.b = combine(b1, d1, a2, b2);
    out.c = combine(a1, c1, c2, d2);
    out.d = combine(b1, d1, c2, d2);
    check_block_scale(out);
    return out;
}

TransferBlock transfer_product(const VerblunskySequence& alpha, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 64) return transfer_leaf(alpha, lo, hi);
    const std::size_t mid = lo + (hi - lo) / 2;
    TransferBlock left = transfer_product(alpha, lo, mid);
    TransferBlock right = transfer_product(alpha, mid, hi);
    return transfer_merge(right, left);
}

}  // namespace

MonicPair szego_run_fast(const VerblunskySequence& alpha, std::size_t n) {
    if (n <= 128) return szego_run(alpha, n);
    TransferBlock m = transfer_product(alpha, 0, n);
    MonicPair out;
    out.degree = n;
    out.phi.assign(n + 1, cdouble(0.0, 0.0));
    for (std::size_t k = 0; k <= n; ++k) out.phi[k] = m.a[k] + m.b[k];
    out.phi[n] = cdouble(1.0, 0.0);  // exact in exact arithmetic; snap FFT roundoff
    out.phi_star = reversed_conjugate(out.phi);
    double ls = 0.0;
    for (std::size_t j = 0; j < n; ++j) ls += std::log1p(-std::norm(alpha.at(j)));
    out.log_norm_sq = ls;
    return out;
}

std::vector<cdouble> evaluate_on_circle(const MonicPair& state, std::span<const double> etas) {
    std::vector<cdouble> out(etas.size());
    for (std::size_t i = 0; i < etas.size(); ++i) {
        const cdouble z = std::polar(1.0, etas[i]);
        cdouble acc(0.0, 0.0);
        for (std::size_t k = state.phi.size(); k-- > 0;) acc = acc * z + state.phi[k];
        out[i] = acc;
    }
    return out;
}

std::vector<cdouble> evaluate_orthonormal_on_circle(const MonicPair& state,
                                                    std::span<const double> etas) {
    auto out = evaluate_on_circle(state, etas);
    const double inv_norm = std::exp(-0.5 * state.log_norm_sq);
    for (auto& v : out) v *= inv_norm;
    return out;
}

std::vector<cdouble> evaluate_on_grid(const MonicPair& state, std::size_t M) {
    return fft::evaluate_on_pow2_grid(state.phi, M);
}

CircleValue evaluate_recursive(const VerblunskySequence& alpha, double eta, double beta,
                               std::size_t n) {
    // The cartesian update u' = z u - conj(a) v cancels heavily when the
    // radius dips, amplifying roundoff by exp(drawdown); the state runs in
    // double-double with refined rotation constants to keep that in check.
    using dd::Ddc;
    const Ddc z = dd::unit_phase(eta);
    const Ddc rot = dd::unit_phase(beta);
    Ddc u{{1.0, 0.0}, {0.0, 0.0}}, v{{1.0, 0.0}, {0.0, 0.0}};
    long long pow2 = 0;  // powers of two shed by exact rescaling
    for (std::size_t j = 0; j < n; ++j) {
        check_in_disk(alpha.at(j));
        const Ddc al = dd::cmul_d(alpha.at(j), rot);
        const Ddc zu = dd::cmul(z, u);
        u = dd::csub(zu, dd::cmul(dd::conj(al), v));
        v = dd::csub(v, dd::cmul(al, zu));
        if ((j & 31u) == 31u) {
            const double m = std::max(dd::cabs_hi(u), dd::cabs_hi(v));
            if (m > 0.0 && (m > 1e100 || m < 1e-100)) {
                int e = 0;
                std::frexp(m, &e);
                pow2 += e;
                const auto scale_by = [&](dd::Dd& x) {
                    x.hi = std::ldexp(x.hi, -e);
                    x.lo = std::ldexp(x.lo, -e);
                };
                scale_by(u.re);
                scale_by(u.im);
                scale_by(v.re);
                scale_by(v.im);
            }
        }
    }
    CircleValue out;
    const double au = dd::cabs_hi(u);
    if (au == 0.0) {
        out.log_abs = -std::numeric_limits<double>::infinity();
        out.unit = cdouble(1.0, 0.0);
    } else {
        const dd::Dd nrm = dd::cnorm(u);
        out.log_abs = double(pow2) * 0.693147180559945309 +
                      0.5 * (std::log(nrm.hi) + std::log1p(nrm.lo / nrm.hi));
        out.unit = cdouble(u.re.hi, u.im.hi) / au;
    }
    return out;
}

VerblunskySequence verblunsky_from_measure(const CircleMeasure& m, std::size_t n) {
    // moment table c_k = int e^{-ik eta} d mu, k = -n..n
    std::vector<cdouble> mom(2 * n + 1);
    for (long k = -long(n); k <= long(n); ++k) mom[std::size_t(k + long(n))] = measure_moment(m, k);
    auto c = [&](long k) { return mom[std::size_t(k + long(n))]; };
    // <p, q> = sum conj(p_a) q_b c_{a-b}
    auto inner = [&](const std::vector<cdouble>& p, const std::vector<cdouble>& q) {
        cdouble s(0.0, 0.0);
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < q.size(); ++b)
                s += std::conj(p[a]) * q[b] * c(long(a) - long(b));
        return s;
    };

    const double c0 = std::abs(c(0));
    if (!(c0 > 0.0)) throw std::invalid_argument("verblunsky_from_measure: zero-mass measure");

    std::vector<std::vector<cdouble>> ortho;  // orthonormal hat-phi_0..k
    std::vector<cdouble> alphas;
    for (std::size_t k = 0; k <= n; ++k) {
        std::vector<cdouble> v(k + 1, cdouble(0.0, 0.0));
        v[k] = cdouble(1.0, 0.0);  // z^k
        for (std::size_t j = 0; j < k; ++j) {
            const cdouble proj = inner(ortho[j], v);
            for (std::size_t t = 0; t < ortho[j].size(); ++t) v[t] -= proj * ortho[j][t];
        }
        const double norm_sq = inner(v, v).real();
        if (!(norm_sq > 0.0) || c0 / norm_sq > 1e12)
            throw guard_error(
                "verblunsky_from_measure: moment matrix numerically singular at degree " +
                std::to_string(k) + " (measure too concentrated)");
        // projections only touch coefficients below degree k, so v is monic
        if (k >= 1) {
            const cdouble a_k = -std::conj(v[0]);
            if (!(std::abs(a_k) < 1.0))
                throw guard_error("verblunsky_from_measure: recovered |alpha_" +
                                  std::to_string(k - 1) + "| >= 1 (ill-conditioned moments)");
            alphas.push_back(a_k);
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& x : v) x *= inv;
        ortho.push_back(std::move(v));
    }
    return VerblunskySequence(std::move(alphas), "from-measure");
}

}  // namespace opuc
