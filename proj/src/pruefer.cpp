#include "opuc/pruefer.hpp"

#include <algorithm>
#include <cmath>

#include "opuc/dd.hpp"
#include "opuc/parallel.hpp"

namespace opuc {

PrueferTrajectory pruefer_evolve(const VerblunskySequence& alpha, double eta, double beta,
                                 std::size_t n) {
    PrueferTrajectory traj;
    traj.eta = wrap_angle(eta);
    traj.beta = wrap_angle(beta);
    traj.length = n;
    traj.radii_log.assign(n + 1, 0.0);
    traj.phases.assign(n + 1, 0.0);
    traj.accumulator.assign(n + 1, cdouble(0.0, 0.0));

    // The phase dynamics amplify roundoff by exp(drawdown), so the recursion
    // state runs in double-double: g carries e^{i gamma_j} multiplicatively
    // (gamma_j = (j+1) eta + beta + 2 theta_j) and the squared-radius product
    // is rescaled by exact powers of two. The stored arrays are double
    // readouts of that state; readout error is not amplified.
    using dd::Dd;
    using dd::Ddc;
    const Ddc rot = dd::unit_phase(eta);
    Ddc g = dd::unit_phase(dd::two_sum(eta, beta));
    const Ddc one{{1.0, 0.0}, {0.0, 0.0}};
    Dd prod{1.0, 0.0};
    long long pow2 = 0;
    double theta = 0.0;
    cdouble acc(0.0, 0.0);
    constexpr double ln2 = 0.693147180559945309;
    for (std::size_t j = 0; j < n; ++j) {
        const Ddc w = dd::cmul_d(alpha.at(j), g);
        acc += cdouble(w.re.hi, w.im.hi);
        const Ddc u = dd::csub(one, w);
        const Dd nrm = dd::cnorm(u);  // 1 + |alpha|^2 - 2 Re w
        if (!(nrm.hi > 0.0))
            throw guard_error("pruefer_evolve: nonpositive radius argument (internal invariant)");
        prod = dd::mul(prod, nrm);
        if (prod.hi > 1e120 || prod.hi < 1e-120) {
            int e = 0;
            std::frexp(prod.hi, &e);
            pow2 += e;
            prod.hi = std::ldexp(prod.hi, -e);
            prod.lo = std::ldexp(prod.lo, -e);
        }
        theta -= std::atan2(u.im.hi, u.re.hi);
        // g' = g * e^{i eta} * conj(u)^2 / |u|^2
        const Ddc cu = dd::conj(u);
        Ddc phase2 = dd::cmul(cu, cu);
        phase2.re = dd::div(phase2.re, nrm);
        phase2.im = dd::div(phase2.im, nrm);
        g = dd::cmul(g, dd::cmul(rot, phase2));
        traj.radii_log[j + 1] =
            0.5 * (double(pow2) * ln2 + std::log(prod.hi) + std::log1p(prod.lo / prod.hi));
        traj.phases[j + 1] = theta;
        traj.accumulator[j + 1] = acc;
    }
    return traj;
}

AccumulatorSample pruefer_accumulate(const VerblunskySequence& alpha, double eta, double beta,
                                     std::size_t n) {
    const std::size_t len = std::min(n, alpha.size());
    const cdouble step_rot = std::polar(1.0, eta);
    cdouble g = std::polar(1.0, eta + beta);  // e^{i gamma_0}, theta_0 = 0
    cdouble acc(0.0, 0.0);
    double log_r2 = 0.0;
    double prod = 1.0;
    for (std::size_t j = 0; j < len; ++j) {
        const cdouble w = alpha.at(j) * g;
        acc += w;
        const cdouble u = cdouble(1.0, 0.0) - w;
        const double nrm = std::norm(u);
        if (!(nrm > 0.0))
            throw guard_error("pruefer_accumulate: nonpositive radius argument");
        prod *= nrm;
        // gamma advances by eta + 2 * delta-theta; e^{2 i delta-theta} = conj(u)^2 / |u|^2
        g *= step_rot * (std::conj(u) * std::conj(u)) / nrm;
        if ((j & 31u) == 31u) {
            log_r2 += std::log(prod);
            prod = 1.0;
        }
        if ((j & 1023u) == 1023u) g /= std::abs(g);
    }
    log_r2 += std::log(prod);
    AccumulatorSample out;
    out.a = acc;
    out.log_r = 0.5 * log_r2;
    return out;
}

std::vector<AccumulatorSample> pruefer_scan_grid(const VerblunskySequence& alpha, std::size_t n,
                                                 double beta, std::size_t grid_size,
                                                 std::size_t threads) {
    std::vector<AccumulatorSample> out(grid_size);
    parallel_for(grid_size, threads, [&](std::size_t k) {
        const double eta = two_pi * double(k) / double(grid_size);
        out[k] = pruefer_accumulate(alpha, eta, beta, n);
    });
    return out;
}

std::vector<double> asymptotic_proxy(const PrueferTrajectory& traj) {
    std::vector<double> out(traj.accumulator.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::exp(-traj.accumulator[j].real());
    return out;
}

TailEstimate alpha_tail(const VerblunskySequence& alpha, double eta, std::size_t n,
                        std::size_t N) {
    if (n > N) throw std::invalid_argument("alpha_tail: need n <= N");
    const std::size_t hi = std::min(N, alpha.size() == 0 ? N : alpha.size() - 1);
    cdouble sum(0.0, 0.0);
    // dyadic checkpoints measured back from N: N, N/2, N/4
    const std::size_t cp2 = N / 2, cp4 = N / 4;
    cdouble at_cp2(0.0, 0.0), at_cp4(0.0, 0.0);
    for (std::size_t j = n; j <= hi; ++j) {
        sum += alpha.at(j) * std::polar(1.0, double(j) * eta);
        if (j == cp4) at_cp4 = sum;
        if (j == cp2) at_cp2 = sum;
    }
    if (cp4 > hi) at_cp4 = sum;  // stored range ends before the checkpoint
    if (cp2 > hi) at_cp2 = sum;
    TailEstimate out;
    out.value = sum;
    if (cp2 > n && cp4 > n)
        out.cauchy_variation = std::max(std::abs(sum - at_cp2), std::abs(at_cp2 - at_cp4));
    else
        out.cauchy_variation = std::abs(sum);
    return out;
}

double fsr_criterion(const VerblunskySequence& alpha, double eta, std::size_t N) {
    const std::size_t len = alpha.size();
    if (len == 0) return 0.0;
    // suffix tails T_j = sum_{k=j}^{len-1} alpha_k e^{ik eta}
    std::vector<cdouble> tail(len + 1, cdouble(0.0, 0.0));
    for (std::size_t j = len; j-- > 0;)
        tail[j] = tail[j + 1] + alpha.at(j) * std::polar(1.0, double(j) * eta);
    double sum = 0.0;
    const std::size_t hi = std::min(N, len);
    for (std::size_t j = 1; j <= hi; ++j) sum += std::abs(tail[j]) * std::abs(alpha.at(j - 1));
    return sum;
}

}  // namespace opuc
