#ifndef OPUC_PRUEFER_HPP
#define OPUC_PRUEFER_HPP

#include <vector>

#include "opuc/types.hpp"

namespace opuc {

/// Evolve the Prufer variables along alpha at fixed (eta, beta):
///   R_{j+1}^2 / R_j^2 = |1 - w_j|^2,  w_j = alpha_j e^{i[(j+1) eta + beta + 2 theta_j]},
///   theta_{j+1} = theta_j - arg(1 - w_j)   (principal branch; |step| < pi/2),
/// with R_0 = 1, theta_0 = 0. Radii are tracked in log domain. The
/// accumulator stores A(j, eta, beta) = sum_{k<j} w_k.
/// Entries of alpha beyond its stored length act as zeros.
PrueferTrajectory pruefer_evolve(const VerblunskySequence& alpha, double eta, double beta,
                                 std::size_t n);

/// Endpoint data of a trajectory without storing the arrays: A(n, eta, beta)
/// and log R_n. Uses a multiplicative phase-tracking kernel (no per-step
/// transcendentals), suitable for large eta grids.
struct AccumulatorSample {
    cdouble a = cdouble(0.0, 0.0);
    double log_r = 0.0;
};

AccumulatorSample pruefer_accumulate(const VerblunskySequence& alpha, double eta, double beta,
                                     std::size_t n);

/// pruefer_accumulate at eta_k = 2 pi k / grid_size, parallel over the grid.
/// Output is independent of the thread count.
std::vector<AccumulatorSample> pruefer_scan_grid(const VerblunskySequence& alpha, std::size_t n,
                                                 double beta, std::size_t grid_size,
                                                 std::size_t threads = 0);

/// exp(-Re A(j)) for each j: the right-hand proxy of the radius asymptotics.
std::vector<double> asymptotic_proxy(const PrueferTrajectory& traj);

/// Partial tail sum_{j=n}^{N} alpha_j e^{i j eta} together with its Cauchy
/// variation over the last dyadic halvings (a convergence report, not a claim).
struct TailEstimate {
    cdouble value = cdouble(0.0, 0.0);
    double cauchy_variation = 0.0;
};

TailEstimate alpha_tail(const VerblunskySequence& alpha, double eta, std::size_t n, std::size_t N);

/// Partial sum  sum_{j=1}^{N} |hat-alpha(eta, j)| |alpha_{j-1}|  with the tail
/// hat-alpha taken over the full stored range.
double fsr_criterion(const VerblunskySequence& alpha, double eta, std::size_t N);

}  // namespace opuc

#endif
