#ifndef OPUC_SINGULAR_SCAN_HPP
#define OPUC_SINGULAR_SCAN_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "opuc/types.hpp"

namespace opuc {

/// eps-energy of a measure: int int (1 + |x-y|^{-eps}) d nu d nu with |x-y|
/// the arc distance. Any atom makes the diagonal self-pair infinite.
/// Grid quadrature integrates the one-cell diagonal band analytically.
double epsilon_energy(const CircleMeasure& m, double eps);

/// Stopped-sum inequality record: lhs = { int |sum_{n<=m(eta)} alpha_n e^{-in eta}| d nu }^2,
/// rhs = energy * sum (n+1)^{1-eps} |alpha_n|^2.
struct SalemZygmundRecord {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Rejects measures with atoms (infinite eps-energy).
SalemZygmundRecord salem_zygmund_test(const VerblunskySequence& alpha, const CircleMeasure& nu,
                                      double eps, const std::function<std::size_t(double)>& m_fn);

/// mu(k - delta, k + delta) / (2 delta)^{1/2} for each delta; divergence along
/// a decreasing delta sequence flags k as a singular-support candidate.
std::vector<double> local_scaling_exponent(const CircleMeasure& m, double k,
                                           std::span<const double> deltas);

/// Atom probe at a candidate angle: mass = Aitken-extrapolated limit of the
/// reciprocal Christoffel sums (sum_{j<n} |phi_j|^2)^{-1}; zero when the probe
/// does not stabilize above the threshold.
struct DetectedAtom {
    double angle = 0.0;
    double mass = 0.0;
};

std::vector<DetectedAtom> detect_atoms(const VerblunskySequence& alpha, std::size_t n,
                                       std::span<const double> candidates,
                                       double threshold = 1e-4);

struct SingularTile {
    double center = 0.0;
    double proxy_mass = 0.0;  // Bernstein-Szego tile mass minus detected atoms
    double mass_3j = 0.0;     // mass of the tripled tile (interval-comparison bridge)
    bool in_separated_family = false;
};

struct ScaleReport {
    int m = 0;
    double eps_m = 0.0;
    std::size_t n_m = 0;
    std::size_t grid = 0;
    std::size_t tile_count = 0;
    double singular_threshold = 0.0;  // eps_m^{1/2}
    std::vector<SingularTile> singular_tiles;
    std::size_t separated_count = 0;
    double separation_threshold = 0.0;  // 3 eps_m^{1/Kmax^2}
    std::size_t cover_count = 0;        // intervals of cover_length covering all singular tiles
    double cover_length = 0.0;          // eps_m^{1/Kmax^2}
    bool cover_within_budget = false;   // cover_count <= 8 Kmax
    bool below_n0 = false;
};

struct ScanOptions {
    std::size_t n_budget = 2'500'000;  // largest Bernstein-Szego level attempted
    std::size_t n0 = 1000;             // stand-in threshold; scales below it are flagged
    std::size_t kmax_override = 0;     // 0: derive from kmax_check
    std::size_t kmax_probe_n = 16384;
    std::size_t kmax_probe_grid = 8192;
    std::size_t atom_candidates = 16;
    double atom_threshold = 1e-4;
    std::size_t threads = 0;
};

struct ScanReport {
    double eps0 = 0.0;
    int m_max = 0;
    std::size_t n_budget = 0;
    double a_est = 0.0;
    std::size_t k_max = 0;
    std::vector<DetectedAtom> atoms;  // probes at the deepest completed scale
    std::vector<ScaleReport> scales;  // completed scales only
    int exhausted_at_scale = 0;       // 0 = all scales completed
    std::string proxy_note;
};

/// Multiscale singular-interval scan: at each scale m <= m_max, tile the
/// circle by intervals of length eps_m = eps0^m, classify a tile as singular
/// when its proxy mass exceeds eps_m^{1/2}, extract a maximal separated
/// family, and report the covering count against the 8 Kmax budget. Stops and
/// reports when n_m = ceil(eps_m^{-3}) exceeds the budget.
ScanReport singular_interval_scan(const VerblunskySequence& alpha, double eps0, int m_max,
                                  const ScanOptions& opts = {});

}  // namespace opuc

#endif
