#ifndef OPUC_GENERATORS_HPP
#define OPUC_GENERATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "opuc/types.hpp"

namespace opuc {

/// Phase rule for the Coulomb family alpha_j = c e^{i phi_j} / (j+1).
struct PhaseRule {
    enum class Kind { zero, constant, random } kind = Kind::zero;
    double omega = 0.0;      // constant rule: phi_j = -omega (j+1)
    std::uint64_t seed = 0;  // random rule: phi_j i.i.d. uniform on [0, 2 pi)

    static PhaseRule zero() { return {}; }
    static PhaseRule constant(double omega);
    static PhaseRule random(std::uint64_t seed);
};

/// alpha_j = c e^{i phi_j} / (j+1); deterministic given the rule.
VerblunskySequence coulomb_family(double c, const PhaseRule& rule, std::size_t n);

/// alpha_j = a^{j+1}, a in [0, 1).
VerblunskySequence geometric_family(double a, std::size_t n);

/// The zero sequence of the given length.
VerblunskySequence zero_family(std::size_t n);

/// Log-bound constant estimate: A_est = max over N in [10, length) of
/// (sum_{n<=N} (n+1)|alpha_n|^2) / log N, with the ratio profile at dyadic N.
struct LogConstantEstimate {
    double a_est = 0.0;
    std::vector<std::pair<std::size_t, double>> profile;  // (N, ratio at N)
};

LogConstantEstimate estimate_log_constant(const VerblunskySequence& alpha);

/// sum_n n^{-eps/4} |alpha_n| both directly and through the dyadic-block
/// Cauchy-Schwarz bound used to derive it.
struct Ell1Check {
    double direct_sum = 0.0;
    double dyadic_bound = 0.0;
};

Ell1Check ell1_fractional_check(const VerblunskySequence& alpha, double eps);

/// Sequence file: "# generator: <tag>" header, then one "re im" pair per line.
void save_sequence(const std::string& path, const VerblunskySequence& seq);
VerblunskySequence load_sequence(const std::string& path);

}  // namespace opuc

#endif
