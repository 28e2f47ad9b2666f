#include "opuc/generators.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace opuc {

PhaseRule PhaseRule::constant(double omega) {
    PhaseRule r;
    r.kind = Kind::constant;
    r.omega = omega;
    return r;
}

PhaseRule PhaseRule::random(std::uint64_t seed) {
    PhaseRule r;
    r.kind = Kind::random;
    r.seed = seed;
    return r;
}

VerblunskySequence coulomb_family(double c, const PhaseRule& rule, std::size_t n) {
    if (!(c >= 0.0 && c < 1.0))
        throw std::invalid_argument("coulomb_family: need 0 <= c < 1 so that |alpha_0| < 1");
    std::vector<cdouble> vals(n);
    for (std::size_t j = 0; j < n; ++j) {
        double phi = 0.0;
        switch (rule.kind) {
            case PhaseRule::Kind::zero: break;
            case PhaseRule::Kind::constant: phi = -rule.omega * double(j + 1); break;
            case PhaseRule::Kind::random: phi = uniform_angle(rule.seed, j); break;
        }
        vals[j] = std::polar(c / double(j + 1), phi);
    }
    std::ostringstream tag;
    tag << "coulomb(c=" << c;
    switch (rule.kind) {
        case PhaseRule::Kind::zero: tag << ",phase=zero"; break;
        case PhaseRule::Kind::constant: tag << ",phase=omega:" << rule.omega; break;
        case PhaseRule::Kind::random: tag << ",phase=seed:" << rule.seed; break;
    }
    tag << ",n=" << n << ")";
    return VerblunskySequence(std::move(vals), tag.str());
}

VerblunskySequence geometric_family(double a, std::size_t n) {
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("geometric_family: need 0 <= a < 1");
    std::vector<cdouble> vals(n);
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        p *= a;
        vals[j] = cdouble(p, 0.0);
    }
    std::ostringstream tag;
    tag << "geometric(a=" << a << ",n=" << n << ")";
    return VerblunskySequence(std::move(vals), tag.str());
}

VerblunskySequence zero_family(std::size_t n) {
    return VerblunskySequence(std::vector<cdouble>(n, cdouble(0.0, 0.0)), "zero(n=" + std::to_string(n) + ")");
}

LogConstantEstimate estimate_log_constant(const VerblunskySequence& alpha) {
    if (alpha.size() < 10)
        throw std::invalid_argument("estimate_log_constant: need length >= 10");
    LogConstantEstimate out;
    double sum = 0.0;
    std::size_t next_dyadic = 16;
    for (std::size_t n = 0; n < alpha.size(); ++n) {
        sum += double(n + 1) * std::norm(alpha.at(n));
        if (n >= 10) {
            const double ratio = sum / std::log(double(n));
            out.a_est = std::max(out.a_est, ratio);
            if (n + 1 == next_dyadic || n + 1 == alpha.size()) {
                out.profile.emplace_back(n, ratio);
                while (next_dyadic <= n + 1) next_dyadic *= 2;
            }
        }
    }
    return out;
}

Ell1Check ell1_fractional_check(const VerblunskySequence& alpha, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("ell1_fractional_check: need eps > 0");
    Ell1Check out;
    out.direct_sum = std::abs(alpha.at(0));
    for (std::size_t n = 1; n < alpha.size(); ++n)
        out.direct_sum += std::pow(double(n), -eps / 4.0) * std::abs(alpha.at(n));
    // dyadic blocks [2^l, 2^{l+1}): |sum n^{-eps/4}|a_n|| <=
    //   sqrt(sum (n+1)|a_n|^2) * sqrt(sum n^{-eps/2} / (n+1))
    out.dyadic_bound = std::abs(alpha.at(0));
    for (std::size_t lo = 1; lo < alpha.size(); lo *= 2) {
        const std::size_t hi = std::min(alpha.size(), lo * 2);
        double energy = 0.0, weight = 0.0;
        for (std::size_t n = lo; n < hi; ++n) {
            energy += double(n + 1) * std::norm(alpha.at(n));
            weight += std::pow(double(n), -eps / 2.0) / double(n + 1);
        }
        out.dyadic_bound += std::sqrt(energy) * std::sqrt(weight);
    }
    return out;
}

void save_sequence(const std::string& path, const VerblunskySequence& seq) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("save_sequence: cannot open " + tmp);
        f << "# generator: " << seq.generator_tag() << "\n";
        char buf[80];
        for (const auto& a : seq.values()) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", a.real(), a.imag());
            f << buf;
        }
    }
    std::filesystem::rename(tmp, path);
}

VerblunskySequence load_sequence(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_sequence: cannot open " + path);
    std::string line, tag;
    std::vector<cdouble> vals;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("generator:");
            if (pos != std::string::npos) {
                tag = line.substr(pos + 10);
                while (!tag.empty() && tag.front() == ' ') tag.erase(tag.begin());
            }
            continue;
        }
        std::istringstream ss(line);
        double re = 0.0, im = 0.0;
        if (!(ss >> re >> im)) throw std::runtime_error("load_sequence: malformed line: " + line);
        vals.emplace_back(re, im);
    }
    return VerblunskySequence(std::move(vals), tag);
}

}  // namespace opuc
