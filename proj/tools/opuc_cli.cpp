// Experiment runner: wires the library modules together behind a flat
// key = value config file and writes CSV/JSON artifacts.
//
// Usage: opuc <subcommand> --config PATH [--out DIR] [--seed U64] [--threads N]
//
// Exit codes: 0 success, 1 validation error, 2 numerical-guard failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "opuc/bernstein_szego.hpp"
#include "opuc/generators.hpp"
#include "opuc/pruefer.hpp"
#include "opuc/resonance.hpp"
#include "opuc/singular_scan.hpp"
#include "opuc/szego.hpp"

using opuc::cdouble;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "opuc 0.1.0";

struct Config {
    std::map<std::string, std::string> kv;
    std::string hash_hex;

    bool has(const std::string& key) const { return kv.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }
    double num(const std::string& key, std::optional<double> fallback = {}) const {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (fallback) return *fallback;
            throw std::invalid_argument("config: missing required key '" + key + "'");
        }
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size())
            throw std::invalid_argument("config: key '" + key + "' is not a number");
        return v;
    }
    std::size_t index(const std::string& key, std::optional<std::size_t> fallback = {}) const {
        const double v = num(key, fallback ? std::optional<double>(double(*fallback))
                                           : std::optional<double>{});
        if (v < 0 || v != std::floor(v))
            throw std::invalid_argument("config: key '" + key + "' must be a nonnegative integer");
        return std::size_t(v);
    }
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

Config parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config file not found: " + path);
    Config cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                     ": empty key");
        cfg.kv[key] = value;
    }
    // canonical hash: sorted key=value lines (std::map iterates sorted)
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& [k, v] : cfg.kv) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    cfg.hash_hex = buf;
    return cfg;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f << content;
    }
    fs::rename(tmp, path);
}

// JSON sanitation: the writer must not emit NaN/Inf literals
json num_json(double v) {
    if (std::isnan(v)) return json("nan");
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

class OutputWriter {
public:
    OutputWriter(fs::path dir, const Config& cfg, std::uint64_t seed)
        : dir_(std::move(dir)), cfg_(cfg), seed_(seed) {
        fs::create_directories(dir_);
    }

    void csv(const std::string& name, const std::string& header,
             const std::vector<std::string>& rows) const {
        std::ostringstream out;
        out << "# " << kVersion << " config=" << cfg_.hash_hex << " seed=" << seed_ << "\n";
        out << header << "\n";
        for (const auto& r : rows) out << r << "\n";
        atomic_write(dir_ / name, out.str());
    }

    void json_file(const std::string& name, json body) const {
        json doc;
        doc["meta"] = {{"version", kVersion}, {"config", cfg_.hash_hex}, {"seed", seed_}};
        doc["data"] = std::move(body);
        atomic_write(dir_ / name, doc.dump(2) + "\n");
    }

private:
    fs::path dir_;
    const Config& cfg_;
    std::uint64_t seed_;
};

opuc::VerblunskySequence build_family(const Config& cfg, std::uint64_t seed) {
    const std::string family = cfg.get("family", "coulomb");
    const std::size_t n = cfg.index("n");
    if (family == "zero") return opuc::zero_family(n);
    if (family == "coulomb")
        return opuc::coulomb_family(cfg.num("c", 0.2), opuc::PhaseRule::zero(), n);
    if (family == "coulomb-single")
        return opuc::coulomb_family(cfg.num("c", 0.3),
                                    opuc::PhaseRule::constant(cfg.num("omega", 1.0)), n);
    if (family == "coulomb-random")
        return opuc::coulomb_family(cfg.num("c", 0.2), opuc::PhaseRule::random(seed), n);
    if (family == "geometric") return opuc::geometric_family(cfg.num("a", 0.9), n);
    if (family == "random-disk") {
        const double cap = cfg.num("cap", 0.6);
        std::vector<cdouble> v(n);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = std::polar(cap * opuc::uniform01(seed, 2 * j), opuc::uniform_angle(seed, 2 * j + 1));
        return opuc::VerblunskySequence(std::move(v), "random-disk(cap=" + std::to_string(cap) +
                                                          ",seed=" + std::to_string(seed) + ")");
    }
    if (family == "file") return opuc::load_sequence(cfg.get("file"));
    throw std::invalid_argument("config: unknown family '" + family + "'");
}

std::uint64_t resolve_seed(const Config& cfg, std::optional<std::uint64_t> flag_seed) {
    if (flag_seed) return *flag_seed;
    if (cfg.has("seed")) return std::stoull(cfg.get("seed"));
    return 0;
}

// ------------------------- subcommands -------------------------

int run_generate(const Config& cfg, OutputWriter& out, const fs::path& dir, std::uint64_t seed) {
    auto seq = build_family(cfg, seed);
    opuc::save_sequence((dir / "sequence.txt").string(), seq);
    out.json_file("generate.json", json{{"generator", seq.generator_tag()},
                                        {"length", seq.size()},
                                        {"max_abs", num_json(seq.max_abs())}});
    return 0;
}

int run_evolve(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const std::size_t n = cfg.index("n");
    const std::size_t grid = cfg.index("eta_grid", std::size_t(256));
    const double beta = cfg.num("beta", 0.0);
    auto samples = opuc::pruefer_scan_grid(seq, n, beta, grid, threads);
    std::vector<std::string> rows;
    rows.reserve(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        const double eta = opuc::two_pi * double(k) / double(grid);
        rows.push_back(fmt(eta) + "," + fmt(samples[k].log_r) + "," + fmt(samples[k].a.real()) +
                       "," + fmt(samples[k].a.imag()) + "," + fmt(std::abs(samples[k].a)) + "," +
                       fmt(std::exp(-samples[k].a.real())));
    }
    out.csv("evolve.csv", "eta,log_r,re_a,im_a,abs_a,proxy", rows);
    return 0;
}

int run_bs_density(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const std::size_t level = cfg.index("level", seq.size());
    const std::size_t grid = cfg.index("grid", std::max<std::size_t>(8 * level, 64));
    auto m = opuc::bs_density(seq, level, grid, threads);
    std::vector<std::string> rows;
    rows.reserve(grid);
    for (std::size_t k = 0; k < grid; ++k)
        rows.push_back(fmt(m.grid_angle(k)) + "," + fmt(m.density()[k]));
    out.csv("bs_density.csv", "eta,density", rows);
    return 0;
}

int run_moments(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const std::size_t level = cfg.index("level", seq.size());
    const std::size_t grid = cfg.index("grid", std::max<std::size_t>(8 * level, 64));
    const long k_max = long(cfg.index("k_max", level));
    auto m = opuc::bs_density(seq, level, grid, threads);
    std::vector<std::string> rows;
    for (long k = -k_max; k <= k_max; ++k) {
        const cdouble c = opuc::measure_moment(m, k);
        rows.push_back(std::to_string(k) + "," + fmt(c.real()) + "," + fmt(c.imag()));
    }
    out.csv("moments.csv", "k,re,im", rows);
    return 0;
}

int run_compare_intervals(const Config& cfg, OutputWriter& out, std::uint64_t seed,
                          std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const std::size_t n = cfg.index("level");
    if (2 * n > seq.size())
        throw std::invalid_argument("compare-intervals: need family length >= 2*level");
    const double kappa = cfg.num("kappa", 1.0);
    const std::size_t grid = cfg.index("grid", opuc::next_pow2(16 * n + 64));
    const std::size_t delta_count = cfg.index("delta_count", std::size_t(12));
    const std::size_t center_count = cfg.index("center_count", std::size_t(8));
    auto mu = opuc::bs_density(seq, 2 * n, grid, threads);
    auto nu = opuc::bs_density(seq, n, grid, threads);
    const double d_min = std::pow(double(n), -1.0 / (2.0 + kappa));
    const double d_max = 0.5;
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < delta_count; ++i) {
        const double delta =
            d_min * std::pow(d_max / d_min, double(i) / double(std::max<std::size_t>(delta_count - 1, 1)));
        for (std::size_t p = 0; p < center_count; ++p) {
            const double center = opuc::two_pi * double(p) / double(center_count);
            const opuc::IntervalOnCircle I(center, delta / 2.0);
            auto rec = opuc::interval_comparison(mu, nu, I, n, kappa);
            rows.push_back(fmt(delta) + "," + fmt(center) + "," + fmt(rec.mu_mass) + "," +
                           fmt(rec.nu_mass_3i) + "," + fmt(rec.c_impl) + "," +
                           fmt(rec.max_moment_mismatch));
        }
    }
    out.csv("compare_intervals.csv", "delta,center,mu_i,nu_3i,c_impl,moment_mismatch", rows);
    return 0;
}

int run_resonances(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const std::size_t n = cfg.index("n");
    const std::size_t grid = cfg.index("eta_grid", std::size_t(65536));
    opuc::ResonanceOptions opts;
    opts.threads = threads;
    opts.larger_divisor = cfg.num("divisor", 14.0);
    opts.separation_power_scale = cfg.num("separation_scale", 3.0);
    auto found = opuc::resonant_angles(seq, n, grid, opts);
    json list = json::array();
    for (const auto& r : found) list.push_back({{"eta", num_json(r.eta)}, {"abs_a", num_json(r.abs_a)}});
    out.json_file("resonances.json", json{{"n", n},
                                          {"eta_grid", grid},
                                          {"threshold", num_json(std::log(double(n)) / opts.larger_divisor)},
                                          {"count", found.size()},
                                          {"angles", std::move(list)}});
    return 0;
}

int run_kmax_check(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const std::size_t n = cfg.index("n");
    opuc::KmaxOptions opts;
    opts.eta_grid = cfg.index("eta_grid", std::size_t(0));
    opts.res.threads = threads;
    auto rep = opuc::kmax_check(seq, n, opts);
    json angles = json::array();
    for (const auto& a : rep.angles)
        angles.push_back({{"eta", num_json(a.eta)}, {"abs_a", num_json(a.abs_a)}});
    out.json_file("kmax_check.json",
                  json{{"k_found", rep.k_found},
                       {"a_est", num_json(rep.a_est)},
                       {"bound_392a", num_json(rep.bound_392a)},
                       {"c_fit", num_json(rep.c_fit)},
                       {"bound_holds", rep.bound_holds},
                       {"e_n_minus_log_n", num_json(rep.e_n_minus_log_n)},
                       {"angles", std::move(angles)}});
    return 0;
}

int run_abel_bound(const Config& cfg, OutputWriter& out) {
    const std::size_t n_max = cfg.index("n_max", std::size_t(100000));
    const double xi_min = cfg.num("xi_min", 1e-4);
    const double xi_max = cfg.num("xi_max", 0.5);
    const std::size_t count = cfg.index("xi_count", std::size_t(12));
    std::vector<double> xis, sups;
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < count; ++i) {
        const double xi =
            xi_min * std::pow(xi_max / xi_min, double(i) / double(std::max<std::size_t>(count - 1, 1)));
        auto r = opuc::abel_sup(xi, {}, n_max);
        xis.push_back(xi);
        sups.push_back(r.sup_partial);
        rows.push_back(fmt(xi) + "," + fmt(r.sup_partial) + "," + fmt(r.sbp_discrepancy));
    }
    out.csv("abel_bound.csv", "xi,sup_partial,sbp_discrepancy", rows);
    auto fit = opuc::abel_fit(xis, sups);
    out.json_file("abel_bound.json", json{{"c1", num_json(fit.c1)},
                                          {"c2", num_json(fit.c2)},
                                          {"r_squared", num_json(fit.r_squared)},
                                          {"n_max", n_max}});
    return 0;
}

int run_energy(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const std::size_t level = cfg.index("level", seq.size());
    const std::size_t grid = cfg.index("grid", std::max<std::size_t>(8 * level, 512));
    const double eps = cfg.num("eps", 0.5);
    auto m = opuc::bs_density(seq, level, grid, threads);
    const double energy = opuc::epsilon_energy(m, eps);
    out.json_file("energy.json",
                  json{{"eps", num_json(eps)}, {"level", level}, {"energy", num_json(energy)}});
    return 0;
}

int run_scan(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const double eps0 = cfg.num("eps0", 0.1);
    const int m_max = int(cfg.index("m_max", std::size_t(4)));
    opuc::ScanOptions opts;
    opts.threads = threads;
    opts.n_budget = cfg.index("n_budget", opts.n_budget);
    opts.n0 = cfg.index("n0", opts.n0);
    if (cfg.has("kmax")) opts.kmax_override = cfg.index("kmax");
    auto rep = opuc::singular_interval_scan(seq, eps0, m_max, opts);

    json scales = json::array();
    for (const auto& s : rep.scales) {
        json tiles = json::array();
        for (const auto& t : s.singular_tiles)
            tiles.push_back({{"center", num_json(t.center)},
                             {"proxy_mass", num_json(t.proxy_mass)},
                             {"mass_3j", num_json(t.mass_3j)},
                             {"in_separated_family", t.in_separated_family}});
        scales.push_back({{"m", s.m},
                          {"eps_m", num_json(s.eps_m)},
                          {"n_m", s.n_m},
                          {"grid", s.grid},
                          {"tile_count", s.tile_count},
                          {"singular_threshold", num_json(s.singular_threshold)},
                          {"singular_tiles", std::move(tiles)},
                          {"separated_count", s.separated_count},
                          {"separation_threshold", num_json(s.separation_threshold)},
                          {"cover_count", s.cover_count},
                          {"cover_length", num_json(s.cover_length)},
                          {"cover_within_budget", s.cover_within_budget},
                          {"below_n0", s.below_n0}});
    }
    json atoms = json::array();
    for (const auto& a : rep.atoms)
        atoms.push_back({{"angle", num_json(a.angle)}, {"mass", num_json(a.mass)}});
    out.json_file("scan.json", json{{"eps0", num_json(rep.eps0)},
                                    {"m_max", rep.m_max},
                                    {"n_budget", rep.n_budget},
                                    {"a_est", num_json(rep.a_est)},
                                    {"k_max", rep.k_max},
                                    {"proxy_note", rep.proxy_note},
                                    {"exhausted_at_scale", rep.exhausted_at_scale},
                                    {"scales", std::move(scales)},
                                    {"atom_probes", std::move(atoms)}});
    return 0;
}

int run_decompose(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    auto seq = build_family(cfg, seed);
    const std::size_t level = cfg.index("level", seq.size());
    const std::size_t grid = cfg.index("grid", std::max<std::size_t>(opuc::next_pow2(8 * level), 8192));
    auto m = opuc::bs_density(seq, level, grid, threads);

    // candidates: strongest density peaks
    const std::size_t count = cfg.index("candidates", std::size_t(8));
    std::vector<std::pair<double, double>> peaks;
    const auto& rho = m.density();
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double prev = rho[(i + rho.size() - 1) % rho.size()];
        const double next = rho[(i + 1) % rho.size()];
        if (rho[i] >= prev && rho[i] > next) peaks.emplace_back(rho[i], m.grid_angle(i));
    }
    std::sort(peaks.rbegin(), peaks.rend());
    std::vector<double> candidates;
    for (std::size_t i = 0; i < peaks.size() && i < count; ++i) candidates.push_back(peaks[i].second);

    auto probes = opuc::detect_atoms(seq, level, candidates);
    std::vector<double> deltas;
    for (double d = 0.2; d > 1e-3; d *= 0.5) deltas.push_back(d);

    json atoms = json::array();
    for (const auto& p : probes)
        atoms.push_back({{"angle", num_json(p.angle)}, {"mass", num_json(p.mass)}});
    json scalings = json::array();
    for (double cand : candidates) {
        auto vals = opuc::local_scaling_exponent(m, cand, deltas);
        json arr = json::array();
        for (double v : vals) arr.push_back(num_json(v));
        scalings.push_back({{"angle", num_json(cand)}, {"ratios", std::move(arr)}});
    }
    json dl = json::array();
    for (double d : deltas) dl.push_back(num_json(d));
    out.json_file("decompose.json", json{{"level", level},
                                         {"deltas", std::move(dl)},
                                         {"atom_probes", std::move(atoms)},
                                         {"scaling", std::move(scalings)}});
    return 0;
}

int run_roundtrip(const Config& cfg, OutputWriter& out, std::uint64_t seed, std::size_t threads) {
    const std::size_t n = cfg.index("n", std::size_t(16));
    Config inner = cfg;
    if (!inner.has("family")) inner.kv["family"] = "random-disk";
    auto seq = build_family(inner, seed);
    const std::size_t grid = cfg.index("grid", std::size_t(1) << 17);
    auto m = opuc::bs_density(seq, n, grid, threads);
    auto rec = opuc::verblunsky_from_measure(m, n);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(rec.at(j) - seq.at(j)));
    out.json_file("roundtrip.json",
                  json{{"n", n}, {"grid", grid}, {"max_error", num_json(err)}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orthogonal polynomials on the unit circle: experiment runner"};
    std::string subcommand, config_path, out_dir = ".";
    std::optional<std::uint64_t> seed_flag;
    std::size_t threads = 0;
    app.add_option("subcommand", subcommand,
                   "generate|evolve|bs-density|moments|compare-intervals|resonances|"
                   "kmax-check|abel-bound|energy|scan|decompose|roundtrip")
        ->required();
    app.add_option("--config", config_path, "flat key = value config file")->required();
    app.add_option("--out", out_dir, "output directory");
    std::uint64_t seed_raw = 0;
    auto* seed_opt = app.add_option("--seed", seed_raw, "seed override (u64)");
    app.add_option("--threads", threads, "worker threads (0 = auto, env OPUC_THREADS)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const Config cfg = parse_config(config_path);
        if (seed_opt->count() > 0) seed_flag = seed_raw;
        const std::uint64_t seed = resolve_seed(cfg, seed_flag);
        OutputWriter out(out_dir, cfg, seed);

        if (subcommand == "generate") return run_generate(cfg, out, out_dir, seed);
        if (subcommand == "evolve") return run_evolve(cfg, out, seed, threads);
        if (subcommand == "bs-density") return run_bs_density(cfg, out, seed, threads);
        if (subcommand == "moments") return run_moments(cfg, out, seed, threads);
        if (subcommand == "compare-intervals") return run_compare_intervals(cfg, out, seed, threads);
        if (subcommand == "resonances") return run_resonances(cfg, out, seed, threads);
        if (subcommand == "kmax-check") return run_kmax_check(cfg, out, seed, threads);
        if (subcommand == "abel-bound") return run_abel_bound(cfg, out);
        if (subcommand == "energy") return run_energy(cfg, out, seed, threads);
        if (subcommand == "scan") return run_scan(cfg, out, seed, threads);
        if (subcommand == "decompose") return run_decompose(cfg, out, seed, threads);
        if (subcommand == "roundtrip") return run_roundtrip(cfg, out, seed, threads);
        std::fprintf(stderr, "error: unknown subcommand '%s'\n", subcommand.c_str());
        return 1;
    } catch (const opuc::guard_error& e) {
        std::fprintf(stderr, "numerical guard: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
