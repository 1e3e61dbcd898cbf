#pragma once

#include "dioph/analysis.hpp"
#include "dioph/integer.hpp"
#include "dioph/solver.hpp"
#include "dioph/version.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dioph {

struct io_error : std::runtime_error {
    explicit io_error(const std::string& path, const std::string& what)
        : std::runtime_error(what + ": " + path) {}
};

// ---- deterministic randomness ----------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr const char* rng_algorithm_name =
    "xoshiro256** seeded per trial via splitmix64(seed, trial)";

// xoshiro256**; one independent stream per (seed, trial) pair so trials can be
// evaluated in any order and still reproduce bit-for-bit.
class Xoshiro256StarStar {
  public:
    using result_type = std::uint64_t;

    Xoshiro256StarStar(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed + stream * 0x9E3779B97F4A7C15ULL;
        for (auto& word : state_) word = splitmix64(sm);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
};

// Uniform draw from [lo, hi] by masked rejection on whole 64-bit words.
template <typename Rng>
BigInt uniform_bigint(Rng& rng, const BigInt& lo, const BigInt& hi) {
    BigInt range = hi - lo + 1;
    if (range <= 0) throw std::invalid_argument("uniform_bigint: empty range");
    if (range == 1) return lo;
    const std::size_t bits = bit_length(BigInt(range - 1));
    const std::size_t words = (bits + 63) / 64;
    for (;;) {
        BigInt v = 0;
        for (std::size_t w = 0; w < words; ++w) {
            v <<= 64;
            v |= rng();
        }
        v >>= (words * 64 - bits);
        if (v < range) return BigInt(lo + v);
    }
}

// ---- configuration and records ---------------------------------------------

enum class BenchMode { compare, gcd_sweep };

struct BenchConfig {
    unsigned bits = 128;
    long trials = 10000;  // per gcd group in sweep mode
    std::uint64_t seed = 1;
    std::vector<SolverId> solvers = {SolverId::dea, SolverId::eea_i, SolverId::eea_2};
    BenchMode mode = BenchMode::compare;
    BigInt gcd_min = 2;
    BigInt gcd_max = 100;
    std::string output_path;

    void validate() const {
        if (bits < 8) throw std::invalid_argument("bench config: bits must be >= 8");
        if (trials < 1) throw std::invalid_argument("bench config: trials must be >= 1");
        if (mode == BenchMode::gcd_sweep) {
            if (gcd_min < 2) throw std::invalid_argument("bench config: gcd_min must be >= 2");
            if (gcd_max < gcd_min)
                throw std::invalid_argument("bench config: gcd_max must be >= gcd_min");
        }
    }
};

struct Triplet {
    BigInt a, b, c;
    bool operator==(const Triplet&) const = default;
};

// Trial inputs: a uniform in [2, 2^bits], b uniform in [1, a-1], c uniform in
// [1, 2^bits]. Deterministic per (seed, index).
inline Triplet gen_triplet(const BenchConfig& cfg, long index) {
    Xoshiro256StarStar rng(cfg.seed, static_cast<std::uint64_t>(index));
    BigInt top = BigInt(1) << cfg.bits;
    BigInt a = uniform_bigint(rng, 2, top);
    BigInt b = uniform_bigint(rng, 1, a - 1);
    BigInt c = uniform_bigint(rng, 1, top);
    return {a, b, c};
}

// gcd-controlled pair: a coprime (a', b') with a' > b' of roughly `bits` size,
// found by rejection, scaled by g so that gcd(a, b) is exactly g.
template <typename Rng>
std::pair<BigInt, BigInt> gen_gcd_pair(unsigned bits, const BigInt& g, Rng& rng) {
    if (g < 1) throw std::invalid_argument("gen_gcd_pair: g must be >= 1");
    if (bits < 2) throw std::invalid_argument("gen_gcd_pair: bits must be >= 2");
    BigInt top = BigInt(1) << bits;
    for (int attempt = 0; attempt < 256; ++attempt) {
        BigInt a = uniform_bigint(rng, 2, top);
        BigInt b = uniform_bigint(rng, 1, a - 1);
        if (gcd_of(a, b) == 1) return {BigInt(a * g), BigInt(b * g)};
    }
    throw std::runtime_error("gen_gcd_pair: rejection cap exceeded");
}

struct TrialRecord {
    long trial = 0;
    BigInt a, b, c;
    bool solvable = false;
    Metrics dea;
    Metrics eea_i;
    Metrics eea_2;
};

struct CompareSummary {
    std::vector<TrialRecord> records;
    double avg_dea_iters = 0;
    double avg_dea_recursions = 0;
    double avg_eea_i_iters = 0;
    double avg_eea_i_recursions = 0;
    double avg_eea2_iters = 0;
    std::map<long, long> delta_histogram;  // eea_i iters minus dea iters
};

// Runs every solver on identical triplets and aggregates iteration counts.
inline CompareSummary run_comparison(const BenchConfig& cfg) {
    cfg.validate();
    CompareSummary summary;
    summary.records.reserve(static_cast<std::size_t>(cfg.trials));
    long long dea_iters = 0, dea_rec = 0, eea_iters = 0, eea_rec = 0, eea2_iters = 0;
    for (long t = 0; t < cfg.trials; ++t) {
        Triplet in = gen_triplet(cfg, t);
        TrialRecord rec;
        rec.trial = t;
        rec.a = in.a;
        rec.b = in.b;
        rec.c = in.c;
        auto dea = dea_solve(in.a, in.b, in.c);
        auto eea = eea_solve(in.a, in.b, in.c);
        auto eea2 = eea2_solve(in.a, in.b, in.c);
        rec.solvable = dea.solved();
        rec.dea = dea.metrics;
        rec.eea_i = eea.metrics;
        rec.eea_2 = eea2.metrics;
        dea_iters += rec.dea.loop_iterations;
        dea_rec += rec.dea.equivalent_recursions;
        eea_iters += rec.eea_i.loop_iterations;
        eea_rec += rec.eea_i.equivalent_recursions;
        eea2_iters += rec.eea_2.loop_iterations;
        ++summary.delta_histogram[rec.eea_i.loop_iterations - rec.dea.loop_iterations];
        summary.records.push_back(std::move(rec));
    }
    const double n = static_cast<double>(cfg.trials);
    summary.avg_dea_iters = static_cast<double>(dea_iters) / n;
    summary.avg_dea_recursions = static_cast<double>(dea_rec) / n;
    summary.avg_eea_i_iters = static_cast<double>(eea_iters) / n;
    summary.avg_eea_i_recursions = static_cast<double>(eea_rec) / n;
    summary.avg_eea2_iters = static_cast<double>(eea2_iters) / n;
    return summary;
}

struct GcdGroupRecord {
    BigInt g;
    long sample_count = 0;
    // Exact rational averaging of the period-based bound would drag
    // lcm-of-chain denominators through every addition, so that one column is
    // accumulated in floating point; the rest stay exact.
    double avg_bound_unsolv = 0;
    Rational avg_bound_gcd;
    Rational avg_k_plus_1;
    Rational avg_dea_iters;
    Rational avg_eea_iters;
};

// Sweeps g over [gcd_min, gcd_max] with the *total* operand size held near
// cfg.bits: the coprime core is drawn at bits - bitlen(g) so that g*a' stays
// comparable across groups, mirroring fixed-size pairs grouped by gcd. Every
// c is g*u and therefore solvable.
inline std::vector<GcdGroupRecord> run_gcd_sweep(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<GcdGroupRecord> out;
    std::uint64_t group_index = 0;
    for (BigInt g = cfg.gcd_min; g <= cfg.gcd_max; ++g, ++group_index) {
        const auto gbits = static_cast<unsigned>(bit_length(g));
        if (cfg.bits < gbits + 2)
            throw std::invalid_argument("gcd sweep: bits too small for the gcd range");
        const unsigned eff = cfg.bits - gbits;
        GcdGroupRecord rec;
        rec.g = g;
        rec.sample_count = cfg.trials;
        long long k_plus_1 = 0, dea_iters = 0, eea_iters = 0;
        Rational bound_gcd_sum = 0;
        double bound_unsolv_sum = 0;
        for (long t = 0; t < cfg.trials; ++t) {
            Xoshiro256StarStar rng(cfg.seed, group_index * static_cast<std::uint64_t>(cfg.trials) +
                                                 static_cast<std::uint64_t>(t));
            auto [a, b] = gen_gcd_pair(eff, g, rng);
            BigInt u = uniform_bigint(rng, 1, BigInt(1) << eff);
            BigInt c = g * u;
            auto dea = dea_solve(a, b, c);
            auto eea = eea_solve(a, b, c);
            auto seq = remainder_sequence(a, b);
            k_plus_1 += static_cast<long long>(seq.k()) + 1;
            dea_iters += dea.metrics.loop_iterations;
            eea_iters += eea.metrics.loop_iterations;
            bound_gcd_sum += bound_gcd(seq.k(), g);
            bound_unsolv_sum += bound_with_unsolvable(seq).convert_to<double>();
        }
        const Rational n(cfg.trials);
        rec.avg_bound_unsolv = bound_unsolv_sum / static_cast<double>(cfg.trials);
        rec.avg_bound_gcd = bound_gcd_sum / n;
        rec.avg_k_plus_1 = Rational(k_plus_1) / n;
        rec.avg_dea_iters = Rational(dea_iters) / n;
        rec.avg_eea_iters = Rational(eea_iters) / n;
        out.push_back(std::move(rec));
    }
    return out;
}

// ---- emission ---------------------------------------------------------------

// Fixed-point rendering with six fractional digits, rounding half away from
// zero; exact, so output bytes never depend on floating-point state.
inline std::string fixed6(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    bool negative = num < 0;
    if (negative) num = -num;
    BigInt scaled = num * 1000000;
    BigInt q = scaled / den;
    if (2 * (scaled % den) >= den) ++q;
    BigInt whole = q / 1000000;
    BigInt frac = q % 1000000;
    std::string fs = frac.str();
    fs.insert(fs.begin(), 6 - fs.size(), '0');
    return (negative && q != 0 ? "-" : "") + whole.str() + "." + fs;
}

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline constexpr const char* compare_csv_header =
    "trial,a,b,c,solvable,dea_iters,dea_recursions,eea_i_iters,eea_i_recursions,eea2_iters";
inline constexpr const char* sweep_csv_header =
    "g,samples,avg_bound_unsolv,avg_bound_gcd,avg_k_plus_1,avg_dea_iters,avg_eea_iters";

inline std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw io_error(path, "cannot open for writing");
    return file;
}

inline void emit_compare_csv(const std::vector<TrialRecord>& records, const std::string& path) {
    auto file = open_output(path);
    file << compare_csv_header << '\n';
    for (const auto& r : records) {
        file << r.trial << ',' << r.a.str() << ',' << r.b.str() << ',' << r.c.str() << ','
             << (r.solvable ? 1 : 0) << ',' << r.dea.loop_iterations << ','
             << r.dea.equivalent_recursions << ',' << r.eea_i.loop_iterations << ','
             << r.eea_i.equivalent_recursions << ',' << r.eea_2.loop_iterations << '\n';
    }
    if (!file.good()) throw io_error(path, "write failed");
}

inline void emit_sweep_csv(const std::vector<GcdGroupRecord>& records, const std::string& path) {
    auto file = open_output(path);
    file << sweep_csv_header << '\n';
    for (const auto& r : records) {
        file << r.g.str() << ',' << r.sample_count << ',' << fixed6(r.avg_bound_unsolv) << ','
             << fixed6(r.avg_bound_gcd) << ',' << fixed6(r.avg_k_plus_1) << ','
             << fixed6(r.avg_dea_iters) << ',' << fixed6(r.avg_eea_iters) << '\n';
    }
    if (!file.good()) throw io_error(path, "write failed");
}

inline std::string manifest_path_for(const std::string& csv_path) {
    return csv_path + ".manifest.jsonl";
}

// One JSON line per run: config echo, RNG identification, toolkit version.
// Nothing time- or host-dependent, so identical runs emit identical bytes.
inline void write_manifest(const BenchConfig& cfg, const std::string& csv_path) {
    nlohmann::json j;
    j["kind"] = "bench-manifest";
    j["mode"] = cfg.mode == BenchMode::compare ? "compare" : "gcd_sweep";
    j["bits"] = cfg.bits;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    if (cfg.mode == BenchMode::gcd_sweep) {
        j["gcd_min"] = cfg.gcd_min.str();
        j["gcd_max"] = cfg.gcd_max.str();
    }
    nlohmann::json solvers = nlohmann::json::array();
    for (SolverId id : cfg.solvers) solvers.push_back(solver_name(id));
    j["solvers"] = solvers;
    j["rng"] = rng_algorithm_name;
    j["schema"] = cfg.mode == BenchMode::compare ? compare_csv_header : sweep_csv_header;
    j["output"] = csv_path;
    j["version"] = version;
    const std::string path = manifest_path_for(csv_path);
    auto file = open_output(path);
    file << j.dump() << '\n';
    if (!file.good()) throw io_error(path, "write failed");
}

inline std::vector<TrialRecord> parse_compare_csv(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw io_error(path, "cannot open for reading");
    std::string line;
    if (!std::getline(file, line) || line != compare_csv_header)
        throw io_error(path, "unexpected header");
    std::vector<TrialRecord> records;
    while (std::getline(file, line)) {
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 10) throw io_error(path, "malformed row: " + line);
        TrialRecord r;
        r.trial = std::stol(fields[0]);
        r.a = BigInt(fields[1]);
        r.b = BigInt(fields[2]);
        r.c = BigInt(fields[3]);
        r.solvable = fields[4] == "1";
        r.dea = {std::stol(fields[5]), std::stol(fields[6]), SolverId::dea};
        r.eea_i = {std::stol(fields[7]), std::stol(fields[8]), SolverId::eea_i};
        r.eea_2 = {std::stol(fields[9]), std::stol(fields[9]), SolverId::eea_2};
        r.eea_2.equivalent_recursions = r.eea_2.loop_iterations + 1;
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace dioph
