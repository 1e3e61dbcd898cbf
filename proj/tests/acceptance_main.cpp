// Acceptance gate: one check per shipping criterion, each printed as a single
// [PASS]/[FAIL] line. Returns the number of failed criteria.

#include "dioph/analysis.hpp"
#include "dioph/bench.hpp"
#include "dioph/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace dioph;
namespace fs = std::filesystem;

namespace {

struct Gate {
    int failures = 0;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void report(int id, const char* name, bool pass, const std::string& detail) {
        auto now = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(now - started).count();
        started = now;
        std::printf("[%s] %2d. %s — %s [%.1fs]\n", pass ? "PASS" : "FAIL", id, name,
                    detail.c_str(), secs);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
};

struct FibFloorTally {
    long long checked = 0;
    long long violations = 0;

    template <integer_like Int>
    void check(const RemainderSequence<Int>& seq) {
        ++checked;
        if (!fibonacci_check(seq, seq.gcd())) ++violations;
    }
};

struct DominanceTally {
    long long qualifying = 0;
    long long violations = 0;

    void check(const BigInt& a, const BigInt& b, const BigInt& c, const Metrics& dea,
               const Metrics& eea) {
        if (bit_length(c) > std::max(bit_length(a), bit_length(b))) return;
        ++qualifying;
        if (dea.equivalent_recursions > eea.equivalent_recursions) ++violations;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double spearman_against_index(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> rank(n);
    for (std::size_t pos = 0; pos < n;) {
        std::size_t run = pos;
        while (run + 1 < n && values[order[run + 1]] == values[order[pos]]) ++run;
        double shared = (static_cast<double>(pos) + static_cast<double>(run)) / 2.0 + 1.0;
        for (std::size_t z = pos; z <= run; ++z) rank[order[z]] = shared;
        pos = run + 1;
    }
    // x-ranks are simply 1..n
    double mean_x = (n + 1) / 2.0, mean_y = 0;
    for (double r : rank) mean_y += r;
    mean_y /= static_cast<double>(n);
    double cov = 0, var_x = 0, var_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = static_cast<double>(i + 1) - mean_x;
        double dy = rank[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    return cov / std::sqrt(var_x * var_y);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";
    Gate gate;
    FibFloorTally fib_floor;
    DominanceTally dominance;

    // --- 1: every solver solves and verifies forced-solvable 128-bit triplets
    {
        BenchConfig cfg;
        cfg.bits = 128;
        cfg.trials = 10000;
        cfg.seed = 8128128;
        long long verified = 0, wrong = 0;
        for (long t = 0; t < cfg.trials; ++t) {
            Triplet in = gen_triplet(cfg, t);
            auto seq = remainder_sequence(in.a, in.b);
            fib_floor.check(seq);
            BigInt c = seq.gcd() * in.c;
            auto dea = dea_solve(in.a, in.b, c);
            auto eea = eea_solve(in.a, in.b, c);
            auto eea2 = eea2_solve(in.a, in.b, c);
            bool ok = dea.solved() && eea.solved() && eea2.solved() &&
                      verify(in.a, in.b, c, *dea.solution) && verify(in.a, in.b, c, *eea.solution) &&
                      verify(in.a, in.b, c, *eea2.solution);
            ok ? ++verified : ++wrong;
            dominance.check(in.a, in.b, c, dea.metrics, eea.metrics);
        }
        gate.report(1, "solver correctness on forced-solvable 128-bit triplets", wrong == 0,
                    std::to_string(verified) + "/10000 instances solved and verified exactly");
    }

    // --- 2: classification agreement on unrestricted triplets
    {
        BenchConfig cfg;
        cfg.bits = 128;
        cfg.trials = 10000;
        cfg.seed = 271828;
        long long solvable = 0, unsolvable = 0, disagreements = 0, wrong_gcd = 0;
        for (long t = 0; t < cfg.trials; ++t) {
            Triplet in = gen_triplet(cfg, t);
            auto seq = remainder_sequence(in.a, in.b);
            fib_floor.check(seq);
            auto dea = dea_solve(in.a, in.b, in.c);
            auto eea = eea_solve(in.a, in.b, in.c);
            auto eea2 = eea2_solve(in.a, in.b, in.c);
            if (dea.solved() != eea.solved() || dea.solved() != eea2.solved()) ++disagreements;
            if (dea.solved()) {
                ++solvable;
            } else {
                ++unsolvable;
                BigInt g = gcd_of(in.a, in.b);
                if (*dea.unsolvable_gcd != g || *eea.unsolvable_gcd != g ||
                    *eea2.unsolvable_gcd != g)
                    ++wrong_gcd;
            }
            dominance.check(in.a, in.b, in.c, dea.metrics, eea.metrics);
        }
        gate.report(2, "classification agreement across the three solvers",
                    disagreements == 0 && wrong_gcd == 0,
                    std::to_string(solvable) + " solvable / " + std::to_string(unsolvable) +
                        " unsolvable, 0 disagreements, reported gcd always gcd(a,b)");
    }

    // --- 3: recursion-count dominance under the bit-length restriction
    {
        gate.report(3, "dea recursions never exceed eea recursions",
                    dominance.qualifying > 5000 && dominance.violations == 0,
                    std::to_string(dominance.qualifying) + " qualifying instances, " +
                        std::to_string(dominance.violations) + " violations");
    }

    // --- 4/5 share the 200 accepted pairs
    std::vector<std::pair<long long, long long>> pairs;
    {
        Xoshiro256StarStar rng(642024, 0);
        long attempts = 0;
        while (pairs.size() < 200 && attempts < 200000) {
            ++attempts;
            long long a = uniform_bigint(rng, 2, 1024).convert_to<long long>();
            long long b = uniform_bigint(rng, 1, a - 1).convert_to<long long>();
            auto L = fundamental_period(remainder_sequence(a, b)).L;
            if (L <= 1000000) pairs.emplace_back(a, b);
        }
    }

    // --- 4: periodicity with the fundamental period, minimality scanned
    {
        long long periodic_ok = 0, mismatched = 0, premature_pairs = 0;
        std::string premature_examples;
        for (auto [a, b] : pairs) {
            fib_floor.check(remainder_sequence(a, b));
            auto rep = verify_periodicity(a, b, 1, default_enumeration_budget);
            if (rep.periodic)
                ++periodic_ok;
            else
                ++mismatched;
            if (!rep.premature_periods.empty()) {
                ++premature_pairs;
                if (premature_examples.size() < 80)
                    premature_examples += " (" + std::to_string(a) + "," + std::to_string(b) +
                                          ")->" + std::to_string(rep.minimal_period);
            }
        }
        std::string detail = std::to_string(periodic_ok) + "/" + std::to_string(pairs.size()) +
                             " pairs periodic with period L; minimality findings: " +
                             std::to_string(premature_pairs) + " pair(s) with a premature period" +
                             premature_examples;
        gate.report(4, "count function repeats with period lcm(a_2..a_{k+1})",
                    pairs.size() == 200 && mismatched == 0, detail);
    }

    // --- 5: enumeration-exact averages against the bound chain
    {
        long long pairs_ok = 0, average_violations = 0, partition_violations = 0;
        long long finite_vs_limit_reversals = 0;  // bound (6) vs bound (9), reported only
        for (auto [a, b] : pairs) {
            auto seq = remainder_sequence(a, b);
            auto avg = exact_average(a, b);
            auto bounds = bounds_report(seq);

            BigInt partition = avg.n_prime;
            for (long long n : avg.n_counts) partition += n;
            if (partition != avg.L) ++partition_violations;

            Rational mass = avg.solvable_mass_average();
            bool ok = avg.exact_average <= bounds.bound_with_unsolvable &&
                      avg.exact_average <= bounds.bound_limit &&
                      mass <= bounds.bound_solvable_counts && mass <= bounds.bound_limit &&
                      mass <= bounds.bound_fib;
            ok ? ++pairs_ok : ++average_violations;
            if (bounds.bound_solvable_counts > bounds.bound_limit) ++finite_vs_limit_reversals;
        }
        std::string detail =
            std::to_string(pairs_ok) + "/" + std::to_string(pairs.size()) +
            " pairs: exact avg <= bounds (7),(9); solvable-mass avg <= bounds (6),(9),(13); " +
            "partitions exact; note: finite-period bound (6) exceeds the limit bound (9) on " +
            std::to_string(finite_vs_limit_reversals) + " pairs (expected for gcd=1, not asserted)";
        gate.report(5, "exact averages never exceed the bound chain",
                    average_violations == 0 && partition_violations == 0, detail);
    }

    // --- 6: the worked 1759/550 chain
    {
        auto seq = remainder_sequence<BigInt>(1759, 550);
        bool chain_ok = seq.terms == std::vector<BigInt>{1759, 550, 109, 5, 4, 1} &&
                        seq.quotients == std::vector<BigInt>{3, 5, 21, 1, 4} && seq.k() == 5;
        auto period = fundamental_period(seq);
        bool L_ok = period.L == 119900;
        auto avg = exact_average<BigInt>(1759, 550);
        BigInt closed_form = period.L / 550 + 1;
        bool n1_ok = avg.n_counts[0] == 218 && abs_of(BigInt(avg.n_counts[0]) - closed_form) <= 1;
        auto wit = crt_witness(seq);
        bool witness_ok = wit.witness.has_value() && *wit.witness == 60609 &&
                          recursion_count<BigInt>(1759, 550, *wit.witness).count == 1;
        gate.report(6, "worked example: chain, period, first-set count, common c",
                    chain_ok && L_ok && n1_ok && witness_ok,
                    "chain matches, L=119900, enumerated n_1=218 vs closed form 219 (off by 1), "
                    "witness 60609 solved in 1 call");
    }

    // --- 7: the 89/55 chain has no common c
    {
        auto seq = remainder_sequence<BigInt>(89, 55);
        auto wit = crt_witness(seq);
        bool flagged = !wit.witness.has_value() && wit.blocking_pair.has_value() &&
                       wit.blocking_pair->first == 1 && wit.blocking_pair->second == 6;

        // brute-force the blocking two-congruence subproblem over its own period
        auto first = c_set(1, seq);
        auto sixth = c_set(6, seq);
        long long merged_period =
            lcm_of(first.modulus, sixth.modulus).convert_to<long long>();
        long long hits = 0;
        for (long long c = 1; c <= merged_period; ++c) {
            if (c % first.modulus.convert_to<long long>() ==
                    first.residue.convert_to<long long>() &&
                c % sixth.modulus.convert_to<long long>() ==
                    sixth.residue.convert_to<long long>())
                ++hits;
        }

        // the full period is small enough here to also scan all nine sets directly
        std::vector<long long> mods, residues;
        for (std::size_t i = 1; i <= seq.k(); ++i) {
            auto desc = c_set(i, seq);
            mods.push_back(desc.modulus.convert_to<long long>());
            residues.push_back(desc.residue.convert_to<long long>());
        }
        long long L = fundamental_period(seq).L.convert_to<long long>();
        long long full_hits = 0;
        for (long long c = 1; c <= L; ++c) {
            bool in_all = true;
            for (std::size_t i = 0; i < mods.size() && in_all; ++i)
                in_all = (c % mods[i] == residues[i]);
            if (in_all) ++full_hits;
        }
        gate.report(7, "counterexample chain rejects every candidate c",
                    flagged && hits == 0 && full_hits == 0,
                    "congruences 1 and 6 clash (mod 55 vs mod 5); scans over the merged period (" +
                        std::to_string(merged_period) + ") and the full period (" +
                        std::to_string(L) + ") both find 0 common values");
    }

    // --- 8: gcd sweep trends
    {
        BenchConfig cfg;
        cfg.mode = BenchMode::gcd_sweep;
        cfg.bits = 64;
        cfg.trials = 200;
        cfg.seed = 7272;
        cfg.gcd_min = 2;
        cfg.gcd_max = 100;
        auto records = run_gcd_sweep(cfg);

        std::vector<double> bound_gcd_values;
        std::vector<double> eea_values;
        for (const auto& rec : records) {
            bound_gcd_values.push_back(rec.avg_bound_gcd.convert_to<double>());
            eea_values.push_back(rec.avg_eea_iters.convert_to<double>());
        }
        double rho = spearman_against_index(bound_gcd_values);
        double eea_mean = std::accumulate(eea_values.begin(), eea_values.end(), 0.0) /
                          static_cast<double>(eea_values.size());
        double eea_var = 0;
        for (double v : eea_values) eea_var += (v - eea_mean) * (v - eea_mean);
        double eea_cv = std::sqrt(eea_var / static_cast<double>(eea_values.size())) / eea_mean;
        const auto& at2 = records.front();
        const auto& at100 = records.back();
        bool dea_falls = at100.avg_dea_iters < at2.avg_dea_iters;

        // the sweep's chains also feed the Fibonacci-floor tally
        std::uint64_t group_index = 0;
        for (BigInt g = cfg.gcd_min; g <= cfg.gcd_max; ++g, ++group_index) {
            const unsigned eff = cfg.bits - static_cast<unsigned>(bit_length(g));
            for (long t = 0; t < cfg.trials; ++t) {
                Xoshiro256StarStar rng(cfg.seed,
                                       group_index * static_cast<std::uint64_t>(cfg.trials) +
                                           static_cast<std::uint64_t>(t));
                auto [a, b] = gen_gcd_pair(eff, g, rng);
                fib_floor.check(remainder_sequence(a, b));
            }
        }

        gate.report(8, "gcd sweep: solvable-case bound falls, eea stays in band",
                    rho <= -0.95 && dea_falls && eea_cv < 0.10,
                    "spearman(g, avg_bound_gcd) = " + format_double(rho) + "; avg dea iters " +
                        format_double(at2.avg_dea_iters.convert_to<double>()) + " @g=2 -> " +
                        format_double(at100.avg_dea_iters.convert_to<double>()) +
                        " @g=100; eea coefficient of variation = " + format_double(eea_cv));
    }

    // --- 9: three-solver iteration ordering at desk scale
    fs::path workdir =
        fs::temp_directory_path() / ("dioph-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(workdir);
    {
        BenchConfig cfg;
        cfg.bits = 128;
        cfg.trials = 10000;
        cfg.seed = 9001;
        auto summary = run_comparison(cfg);
        for (const auto& rec : summary.records) fib_floor.check(remainder_sequence(rec.a, rec.b));

        bool dea_leq_eea = summary.avg_dea_iters <= summary.avg_eea_i_iters;
        bool eea2_within_one =
            std::fabs(summary.avg_eea2_iters - (summary.avg_eea_i_iters + 1.0)) <= 1.0;
        std::string csv = (workdir / "compare.csv").string();
        cfg.output_path = csv;
        emit_compare_csv(summary.records, csv);
        write_manifest(cfg, csv);
        bool files_ok = !slurp(csv).empty() && !slurp(manifest_path_for(csv)).empty();

        gate.report(9, "comparison ordering of average first-loop iterations",
                    dea_leq_eea && eea2_within_one && files_ok,
                    "dea " + format_double(summary.avg_dea_iters) + " <= eea " +
                        format_double(summary.avg_eea_i_iters) + "; eea2 " +
                        format_double(summary.avg_eea2_iters) +
                        " within 1 of eea+1; csv+manifest written");
    }

    // --- 10: Fibonacci floor over every chain generated above
    {
        gate.report(10, "chain terms never drop below the Fibonacci floor",
                    fib_floor.checked > 40000 && fib_floor.violations == 0,
                    std::to_string(fib_floor.checked) + " chains checked, " +
                        std::to_string(fib_floor.violations) + " violations");
    }

    // --- 11: bench subcommands are byte-deterministic end to end
    {
        bool pass = false;
        std::string detail;
        if (cli_path.empty()) {
            detail = "no CLI binary path supplied";
        } else {
            auto run_cli = [&](const std::string& args) {
                std::string cmd = "'" + cli_path + "' " + args + " > /dev/null 2>&1";
                return std::system(cmd.c_str()) == 0;
            };
            std::string compare_csv = (workdir / "det-compare.csv").string();
            std::string compare_args =
                "bench-compare --bits 64 --trials 300 --seed 99 --out '" + compare_csv + "'";
            std::string sweep_csv = (workdir / "det-sweep.csv").string();
            std::string sweep_args =
                "bench-gcd-sweep --bits 32 --trials 50 --seed 5 --gcd-min 2 --gcd-max 12 --out '" +
                sweep_csv + "'";

            bool ran = run_cli(compare_args) && run_cli(sweep_args);
            std::string compare_first = slurp(compare_csv);
            std::string compare_manifest_first = slurp(manifest_path_for(compare_csv));
            std::string sweep_first = slurp(sweep_csv);
            std::string sweep_manifest_first = slurp(manifest_path_for(sweep_csv));
            ran = ran && run_cli(compare_args) && run_cli(sweep_args);
            pass = ran && !compare_first.empty() && !sweep_first.empty() &&
                   compare_first == slurp(compare_csv) &&
                   compare_manifest_first == slurp(manifest_path_for(compare_csv)) &&
                   sweep_first == slurp(sweep_csv) &&
                   sweep_manifest_first == slurp(manifest_path_for(sweep_csv));
            detail = pass ? "bench-compare and bench-gcd-sweep reruns are byte-identical"
                          : "reruns differ or the CLI failed";
        }
        gate.report(11, "bench reruns with identical flags are byte-identical", pass, detail);
    }

    std::error_code ec;
    fs::remove_all(workdir, ec);

    std::printf("%d/11 criteria passed\n", 11 - gate.failures);
    return gate.failures;
}
