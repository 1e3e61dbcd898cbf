#pragma once

#include "CLI11.hpp"
#include "json.hpp"

#include "dioph/analysis.hpp"
#include "dioph/bench.hpp"
#include "dioph/integer.hpp"
#include "dioph/solver.hpp"
#include "dioph/version.hpp"

#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dioph::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_unsolvable = 2;
inline constexpr int exit_budget = 3;
inline constexpr int exit_io = 4;

namespace detail {

inline SolverId solver_from_name(const std::string& name) {
    if (name == "dea") return SolverId::dea;
    if (name == "eea") return SolverId::eea_i;
    if (name == "eea2") return SolverId::eea_2;
    throw std::invalid_argument("unknown solver: " + name);
}

inline nlohmann::json rational_json(const Rational& r) {
    return {{"exact", r.str()}, {"approx", r.convert_to<double>()}};
}

inline std::string rational_text(const Rational& r) {
    return r.str() + " (" + fixed6(r) + ")";
}

// Canonical pair for the analysis subcommands; |a| and |b| ordered, both
// positive and distinct.
inline std::pair<BigInt, BigInt> analysis_pair(const BigInt& a, const BigInt& b) {
    BigInt hi = abs_of(a), lo = abs_of(b);
    if (hi < lo) std::swap(hi, lo);
    if (!(hi > lo && lo >= 1))
        throw std::invalid_argument("needs two distinct nonzero integers");
    return {hi, lo};
}

inline std::string default_output_dir() {
    if (const char* dir = std::getenv("DIOPH_OUT_DIR")) return dir;
    return ".";
}

inline std::string signed_term(const BigInt& step) {
    if (step < 0) return "(" + step.str() + ")";
    return step.str();
}

}  // namespace detail

inline int cmd_solve(const BigInt& a, const BigInt& b, const BigInt& c, const std::string& solver,
                     bool general, bool json, std::ostream& out) {
    SolverId id = detail::solver_from_name(solver);
    auto res = solve_any(a, b, c, id);
    BigInt g = gcd_of(abs_of(a), abs_of(b));
    std::optional<GeneralSolution<BigInt>> family;
    if (general && res.report.solved())
        family = general_solution_any(a, b, *res.report.solution);

    if (json) {
        nlohmann::json j;
        j["a"] = a.str();
        j["b"] = b.str();
        j["c"] = c.str();
        j["solver"] = solver_name(id);
        j["solved"] = res.report.solved();
        j["gcd"] = g.str();
        j["loop_iterations"] = res.report.metrics.loop_iterations;
        j["equivalent_recursions"] = res.report.metrics.equivalent_recursions;
        if (res.report.solved()) {
            j["x"] = res.report.solution->x.str();
            j["y"] = res.report.solution->y.str();
        }
        if (family) {
            j["general"] = {{"x0", family->x0.str()},
                            {"y0", family->y0.str()},
                            {"step_x", family->step_x.str()},
                            {"step_y", family->step_y.str()}};
        }
        out << j.dump() << '\n';
    } else if (res.report.solved()) {
        out << "x = " << res.report.solution->x << "\n";
        out << "y = " << res.report.solution->y << "\n";
        out << "gcd = " << g << "\n";
        out << "solver = " << solver_name(id) << ", loop_iterations = "
            << res.report.metrics.loop_iterations
            << ", equivalent_recursions = " << res.report.metrics.equivalent_recursions << "\n";
        if (family) {
            out << "general solution: x = " << family->x0 << " + " << detail::signed_term(family->step_x)
                << "*m, y = " << family->y0 << " - " << detail::signed_term(family->step_y)
                << "*m\n";
        }
    } else {
        out << "unsolvable: gcd=" << *res.report.unsolvable_gcd << " does not divide c\n";
        out << "solver = " << solver_name(id) << ", loop_iterations = "
            << res.report.metrics.loop_iterations
            << ", equivalent_recursions = " << res.report.metrics.equivalent_recursions << "\n";
    }
    return res.report.solved() ? exit_ok : exit_unsolvable;
}

inline int cmd_trace(const BigInt& a, const BigInt& b, const BigInt& c, std::ostream& out) {
    out << "equation: " << a << "*x + " << b << "*y = " << c << "\n";
    if (c == 0) {
        out << "c = 0: trivial solution x = 0, y = 0\n";
        return exit_ok;
    }
    if (a == 0 || b == 0 || abs_of(a) == abs_of(b)) {
        auto res = solve_any(a, b, c);
        if (res.report.solved()) {
            out << "single-variable case: x = " << res.report.solution->x
                << ", y = " << res.report.solution->y << "\n";
            return exit_ok;
        }
        out << "single-variable case: " << *res.report.unsolvable_gcd
            << " is the gcd of the original inputs; c is not a multiple of it -> no solution\n";
        return exit_unsolvable;
    }
    auto norm = normalize(a, b, c);
    const BigInt A = norm.eq.a, B = norm.eq.b;
    if (norm.record.swapped || norm.record.sign_a < 0 || norm.record.sign_b < 0)
        out << "canonical form: " << A << "*x' + " << B << "*y' = " << c << "\n";

    BigInt hi = A, lo = B;
    std::vector<BigInt> coef;
    long index = 0;
    bool solvable = true;
    for (;;) {
        ++index;
        BigInt rem = floor_mod(BigInt(c - hi), lo);
        out << "i=" << index << ": (c - " << hi << ") mod " << lo << " = " << rem
            << (rem == 0 ? " -> fires\n" : " -> continue\n");
        if (rem == 0) break;
        coef.push_back(hi);
        BigInt r = hi % lo;
        hi = lo;
        lo = r;
        if (lo == 0) {
            solvable = false;
            out << "b = 0: " << hi
                << " is the gcd of the original inputs; c is not a multiple of it -> no solution\n";
            break;
        }
    }
    if (!solvable) return exit_unsolvable;

    coef.push_back(hi);
    BigInt y = exact_div(BigInt(c - hi), lo);
    out << "back-substitution: y = (c - " << hi << ")/" << lo << " = " << y << "\n";
    for (std::size_t i = coef.size() - 1; i >= 1; --i) {
        y = exact_div(BigInt(c - y * coef[i - 1]), coef[i]);
        out << "back-substitution: y = (c - y*" << coef[i - 1] << ")/" << coef[i] << " = " << y
            << "\n";
    }
    BigInt x = exact_div(BigInt(c - B * y), A);
    SolutionPair<BigInt> restored = restore_solution(norm.record, SolutionPair<BigInt>{x, y});
    out << "solution: x = " << restored.x << ", y = " << restored.y << "\n";
    return exit_ok;
}

inline int cmd_period(const BigInt& a, const BigInt& b, long verify_span, long long budget,
                      bool json, std::ostream& out) {
    auto [hi, lo] = detail::analysis_pair(a, b);
    auto seq = remainder_sequence(hi, lo);
    auto period = fundamental_period(seq);
    std::optional<PeriodicityReport> verified;
    if (verify_span > 0) {
        // enumeration runs on machine words whenever the values allow it
        if (bit_length(hi) <= 31 && budget < (1LL << 60))
            verified = verify_periodicity(hi.convert_to<long long>(),
                                          lo.convert_to<long long>(), verify_span, budget);
        else
            verified = verify_periodicity(hi, lo, verify_span, budget);
    }

    if (json) {
        nlohmann::json j;
        j["a"] = hi.str();
        j["b"] = lo.str();
        j["L"] = period.L.str();
        nlohmann::json factors = nlohmann::json::array();
        for (const auto& f : period.factors) factors.push_back(f.str());
        j["factors"] = factors;
        if (verified) {
            j["verified"] = {{"periodic", verified->periodic},
                            {"compared", verified->compared},
                            {"mismatches", verified->mismatches},
                            {"minimal_period", verified->minimal_period},
                            {"premature_periods", verified->premature_periods}};
        }
        out << j.dump() << '\n';
    } else {
        out << "L = " << period.L << "\n";
        out << "factors:";
        for (const auto& f : period.factors) out << ' ' << f;
        out << "\n";
        if (verified) {
            out << "periodic: " << (verified->periodic ? "yes" : "NO") << " (compared "
                << verified->compared << " solvable values, " << verified->mismatches
                << " mismatches)\n";
            if (verified->premature_periods.empty()) {
                out << "minimal period: " << verified->minimal_period
                    << " (no proper divisor of L acts as a period)\n";
            } else {
                out << "minimal period: " << verified->minimal_period
                    << " (premature periods found:";
                for (auto d : verified->premature_periods) out << ' ' << d;
                out << ")\n";
            }
        }
    }
    return exit_ok;
}

inline int cmd_bounds(const BigInt& a, const BigInt& b, bool json, std::ostream& out) {
    auto [hi, lo] = detail::analysis_pair(a, b);
    auto seq = remainder_sequence(hi, lo);
    auto rep = bounds_report(seq);
    if (json) {
        nlohmann::json j;
        j["k"] = rep.k;
        j["gcd"] = rep.gcd.str();
        j["bound_solvable_counts"] = detail::rational_json(rep.bound_solvable_counts);
        j["bound_with_unsolvable"] = detail::rational_json(rep.bound_with_unsolvable);
        j["bound_limit"] = detail::rational_json(rep.bound_limit);
        j["bound_fib"] = detail::rational_json(rep.bound_fib);
        j["bound_gcd"] = detail::rational_json(rep.bound_gcd);
        if (rep.bound_expected) j["bound_expected"] = *rep.bound_expected;
        out << j.dump() << '\n';
    } else {
        out << "k = " << rep.k << ", gcd = " << rep.gcd << "\n";
        out << "bound_solvable_counts = " << detail::rational_text(rep.bound_solvable_counts)
            << "\n";
        out << "bound_with_unsolvable = " << detail::rational_text(rep.bound_with_unsolvable)
            << "\n";
        out << "bound_limit = " << detail::rational_text(rep.bound_limit) << "\n";
        out << "bound_fib = " << detail::rational_text(rep.bound_fib) << "\n";
        out << "bound_gcd = " << detail::rational_text(rep.bound_gcd) << "\n";
        if (rep.bound_expected) out << "bound_expected(n = " << seq.terms[1] << ") = "
                                    << fixed6(*rep.bound_expected) << "\n";
    }
    return exit_ok;
}

inline int cmd_avg(const BigInt& a, const BigInt& b, long long budget, bool json,
                   std::ostream& out) {
    auto [hi, lo] = detail::analysis_pair(a, b);
    auto rep = exact_average(hi, lo, budget);
    if (json) {
        nlohmann::json j;
        j["L"] = rep.L.str();
        j["n"] = rep.n_counts;
        j["n_prime"] = rep.n_prime;
        j["exact_average"] = detail::rational_json(rep.exact_average);
        j["solvable_mass_average"] = detail::rational_json(rep.solvable_mass_average());
        j["solvable_conditional_average"] =
            detail::rational_json(rep.solvable_conditional_average());
        out << j.dump() << '\n';
    } else {
        out << "L = " << rep.L << "\n";
        for (std::size_t i = 0; i < rep.n_counts.size(); ++i)
            out << "n_" << (i + 1) << " = " << rep.n_counts[i] << "\n";
        out << "n' = " << rep.n_prime << "\n";
        out << "exact_average = " << detail::rational_text(rep.exact_average) << "\n";
        out << "solvable_mass_average = " << detail::rational_text(rep.solvable_mass_average())
            << "\n";
        out << "solvable_conditional_average = "
            << detail::rational_text(rep.solvable_conditional_average()) << "\n";
    }
    return exit_ok;
}

inline int cmd_crt(const BigInt& a, const BigInt& b, bool json, std::ostream& out) {
    auto [hi, lo] = detail::analysis_pair(a, b);
    auto seq = remainder_sequence(hi, lo);
    auto rep = crt_witness(seq);
    if (json) {
        nlohmann::json j;
        j["condition_holds"] = rep.condition_holds;
        if (rep.witness) {
            j["witness"] = rep.witness->str();
            j["cardinality_per_period"] = rep.cardinality_per_period->str();
        } else {
            j["witness"] = nullptr;
            if (rep.blocking_pair)
                j["blocking_pair"] = {rep.blocking_pair->first, rep.blocking_pair->second};
        }
        out << j.dump() << '\n';
    } else {
        out << "pairwise gcds equal: " << (rep.condition_holds ? "yes" : "no") << "\n";
        if (rep.witness) {
            out << "common c: " << *rep.witness << " (" << *rep.cardinality_per_period
                << " per period)\n";
        } else {
            out << "no common c: congruences for indices " << rep.blocking_pair->first << " and "
                << rep.blocking_pair->second << " are incompatible\n";
        }
    }
    return exit_ok;
}

inline int cmd_bench_compare(BenchConfig cfg, bool json, std::ostream& out) {
    cfg.mode = BenchMode::compare;
    if (cfg.output_path.empty())
        cfg.output_path = detail::default_output_dir() + "/compare.csv";
    auto summary = run_comparison(cfg);
    emit_compare_csv(summary.records, cfg.output_path);
    write_manifest(cfg, cfg.output_path);
    if (json) {
        nlohmann::json j;
        j["output"] = cfg.output_path;
        j["manifest"] = manifest_path_for(cfg.output_path);
        j["trials"] = cfg.trials;
        j["avg_dea_iters"] = summary.avg_dea_iters;
        j["avg_dea_recursions"] = summary.avg_dea_recursions;
        j["avg_eea_i_iters"] = summary.avg_eea_i_iters;
        j["avg_eea_i_recursions"] = summary.avg_eea_i_recursions;
        j["avg_eea2_iters"] = summary.avg_eea2_iters;
        out << j.dump() << '\n';
    } else {
        out << "wrote " << cfg.output_path << " and " << manifest_path_for(cfg.output_path)
            << " (" << cfg.trials << " trials)\n";
        out << "avg dea iters = " << fixed6(summary.avg_dea_iters)
            << ", avg dea recursions = " << fixed6(summary.avg_dea_recursions) << "\n";
        out << "avg eea iters = " << fixed6(summary.avg_eea_i_iters)
            << ", avg eea recursions = " << fixed6(summary.avg_eea_i_recursions) << "\n";
        out << "avg eea2 iters = " << fixed6(summary.avg_eea2_iters) << "\n";
        out << "delta histogram (eea iters - dea iters):";
        int shown = 0;
        for (const auto& [delta, count] : summary.delta_histogram) {
            out << ' ' << delta << ':' << count;
            if (++shown >= 12) {
                out << " ...";
                break;
            }
        }
        out << "\n";
    }
    return exit_ok;
}

inline int cmd_bench_gcd_sweep(BenchConfig cfg, bool json, std::ostream& out) {
    cfg.mode = BenchMode::gcd_sweep;
    if (cfg.output_path.empty())
        cfg.output_path = detail::default_output_dir() + "/gcd_sweep.csv";
    auto records = run_gcd_sweep(cfg);
    emit_sweep_csv(records, cfg.output_path);
    write_manifest(cfg, cfg.output_path);
    if (json) {
        nlohmann::json j;
        j["output"] = cfg.output_path;
        j["manifest"] = manifest_path_for(cfg.output_path);
        j["groups"] = records.size();
        j["samples_per_group"] = cfg.trials;
        out << j.dump() << '\n';
    } else {
        out << "wrote " << cfg.output_path << " and " << manifest_path_for(cfg.output_path)
            << " (" << records.size() << " gcd groups, " << cfg.trials << " samples each)\n";
        if (!records.empty()) {
            const auto& first = records.front();
            const auto& last = records.back();
            out << "avg_bound_gcd: g=" << first.g << " -> " << fixed6(first.avg_bound_gcd)
                << ", g=" << last.g << " -> " << fixed6(last.avg_bound_gcd) << "\n";
            out << "avg_dea_iters: g=" << first.g << " -> " << fixed6(first.avg_dea_iters)
                << ", g=" << last.g << " -> " << fixed6(last.avg_dea_iters) << "\n";
        }
    }
    return exit_ok;
}

// Parses and dispatches one invocation. Exit codes: 0 solved/success,
// 1 usage, 2 unsolvable, 3 enumeration budget exceeded, 4 I/O failure.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"two-variable linear Diophantine equation toolkit"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "machine-readable JSON output");

    std::string a_str, b_str, c_str;
    std::string solver = "dea";
    bool general = false;
    long verify_span = 0;
    long long budget = default_enumeration_budget;

    auto add_pair = [&](CLI::App* sub) {
        sub->fallthrough();
        sub->add_option("a", a_str, "coefficient a")->required();
        sub->add_option("b", b_str, "coefficient b")->required();
    };
    auto add_triplet = [&](CLI::App* sub) {
        add_pair(sub);
        sub->add_option("c", c_str, "right-hand side c")->required();
    };

    auto* solve = app.add_subcommand("solve", "solve a*x + b*y = c");
    add_triplet(solve);
    solve->add_option("--solver", solver, "dea, eea or eea2")
        ->check(CLI::IsMember({"dea", "eea", "eea2"}));
    solve->add_flag("--general", general, "also print the full solution family");

    auto* trace = app.add_subcommand("trace", "show the divisibility tests and back-substitution");
    add_triplet(trace);

    auto* period = app.add_subcommand("period", "fundamental period of the count function");
    add_pair(period);
    period->add_flag("--verify{1}", verify_span,
                     "check the period by enumeration over the given number of periods");
    period->add_option("--budget", budget, "enumeration budget (values per scan)");

    auto* bounds = app.add_subcommand("bounds", "evaluate the average-count bounds");
    add_pair(bounds);

    auto* avg = app.add_subcommand("avg", "exact average count over one period");
    add_pair(avg);
    avg->add_option("--budget", budget, "enumeration budget (values per scan)");

    auto* crt = app.add_subcommand("crt", "common c across all index progressions");
    add_pair(crt);

    BenchConfig cfg;
    std::string gcd_min_str = "2", gcd_max_str = "100";
    auto add_bench_flags = [&](CLI::App* sub, long default_trials, unsigned default_bits) {
        sub->fallthrough();
        cfg.bits = default_bits;
        cfg.trials = default_trials;
        sub->add_option("--bits", cfg.bits, "operand size in bits");
        sub->add_option("--trials", cfg.trials, "trials (per gcd group in sweep mode)");
        sub->add_option("--seed", cfg.seed, "64-bit RNG seed");
        sub->add_option("--out", cfg.output_path, "output CSV path (default $DIOPH_OUT_DIR)");
    };
    auto* bench_compare = app.add_subcommand("bench-compare", "three-solver iteration comparison");
    add_bench_flags(bench_compare, 10000, 128);
    auto* bench_sweep = app.add_subcommand("bench-gcd-sweep", "per-gcd averages sweep");
    add_bench_flags(bench_sweep, 200, 64);
    bench_sweep->add_option("--gcd-min", gcd_min_str, "first gcd group");
    bench_sweep->add_option("--gcd-max", gcd_max_str, "last gcd group");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (solve->parsed() || trace->parsed()) {
            BigInt a = parse_integer(a_str), b = parse_integer(b_str), c = parse_integer(c_str);
            if (solve->parsed()) return cmd_solve(a, b, c, solver, general, json, out);
            return cmd_trace(a, b, c, out);
        }
        if (period->parsed() || bounds->parsed() || avg->parsed() || crt->parsed()) {
            BigInt a = parse_integer(a_str), b = parse_integer(b_str);
            if (period->parsed()) return cmd_period(a, b, verify_span, budget, json, out);
            if (bounds->parsed()) return cmd_bounds(a, b, json, out);
            if (avg->parsed()) return cmd_avg(a, b, budget, json, out);
            return cmd_crt(a, b, json, out);
        }
        if (bench_compare->parsed()) return cmd_bench_compare(cfg, json, out);
        cfg.gcd_min = parse_integer(gcd_min_str);
        cfg.gcd_max = parse_integer(gcd_max_str);
        return cmd_bench_gcd_sweep(cfg, json, out);
    } catch (const budget_exceeded& e) {
        err << "error: " << e.what() << "\n";
        return exit_budget;
    } catch (const io_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

}  // namespace dioph::cli
