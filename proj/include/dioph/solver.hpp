#pragma once

#include "dioph/integer.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dioph {

enum class SolverId { dea, eea_i, eea_2 };

constexpr const char* solver_name(SolverId id) {
    switch (id) {
        case SolverId::dea: return "dea";
        case SolverId::eea_i: return "eea";
        case SolverId::eea_2: return "eea2";
    }
    return "?";
}

// Loop/recursion accounting for one solver run. equivalent_recursions maps an
// iterative run back onto the recursive formulation: the Euclid-based solvers
// always make one more recursive call than first-loop iterations, while the
// divisibility-test solver makes exactly one call per test, with the
// no-solution branch counted as a final iteration.
struct Metrics {
    long loop_iterations = 0;
    long equivalent_recursions = 0;
    SolverId solver_id = SolverId::dea;
};

template <integer_like Int>
struct Equation {
    Int a, b, c;  // a*x + b*y = c
};

template <integer_like Int>
bool is_canonical(const Equation<Int>& eq) {
    return eq.a > eq.b && eq.b >= 1 && eq.c != 0;
}

// How an arbitrary equation was rewritten into canonical form (a > b >= 1).
// Applying the transform in reverse maps a canonical solution back onto the
// original equation.
struct NormalizationRecord {
    bool swapped = false;
    int sign_a = 1;
    int sign_b = 1;
    bool trivial_c_zero = false;
};

template <integer_like Int>
struct Normalized {
    Equation<Int> eq;
    NormalizationRecord record;
};

// Absorbs signs into x/y and orders the coefficients. Degenerate inputs
// (one coefficient zero after sign absorption, or |a| == |b|) come back with
// eq.b == 0 or eq.a == eq.b; callers route those to the single-variable path.
template <integer_like Int>
Normalized<Int> normalize(const Int& a, const Int& b, const Int& c) {
    if (a == 0 && b == 0) throw std::invalid_argument("normalize: a and b are both zero");
    NormalizationRecord rec;
    rec.sign_a = a < 0 ? -1 : 1;
    rec.sign_b = b < 0 ? -1 : 1;
    rec.trivial_c_zero = (c == 0);
    Int hi = abs_of(a), lo = abs_of(b);
    if (hi < lo) {
        std::swap(hi, lo);
        rec.swapped = true;
    }
    return {Equation<Int>{hi, lo, c}, rec};
}

template <integer_like Int>
struct SolutionPair {
    Int x, y;
    bool operator==(const SolutionPair&) const = default;
};

template <integer_like Int>
SolutionPair<Int> restore_solution(const NormalizationRecord& rec, const SolutionPair<Int>& s) {
    Int x = rec.swapped ? s.y : s.x;
    Int y = rec.swapped ? s.x : s.y;
    if (rec.sign_a < 0) x = -x;
    if (rec.sign_b < 0) y = -y;
    return {x, y};
}

// Arguments visited by Euclid's algorithm: terms a_1 > a_2 > ... > a_{k+1}
// with quotients q_i = a_i div a_{i+1}. The last term is gcd(a_1, a_2).
template <integer_like Int>
struct RemainderSequence {
    std::vector<Int> terms;
    std::vector<Int> quotients;

    std::size_t k() const { return quotients.size(); }
    const Int& gcd() const { return terms.back(); }
};

template <integer_like Int>
RemainderSequence<Int> remainder_sequence(const Int& a, const Int& b) {
    if (!(a > b && b >= 1))
        throw std::invalid_argument("remainder_sequence: requires a > b >= 1");
    RemainderSequence<Int> seq;
    seq.terms.push_back(a);
    Int hi = a, lo = b;
    while (lo != 0) {
        seq.terms.push_back(lo);
        seq.quotients.push_back(Int(hi / lo));
        Int r(hi % lo);
        hi = lo;
        lo = r;
    }
    return seq;
}

// One solution plus the step sizes that enumerate the whole family
// (x0 + m*step_x, y0 - m*step_y).
template <integer_like Int>
struct GeneralSolution {
    Int x0, y0;
    Int step_x, step_y;  // b/g and a/g

    SolutionPair<Int> at(const Int& m) const {
        return {Int(x0 + m * step_x), Int(y0 - m * step_y)};
    }
};

template <integer_like Int>
struct SolveReport {
    std::optional<SolutionPair<Int>> solution;
    std::optional<Int> unsolvable_gcd;
    Metrics metrics;

    bool solved() const { return solution.has_value(); }
};

// Solves a canonical equation by testing, along the Euclid chain, whether
// (c - a_i) is divisible by a_{i+1}; on a hit the solution is recovered by
// back-substitution through the stored chain prefix. The chain runs to
// exhaustion only when no index fires, which is exactly the unsolvable case,
// and then the surviving term is gcd(a, b).
template <integer_like Int>
SolveReport<Int> dea_solve(const Int& a, const Int& b, const Int& c) {
    if (!is_canonical(Equation<Int>{a, b, c}))
        throw std::invalid_argument("dea_solve: requires a > b >= 1 and c != 0");
    SolveReport<Int> report;
    report.metrics.solver_id = SolverId::dea;

    std::vector<Int> coef;  // a_1 .. a_{i-1} while scanning
    Int hi = a, lo = b;
    long tests = 0;
    for (;;) {
        ++tests;
        if (floor_mod(Int(c - hi), lo) == 0) break;
        coef.push_back(hi);
        Int r(hi % lo);
        hi = lo;
        lo = r;
        if (lo == 0) {
            report.unsolvable_gcd = hi;
            report.metrics.loop_iterations = tests + 1;
            report.metrics.equivalent_recursions = tests + 1;
            return report;
        }
    }
    coef.push_back(hi);
    Int y = exact_div(Int(c - hi), lo);
    for (std::size_t i = coef.size() - 1; i >= 1; --i)
        y = exact_div(Int(c - y * coef[i - 1]), coef[i]);
    Int x = exact_div(Int(c - b * y), a);
    report.solution = SolutionPair<Int>{x, y};
    report.metrics.loop_iterations = tests;
    report.metrics.equivalent_recursions = tests;
    return report;
}

template <integer_like Int>
struct GcdSolution {
    Int g, x, y;          // a*x + b*y = g
    long first_loop = 0;  // iterations of the quotient-collecting loop
};

// Extended Euclid with an explicit quotient stack, unwound from (1, 0).
template <integer_like Int>
GcdSolution<Int> eea_gcd_solve(const Int& a, const Int& b) {
    if (!(a > b && b >= 0))
        throw std::invalid_argument("eea_gcd_solve: requires a > b >= 0");
    std::vector<Int> quotients;
    Int hi = a, lo = b;
    while (lo != 0) {
        quotients.push_back(Int(hi / lo));
        Int r(hi % lo);
        hi = lo;
        lo = r;
    }
    Int x = 1, y = 0;
    for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) {
        Int t = x;
        x = y;
        y = Int(t - *it * y);
    }
    return {hi, x, y, static_cast<long>(quotients.size())};
}

template <integer_like Int>
SolveReport<Int> eea_solve(const Int& a, const Int& b, const Int& c) {
    if (!is_canonical(Equation<Int>{a, b, c}))
        throw std::invalid_argument("eea_solve: requires a > b >= 1 and c != 0");
    auto gs = eea_gcd_solve(a, b);
    SolveReport<Int> report;
    report.metrics = {gs.first_loop, gs.first_loop + 1, SolverId::eea_i};
    if (!divides(gs.g, c)) {
        report.unsolvable_gcd = gs.g;
        return report;
    }
    Int scale = exact_div(c, gs.g);
    report.solution = SolutionPair<Int>{Int(gs.x * scale), Int(gs.y * scale)};
    return report;
}

// Stackless Extended Euclid: carries both Bezout coefficient pairs forward,
// so the quotient chain is consumed in a single loop with no auxiliary
// storage.
template <integer_like Int>
SolveReport<Int> eea2_solve(const Int& a, const Int& b, const Int& c) {
    if (!is_canonical(Equation<Int>{a, b, c}))
        throw std::invalid_argument("eea2_solve: requires a > b >= 1 and c != 0");
    Int r0 = a, r1 = b;
    Int s0 = 1, s1 = 0;
    Int t0 = 0, t1 = 1;
    long iters = 0;
    while (r1 != 0) {
        Int q(r0 / r1);
        Int r2(r0 - q * r1);
        r0 = r1;
        r1 = r2;
        Int s2(s0 - q * s1);
        s0 = s1;
        s1 = s2;
        Int t2(t0 - q * t1);
        t0 = t1;
        t1 = t2;
        ++iters;
    }
    SolveReport<Int> report;
    report.metrics = {iters, iters + 1, SolverId::eea_2};
    if (!divides(r0, c)) {
        report.unsolvable_gcd = r0;
        return report;
    }
    Int scale = exact_div(c, r0);
    report.solution = SolutionPair<Int>{Int(s0 * scale), Int(t0 * scale)};
    return report;
}

template <integer_like Int>
GeneralSolution<Int> general_solution(const SolveReport<Int>& report, const Equation<Int>& eq) {
    if (!report.solved())
        throw std::invalid_argument("general_solution: report carries no solution");
    Int g = gcd_of(abs_of(eq.a), abs_of(eq.b));
    return {report.solution->x, report.solution->y, exact_div(eq.b, g), exact_div(eq.a, g)};
}

template <integer_like Int>
bool verify(const Int& a, const Int& b, const Int& c, const SolutionPair<Int>& s) {
    return a * s.x + b * s.y == c;
}

// Outcome of solving an arbitrary, possibly non-canonical equation. The
// solution, when present, is stated in the original variables.
template <integer_like Int>
struct AnySolveResult {
    SolveReport<Int> report;
    NormalizationRecord record;
    std::optional<Equation<Int>> canonical;  // set when a chain solver ran
};

// Front door for unrestricted inputs: handles c = 0, zero coefficients and
// |a| == |b| directly, and routes everything else through normalize and the
// requested solver.
template <integer_like Int>
AnySolveResult<Int> solve_any(const Int& a, const Int& b, const Int& c,
                              SolverId id = SolverId::dea) {
    if (a == 0 && b == 0) throw std::invalid_argument("solve_any: not an equation (a = b = 0)");
    AnySolveResult<Int> res;
    res.report.metrics.solver_id = id;
    if (c == 0) {
        res.record.trivial_c_zero = true;
        res.record.sign_a = a < 0 ? -1 : 1;
        res.record.sign_b = b < 0 ? -1 : 1;
        res.report.solution = SolutionPair<Int>{0, 0};
        return res;
    }
    if (a == 0 || b == 0 || abs_of(a) == abs_of(b)) {
        // single-variable divisibility case
        Int d = (a == 0) ? abs_of(b) : abs_of(a);
        if (!divides(d, c)) {
            res.report.unsolvable_gcd = d;
            return res;
        }
        if (a == 0)
            res.report.solution = SolutionPair<Int>{0, exact_div(c, b)};
        else
            res.report.solution = SolutionPair<Int>{exact_div(c, a), 0};
        return res;
    }
    auto norm = normalize(a, b, c);
    res.record = norm.record;
    res.canonical = norm.eq;
    SolveReport<Int> rep;
    switch (id) {
        case SolverId::dea: rep = dea_solve(norm.eq.a, norm.eq.b, norm.eq.c); break;
        case SolverId::eea_i: rep = eea_solve(norm.eq.a, norm.eq.b, norm.eq.c); break;
        case SolverId::eea_2: rep = eea2_solve(norm.eq.a, norm.eq.b, norm.eq.c); break;
    }
    res.report = rep;
    if (rep.solved()) res.report.solution = restore_solution(norm.record, *rep.solution);
    return res;
}

// Family of all solutions of the original (possibly non-canonical) equation,
// anchored at a known base solution. With b = 0 the step degenerates so that
// y runs over all integers, which is the correct family for a*x = c.
template <integer_like Int>
GeneralSolution<Int> general_solution_any(const Int& a, const Int& b,
                                          const SolutionPair<Int>& base) {
    Int g = gcd_of(abs_of(a), abs_of(b));
    if (g == 0) throw std::invalid_argument("general_solution_any: a = b = 0");
    return {base.x, base.y, exact_div(b, g), exact_div(a, g)};
}

}  // namespace dioph
