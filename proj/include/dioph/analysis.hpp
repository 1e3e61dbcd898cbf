#pragma once

#include "dioph/integer.hpp"
#include "dioph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dioph {

struct budget_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr long long default_enumeration_budget = 10'000'000;

// Arithmetic progression of the c values whose divisibility test can fire at
// chain index i: c ≡ residue (mod modulus) with modulus = a_{i+1} and
// residue = a_i mod a_{i+1} (that is, a_{i+2} for i < k and 0 for i = k).
template <integer_like Int>
struct CSetDescriptor {
    std::size_t index = 0;
    Int modulus{};
    Int residue{};
};

template <integer_like Int>
CSetDescriptor<Int> c_set(std::size_t i, const RemainderSequence<Int>& seq) {
    if (i < 1 || i > seq.k()) throw std::out_of_range("c_set: index outside 1..k");
    Int modulus = seq.terms[i];
    Int residue = i < seq.k() ? seq.terms[i + 1] : Int(0);
    return {i, modulus, residue};
}

// Smallest chain index whose progression contains c, or nothing when c lies
// in none of them (which is exactly the unsolvable case).
template <integer_like Int>
std::optional<std::size_t> min_index(const Int& c, const RemainderSequence<Int>& seq) {
    for (std::size_t i = 1; i <= seq.k(); ++i) {
        Int residue = i < seq.k() ? seq.terms[i + 1] : Int(0);
        if (floor_mod(c, seq.terms[i]) == residue) return i;
    }
    return std::nullopt;
}

struct RecursionCount {
    long count = 0;
    bool solvable = false;
};

// Divisibility-test count of the chain solver, without materializing the
// solution. Matches dea_solve's equivalent_recursions on every input; on
// unsolvable c the count is k + 1, flagged accordingly.
template <integer_like Int>
RecursionCount recursion_count(const Int& a, const Int& b, const Int& c) {
    if (!is_canonical(Equation<Int>{a, b, c}))
        throw std::invalid_argument("recursion_count: requires a > b >= 1 and c != 0");
    Int hi = a, lo = b;
    long tests = 0;
    for (;;) {
        ++tests;
        if (floor_mod(Int(c - hi), lo) == 0) return {tests, true};
        Int r(hi % lo);
        hi = lo;
        lo = r;
        if (lo == 0) return {tests + 1, false};
    }
}

struct PeriodReport {
    BigInt L;                                  // lcm(a_2, ..., a_{k+1})
    std::vector<BigInt> factors;               // a_2 .. a_{k+1}
    std::optional<bool> empirically_minimal;   // unset until a divisor scan ran
};

template <integer_like Int>
PeriodReport fundamental_period(const RemainderSequence<Int>& seq) {
    PeriodReport rep;
    rep.L = 1;
    for (std::size_t i = 1; i < seq.terms.size(); ++i) {
        BigInt t = to_big(seq.terms[i]);
        rep.factors.push_back(t);
        rep.L = lcm_of(rep.L, t);
    }
    return rep;
}

inline std::vector<std::uint64_t> proper_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> divs;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        divs.push_back(d);
        if (d != n / d) divs.push_back(n / d);
    }
    std::sort(divs.begin(), divs.end());
    divs.pop_back();  // drop n itself
    return divs;
}

struct PeriodicityReport {
    BigInt L;
    bool periodic = false;
    long long compared = 0;    // solvable c values whose counts were compared
    long long mismatches = 0;
    std::vector<std::uint64_t> premature_periods;  // proper divisors of L that also shift-match
    std::uint64_t minimal_period = 0;
};

// Checks count(c + L) == count(c) for every solvable c in [1, span*L] by
// running the solver loop on both sides, then scans every proper divisor of L
// for a premature period over the recorded one-period table. The scan uses
// the operational counts (unsolvable c keeps its k+1 marker), so a divisor
// qualifies only if it preserves both solvability and the count.
template <integer_like Int>
PeriodicityReport verify_periodicity(const Int& a, const Int& b, long span = 1,
                                     long long budget = default_enumeration_budget) {
    auto seq = remainder_sequence(a, b);
    auto period = fundamental_period(seq);
    if (span < 1) throw std::invalid_argument("verify_periodicity: span must be >= 1");
    if (period.L * span > budget)
        throw budget_exceeded("verify_periodicity: period " + period.L.str() +
                              " exceeds enumeration budget");
    PeriodicityReport rep;
    rep.L = period.L;
    const auto L = period.L.template convert_to<std::uint64_t>();

    std::vector<std::uint16_t> counts(L);
    for (std::uint64_t c = 1; c <= L * static_cast<std::uint64_t>(span); ++c) {
        RecursionCount lhs = recursion_count(a, b, Int(c));
        RecursionCount rhs = recursion_count(a, b, Int(c + L));
        if (c <= L) counts[c - 1] = static_cast<std::uint16_t>(lhs.count);
        if (lhs.solvable != rhs.solvable) {
            ++rep.mismatches;
            continue;
        }
        if (!lhs.solvable) continue;
        ++rep.compared;
        if (lhs.count != rhs.count) ++rep.mismatches;
    }
    rep.periodic = rep.mismatches == 0;

    rep.minimal_period = L;
    for (std::uint64_t d : proper_divisors(L)) {
        bool shift_matches = true;
        for (std::uint64_t i = 0; i < L && shift_matches; ++i)
            shift_matches = counts[i] == counts[(i + d) % L];
        if (shift_matches) rep.premature_periods.push_back(d);
    }
    if (!rep.premature_periods.empty()) rep.minimal_period = rep.premature_periods.front();
    return rep;
}

// Exact per-period accounting of the count function: n_i values of c hit
// index i first, n' values hit no index (unsolvable, costing k + 1).
struct AverageReport {
    std::vector<long long> n_counts;  // n_1 .. n_k
    long long n_prime = 0;
    BigInt L;
    Rational exact_average;

    // Eq-style sum with the n' term dropped (every c assumed solvable).
    Rational solvable_mass_average() const {
        BigInt num = 0;
        for (std::size_t i = 0; i < n_counts.size(); ++i) num += BigInt(i + 1) * n_counts[i];
        return Rational(num, L);
    }
    // Mean count over the solvable c only.
    Rational solvable_conditional_average() const {
        BigInt num = 0, solvable = 0;
        for (std::size_t i = 0; i < n_counts.size(); ++i) {
            num += BigInt(i + 1) * n_counts[i];
            solvable += n_counts[i];
        }
        if (solvable == 0) throw std::logic_error("no solvable c in a full period");
        return Rational(num, solvable);
    }
};

template <integer_like Int>
AverageReport exact_average(const Int& a, const Int& b,
                            long long budget = default_enumeration_budget) {
    auto seq = remainder_sequence(a, b);
    auto period = fundamental_period(seq);
    if (period.L > budget)
        throw budget_exceeded("exact_average: period " + period.L.str() +
                              " exceeds enumeration budget");
    const auto L = period.L.template convert_to<std::uint64_t>();
    const std::size_t k = seq.k();

    // All moduli divide L <= budget, so the scan runs on machine words.
    std::vector<std::uint64_t> mods(k), residues(k);
    for (std::size_t i = 1; i <= k; ++i) {
        auto desc = c_set(i, seq);
        mods[i - 1] = to_big(desc.modulus).template convert_to<std::uint64_t>();
        residues[i - 1] = to_big(desc.residue).template convert_to<std::uint64_t>();
    }

    AverageReport rep;
    rep.L = period.L;
    rep.n_counts.assign(k, 0);
    for (std::uint64_t c = 1; c <= L; ++c) {
        std::size_t hit = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (c % mods[i] == residues[i]) {
                hit = i + 1;
                break;
            }
        }
        if (hit)
            ++rep.n_counts[hit - 1];
        else
            ++rep.n_prime;
    }
    BigInt num = 0;
    for (std::size_t i = 0; i < k; ++i) num += BigInt(i + 1) * rep.n_counts[i];
    num += BigInt(k + 1) * rep.n_prime;
    rep.exact_average = Rational(num, rep.L);
    return rep;
}

// ---- upper bounds on the average count ------------------------------------
//
// All bound evaluations are exact rationals; the golden-ratio derived
// constant is pinned as 57/25.

inline const Rational& fib_bound_constant() {
    static const Rational c(57, 25);  // 2.28
    return c;
}

// (1/L) * sum_i i*(L/a_{i+1} + 1): every c assumed solvable (n' = 0).
template <integer_like Int>
Rational bound_solvable_counts(const RemainderSequence<Int>& seq) {
    BigInt L = fundamental_period(seq).L;
    Rational sum = 0;
    for (std::size_t i = 1; i <= seq.k(); ++i)
        sum += Rational(i) * (Rational(L, to_big(seq.terms[i])) + 1);
    return sum / Rational(L);
}

// Adds the unsolvable mass n' = L - L/a_{k+1} at weight k + 1.
template <integer_like Int>
Rational bound_with_unsolvable(const RemainderSequence<Int>& seq) {
    BigInt L = fundamental_period(seq).L;
    BigInt g = to_big(seq.gcd());
    Rational sum = 0;
    for (std::size_t i = 1; i <= seq.k(); ++i)
        sum += Rational(i) * (Rational(L, to_big(seq.terms[i])) + 1);
    sum += Rational(seq.k() + 1) * Rational(L - L / g);
    return sum / Rational(L);
}

// Large-period limit: sum_i i/a_{i+1} + (k+1)(a_{k+1}-1)/a_{k+1}.
template <integer_like Int>
Rational bound_limit(const RemainderSequence<Int>& seq) {
    Rational sum = 0;
    for (std::size_t i = 1; i <= seq.k(); ++i)
        sum += Rational(BigInt(i), to_big(seq.terms[i]));
    BigInt g = to_big(seq.gcd());
    sum += Rational(seq.k() + 1) * Rational(g - 1, g);
    return sum;
}

// Fibonacci-floor form of the limit bound: 2.28*k/g + (k+1)(g-1)/g.
inline Rational bound_fib(std::size_t k, const BigInt& g) {
    return fib_bound_constant() * Rational(BigInt(k), g) + Rational(k + 1) * Rational(g - 1, g);
}

// Solvable-only form: 2.28*k/g.
inline Rational bound_gcd(std::size_t k, const BigInt& g) {
    return fib_bound_constant() * Rational(BigInt(k), g);
}

// Expected-value envelope over random coprime-or-not inputs of size n:
// 2.28*log2(n)*(18/pi^2)*(1 - 1/n^4). Irrational factors make this a
// floating-point quantity, unlike the per-instance bounds above.
inline double bound_expected(const BigInt& n) {
    if (n < 2) throw std::invalid_argument("bound_expected: requires n >= 2");
    constexpr double pi = 3.14159265358979323846;
    double log2n;
    double correction;
    if (bit_length(n) <= 512) {
        double d = n.convert_to<double>();
        log2n = std::log2(d);
        correction = 1.0 - 1.0 / (d * d * d * d);
    } else {
        log2n = static_cast<double>(bit_length(n));
        correction = 1.0;
    }
    return 2.28 * log2n * (18.0 / (pi * pi)) * correction;
}

struct BoundsReport {
    Rational bound_solvable_counts;
    Rational bound_with_unsolvable;
    Rational bound_limit;
    Rational bound_fib;
    Rational bound_gcd;
    std::optional<double> bound_expected;  // needs a_2 >= 2
    std::size_t k = 0;
    BigInt gcd;
};

template <integer_like Int>
BoundsReport bounds_report(const RemainderSequence<Int>& seq) {
    BoundsReport rep;
    rep.k = seq.k();
    rep.gcd = to_big(seq.gcd());
    rep.bound_solvable_counts = bound_solvable_counts(seq);
    rep.bound_with_unsolvable = bound_with_unsolvable(seq);
    rep.bound_limit = bound_limit(seq);
    rep.bound_fib = bound_fib(rep.k, rep.gcd);
    rep.bound_gcd = bound_gcd(rep.k, rep.gcd);
    BigInt n = to_big(seq.terms[1]);
    if (n >= 2) rep.bound_expected = bound_expected(n);
    return rep;
}

// Fibonacci numbers indexed from F_1 = 0, F_2 = 1.
inline BigInt fibonacci(std::size_t i) {
    if (i < 1) throw std::invalid_argument("fibonacci: index starts at 1");
    if (i == 1) return 0;
    BigInt prev = 0, cur = 1;
    for (std::size_t j = 2; j < i; ++j) {
        BigInt next = prev + cur;
        prev = cur;
        cur = next;
    }
    return cur;
}

// Chain-length floor: a_1 >= g*F_{k+2} and a_2 >= g*F_{k+1}.
template <integer_like Int>
bool fibonacci_check(const RemainderSequence<Int>& seq, const Int& g) {
    BigInt gg = to_big(g);
    return to_big(seq.terms[0]) >= gg * fibonacci(seq.k() + 2) &&
           to_big(seq.terms[1]) >= gg * fibonacci(seq.k() + 1);
}

// ---- intersections of the index progressions -------------------------------

// True iff gcd(a_i, a_j) is the same for every pair of chain terms.
template <integer_like Int>
bool crt_condition(const RemainderSequence<Int>& seq) {
    if (seq.k() < 2) throw std::invalid_argument("crt_condition: needs k >= 2");
    BigInt expected = 0;
    bool first = true;
    for (std::size_t i = 0; i < seq.terms.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.terms.size(); ++j) {
            BigInt g = gcd_of(to_big(seq.terms[i]), to_big(seq.terms[j]));
            if (first) {
                expected = g;
                first = false;
            } else if (g != expected) {
                return false;
            }
        }
    }
    return true;
}

struct Congruence {
    BigInt residue;  // normalized into [0, modulus)
    BigInt modulus;
};

// Merge two congruences; empty when the residues disagree modulo the gcd of
// the moduli. The merged modulus is the lcm.
inline std::optional<Congruence> crt_merge(const Congruence& p, const Congruence& q) {
    const BigInt& m1 = p.modulus;
    const BigInt& m2 = q.modulus;
    BigInt g, bezout_m1;
    if (m1 == m2) {
        g = m1;
        bezout_m1 = 0;
    } else if (m1 > m2) {
        auto gs = eea_gcd_solve(m1, m2);
        g = gs.g;
        bezout_m1 = gs.x;
    } else {
        auto gs = eea_gcd_solve(m2, m1);
        g = gs.g;
        bezout_m1 = gs.y;
    }
    BigInt diff = q.residue - p.residue;
    if (diff % g != 0) return std::nullopt;
    BigInt m2_red = m2 / g;
    if (m2_red == 1) return Congruence{p.residue, lcm_of(m1, m2)};
    // x = p.residue + m1 * t with t chosen so x hits q's progression
    BigInt t = floor_mod(BigInt(diff / g * bezout_m1), m2_red);
    BigInt merged_mod = m1 * m2_red;
    return Congruence{floor_mod(BigInt(p.residue + m1 * t), merged_mod), merged_mod};
}

struct IntersectionReport {
    bool condition_holds = false;                    // pairwise-gcd equality
    std::optional<BigInt> witness;                   // least positive common c
    std::optional<BigInt> cardinality_per_period;    // solutions per window of length L
    std::optional<std::pair<std::size_t, std::size_t>> blocking_pair;  // first clashing (j, l)
};

template <integer_like Int>
std::vector<Congruence> chain_congruences(const RemainderSequence<Int>& seq) {
    std::vector<Congruence> cs;
    cs.reserve(seq.k());
    for (std::size_t i = 1; i <= seq.k(); ++i) {
        auto desc = c_set(i, seq);
        cs.push_back({to_big(desc.residue), to_big(desc.modulus)});
    }
    return cs;
}

// Searches for a c common to every index progression by checking pairwise
// compatibility of the congruence system and, when compatible, merging it
// down to a single progression.
template <integer_like Int>
IntersectionReport crt_witness(const RemainderSequence<Int>& seq) {
    if (seq.k() < 1) throw std::invalid_argument("crt_witness: needs k >= 1");
    IntersectionReport rep;
    rep.condition_holds = seq.k() >= 2 ? crt_condition(seq) : true;
    auto cs = chain_congruences(seq);
    for (std::size_t j = 0; j < cs.size(); ++j) {
        for (std::size_t l = j + 1; l < cs.size(); ++l) {
            BigInt g = gcd_of(cs[j].modulus, cs[l].modulus);
            if ((cs[l].residue - cs[j].residue) % g != 0) {
                rep.blocking_pair = {j + 1, l + 1};
                return rep;
            }
        }
    }
    Congruence merged = cs.front();
    for (std::size_t i = 1; i < cs.size(); ++i) {
        auto next = crt_merge(merged, cs[i]);
        if (!next) throw std::logic_error("crt_witness: merge failed after pairwise check");
        merged = *next;
    }
    BigInt L = fundamental_period(seq).L;
    rep.witness = merged.residue == 0 ? merged.modulus : merged.residue;
    rep.cardinality_per_period = L / merged.modulus;
    return rep;
}

// Number of c in a period window that lie in every progression of the given
// subset of indices; 0 when the congruences clash.
template <integer_like Int>
BigInt intersection_cardinality(const RemainderSequence<Int>& seq,
                                const std::vector<std::size_t>& subset) {
    if (subset.empty()) throw std::invalid_argument("intersection_cardinality: empty subset");
    std::optional<Congruence> merged;
    for (std::size_t i : subset) {
        auto desc = c_set(i, seq);
        Congruence cong{to_big(desc.residue), to_big(desc.modulus)};
        if (!merged) {
            merged = cong;
            continue;
        }
        merged = crt_merge(*merged, cong);
        if (!merged) return 0;
    }
    BigInt L = fundamental_period(seq).L;
    return L / merged->modulus;
}

}  // namespace dioph
