#pragma once

// Decides p-local solvability of a U^2 + c W^2 = d Z^2, U W = V^2 for every
// prime, plus real solvability, and aggregates the results.
//
// The engine is the equivalence calculus on coefficient triples:
//
//   (a,c,d) ~ (c,a,d) ~ (pa,pc,pd) ~ (ap^2,cp^2,d) ~ (a,c,dp^2)
//           ~ (ap^4,c,d) ~ (a,cp^4,d)
//
// which reduces any system to a terminal one with p coprime to a, p^4
// coprime to c and p^2 coprime to d.  Terminal systems are decided by
// constructive strong-solution searches:
//
//   (a,c,d)      always solvable for odd p (conic parametrization)
//   (a,cp,d)     solvable iff d/a is a square mod p        -> (s,0,0,1)
//   (a,cp^3,d)   same test as (a,cp,d)
//   (a,c,dp)     solvable iff -c/a has a square root that is itself a
//                square mod p                              -> (r,sqrt r,1,0)
//   (a,cp^2,d)   solvable iff d/a or d/c0 is a square; the second branch
//                produces a witness for the companion system (ap^2,c0,d)
//   (a,cp^2,dp)  never solvable
//
// For p = 2 every non-impossible terminal case is decided by exhaustive
// strong-solution search modulo 16, which is exactly the right modulus:
// a strong solution mod 2^4 lifts to all 2^k, and 2-local solvability
// forces one to exist.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hasse/conics.hpp"
#include "hasse/lifting.hpp"
#include "hasse/modarith.hpp"
#include "hasse/system.hpp"

namespace hasse {

namespace detail {

inline i64 checked_mul(i64 x, i64 y) {
    __int128 r = __int128(x) * y;
    if (r >= __int128(kMaxModulus) || r <= -__int128(kMaxModulus))
        throw InvalidInput("coefficient overflow during reduction");
    return i64(r);
}

inline int sign(i64 x) { return (x > 0) - (x < 0); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Real solvability
// ---------------------------------------------------------------------------

struct RealVerdict {
    bool solvable = false;
    std::string witness;
};

// Closed-form real solvability.  Normalizing W = 1 turns the system into
// h(s) = a s^2 + b s + c = d z^2 with s = U >= 0 (since U = U*W = V^2), so
// the system is solvable over R iff h attains the sign of d (or 0) on
// [0, inf), or sign(a) = sign(d) for the W = 0 branch.  The extrema of h on
// [0, inf) are h(0) = c, the vertex value (4ac - b^2)/(4a) when the vertex
// lies at s > 0, and the leading behaviour sign(a).
inline RealVerdict real_solvable(const SystemCoeffs& coeffs) {
    using detail::sign;
    if (coeffs.d == 0) throw InvalidInput("real_solvable: d must be nonzero");
    if (coeffs.a == 0 || coeffs.c == 0)
        throw InvalidInput("real_solvable: a, c must be nonzero");
    const i64 a = coeffs.a, b = coeffs.b, c = coeffs.c, d = coeffs.d;
    if (sign(a) == sign(d))
        return {true, "leading term: a s^2 + b s + c has the sign of d for large s"};
    if (sign(c) == sign(d))
        return {true, "h(0) = c has the sign of d: solution (0, 0, 1, sqrt(c/d))"};
    if (b != 0 && sign(b) != sign(a)) {  // vertex at s = -b/(2a) > 0
        __int128 disc = __int128(4) * a * c - __int128(b) * b;
        int vsign = (disc > 0) - (disc < 0);
        if (vsign == 0)
            return {true, "vertex value 0 at s = -b/(2a): solution with z = 0"};
        if (vsign * sign(a) == sign(d))
            return {true, "vertex value (4ac-b^2)/(4a) has the sign of d"};
    }
    return {false, "a s^2 + b s + c never attains the sign of d on s >= 0"};
}

// ---------------------------------------------------------------------------
// Coefficient reduction (the equivalence calculus)
// ---------------------------------------------------------------------------

enum class LocalCase { Unit, CP, CP2, CP3, DP, Impossible };

inline const char* to_string(LocalCase t) {
    switch (t) {
        case LocalCase::Unit: return "(a,c,d)";
        case LocalCase::CP: return "(a,cp,d)";
        case LocalCase::CP2: return "(a,cp^2,d)";
        case LocalCase::CP3: return "(a,cp^3,d)";
        case LocalCase::DP: return "(a,c,dp)";
        case LocalCase::Impossible: return "(a,cp^2,dp)";
    }
    return "?";
}

struct ReductionStep {
    std::string rule;
    i64 a, c, d;  // triple after the move
};

struct ReductionTranscript {
    i64 p = 0;
    i64 a0 = 0, c0 = 0, d0 = 0;           // input triple
    std::vector<ReductionStep> steps;
    i64 a = 0, c = 0, d = 0;              // terminal triple
    LocalCase terminal = LocalCase::Unit;
    i64 cu = 0, du = 0;                   // unit parts of c and d
    int gamma = 0, delta = 0;             // valuations of c and d
};

// Normalize (a, c, d) with the equivalence generators until p | a fails,
// p^4 | c fails and p^2 | d fails, then apply the two second-stage rewrites
// that remove the (c odd-power, d one-power) mixed shapes.
inline ReductionTranscript reduce_system(i64 a, i64 c, i64 d, i64 p) {
    if (!is_prime(p)) throw InvalidInput("reduce_system: p must be prime");
    if (a == 0 || c == 0 || d == 0) throw InvalidInput("reduce_system: acd must be nonzero");
    if (p > (i64(1) << 30)) throw InvalidInput("reduce_system: prime too large");
    const i64 p2 = p * p;
    // p^4 overflows for p beyond ~2^15; no 64-bit coefficient is divisible
    // by such a power, so 0 serves as an "unreachable" sentinel
    const i64 p4 = p2 < (i64(1) << 31) ? p2 * p2 : 0;

    ReductionTranscript tr;
    tr.p = p;
    tr.a0 = a; tr.c0 = c; tr.d0 = d;
    tr.a = a; tr.c = c; tr.d = d;
    auto rec = [&](const std::string& rule) { tr.steps.push_back({rule, tr.a, tr.c, tr.d}); };

    while (tr.a % p == 0 && tr.c % p == 0) {
        tr.d = detail::checked_mul(tr.d, p2);
        rec("(a,c,d) -> (a,c,dp^2)");
        tr.a /= p; tr.c /= p; tr.d /= p;
        rec("(pa,pc,pd) -> (a,c,d)");
        while (tr.d % p2 == 0) {
            tr.d /= p2;
            rec("(a,c,dp^2) -> (a,c,d)");
        }
    }
    if (tr.a % p == 0) {
        std::swap(tr.a, tr.c);
        rec("(a,c,d) -> (c,a,d)");
    }
    while (p4 != 0 && tr.c % p4 == 0) {
        tr.c /= p4;
        rec("(a,cp^4,d) -> (a,c,d)");
    }
    while (tr.d % p2 == 0) {
        tr.d /= p2;
        rec("(a,c,dp^2) -> (a,c,d)");
    }

    int gamma = tr.c % p == 0 ? valuation(tr.c, p) : 0;
    int delta = tr.d % p == 0 ? valuation(tr.d, p) : 0;

    // second stage: (a, c p, d p) and (a, c p^3, d p) still mix the powers;
    // push them into the c slot
    if (delta == 1 && (gamma == 1 || gamma == 3)) {
        tr.a = detail::checked_mul(detail::checked_mul(tr.a, p2), p2);
        rec("(a,c,d) -> (ap^4,c,d)");
        if (gamma == 3) {
            tr.a /= p2; tr.c /= p2;
            rec("(ap^2,cp^2,d) -> (a,c,d)");
        }
        tr.a /= p; tr.c /= p; tr.d /= p;
        rec("(pa,pc,pd) -> (a,c,d)");
        std::swap(tr.a, tr.c);
        rec("(a,c,d) -> (c,a,d)");
        gamma = tr.c % p == 0 ? valuation(tr.c, p) : 0;
        delta = 0;
    }

    tr.gamma = gamma;
    tr.delta = delta;
    tr.cu = tr.c;
    for (int i = 0; i < gamma; ++i) tr.cu /= p;
    tr.du = tr.d;
    for (int i = 0; i < delta; ++i) tr.du /= p;

    if (delta == 1) {
        tr.terminal = gamma == 0 ? LocalCase::DP : LocalCase::Impossible;
    } else {
        switch (gamma) {
            case 0: tr.terminal = LocalCase::Unit; break;
            case 1: tr.terminal = LocalCase::CP; break;
            case 2: tr.terminal = LocalCase::CP2; break;
            default: tr.terminal = LocalCase::CP3; break;
        }
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Strong solution searches
// ---------------------------------------------------------------------------

// Least strong solution of the system modulo m in lexicographic (u,v,w,z)
// order, or nullopt.  m must be an odd prime or 16.
inline std::optional<SolutionQuadruple> strong_search_mod(const SystemCoeffs& coeffs, i64 m) {
    i64 p;
    int k;
    if (m == 16) {
        p = 2; k = 4;
    } else {
        if (m < 3 || m % 2 == 0 || !is_prime(m))
            throw InvalidInput("strong_search_mod: modulus must be an odd prime or 16");
        if (m > 101) throw BudgetExceeded("strong_search_mod: modulus too large for full scan");
        p = m; k = 1;
    }
    i64 a = mod_reduce(coeffs.a, m), b = mod_reduce(coeffs.b, m);
    i64 c = mod_reduce(coeffs.c, m), d = mod_reduce(coeffs.d, m);
    std::vector<std::vector<i64>> dz2(m);
    for (i64 z = 0; z < m; ++z) dz2[mul_mod(d, mul_mod(z, z, m), m)].push_back(z);
    for (i64 u = 0; u < m; ++u) {
        for (i64 v = 0; v < m; ++v) {
            i64 v2 = mul_mod(v, v, m);
            i64 lhs_uv = add_mod(mul_mod(a, mul_mod(u, u, m), m), mul_mod(b, v2, m), m);
            for (i64 w = 0; w < m; ++w) {
                if (mul_mod(u, w, m) != v2) continue;
                i64 lhs = add_mod(lhs_uv, mul_mod(c, mul_mod(w, w, m), m), m);
                for (i64 z : dz2[lhs]) {
                    if (classify_solution(u, v, w, z, coeffs, p, k) == Classification::Strong) {
                        SolutionQuadruple s{u, v, w, z, m, Classification::Strong};
                        return s;
                    }
                }
            }
        }
    }
    return std::nullopt;
}

// Shortcut search modulo 16 for odd a, c, d: any primitive solution mod 16
// forces one with u, v, w in {0,1} and z in {0,..,3}.  Kept as a fast path;
// the full scan above is the oracle it is tested against.
inline std::optional<SolutionQuadruple> strong_search_mod16_restricted(const SystemCoeffs& coeffs) {
    if (coeffs.a % 2 == 0 || coeffs.c % 2 == 0 || coeffs.d % 2 == 0)
        throw InvalidInput("strong_search_mod16_restricted: a, c, d must be odd");
    for (i64 u = 0; u <= 1; ++u)
        for (i64 v = 0; v <= 1; ++v)
            for (i64 w = 0; w <= 1; ++w)
                for (i64 z = 0; z <= 3; ++z) {
                    if (!solves_mod(coeffs, u, v, w, z, 16)) continue;
                    if (classify_solution(u, v, w, z, coeffs, 2, 4) == Classification::Strong)
                        return SolutionQuadruple{u, v, w, z, 16, Classification::Strong};
                }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Per-prime decision
// ---------------------------------------------------------------------------

struct PLocalDecision {
    i64 p = 0;
    bool solvable = false;
    ReductionTranscript transcript;
    std::optional<SolutionQuadruple> witness;  // strong solution mod p (odd) or mod 16
    bool companion = false;                    // witness solves (ap^2, c0, d) instead
    SystemCoeffs witness_system;               // the system the witness certifies
};

// Decide p-local solvability of (a, c, d) and produce a checkable witness.
inline PLocalDecision decide_p_local(i64 a, i64 c, i64 d, i64 p) {
    PLocalDecision out;
    out.p = p;
    out.transcript = reduce_system(a, c, d, p);
    const ReductionTranscript& tr = out.transcript;
    const i64 A = tr.a, C = tr.c, D = tr.d;
    out.witness_system = {A, 0, C, D};

    if (tr.terminal == LocalCase::Impossible) {
        out.solvable = false;
        return out;
    }

    if (p == 2) {
        out.witness = strong_search_mod({A, 0, C, D}, 16);
        if (!out.witness && tr.terminal == LocalCase::CP2) {
            SystemCoeffs comp{detail::checked_mul(A, 4), 0, tr.cu, D};
            out.witness = strong_search_mod(comp, 16);
            if (out.witness) {
                out.companion = true;
                out.witness_system = comp;
            }
        }
        out.solvable = out.witness.has_value();
        return out;
    }

    auto sqrt_ratio = [&](i64 num, i64 den) -> std::optional<i64> {
        i64 t = mul_mod(mod_reduce(num, p), inverse_mod(mod_reduce(den, p), p), p);
        return sqrt_mod_p(t, p);
    };
    auto finish = [&](SolutionQuadruple s, const SystemCoeffs& sys) {
        s.modulus = p;
        s.classification = classify_solution(s, sys, p, 1);
        if (!solves_mod(sys, s.u, s.v, s.w, s.z, p) ||
            s.classification != Classification::Strong)
            throw IdentityCheckFailed("decide_p_local: constructed witness invalid");
        out.witness = s;
        out.solvable = true;
    };

    switch (tr.terminal) {
        case LocalCase::Unit: {
            SolutionQuadruple s = solve_system_fp(A, C, D, p);
            finish(s, {A, 0, C, D});
            break;
        }
        case LocalCase::CP:
        case LocalCase::CP3: {
            if (auto s = sqrt_ratio(D, A)) finish({*s, 0, 0, 1}, {A, 0, C, D});
            break;
        }
        case LocalCase::DP: {
            // strong solution needs u = r*w with r^2 = -c/a and r a square
            if (auto s = sqrt_ratio(-C, A)) {
                i64 r = 0;
                if (detail::legendre_nocheck(*s, p) == 1) r = *s;
                else if (detail::legendre_nocheck(p - *s, p) == 1) r = p - *s;
                if (r != 0) {
                    i64 v = *sqrt_mod_p(r, p);
                    finish({r, v, 1, 0}, {A, 0, C, D});
                }
            }
            break;
        }
        case LocalCase::CP2: {
            if (auto s = sqrt_ratio(D, A)) {
                finish({*s, 0, 0, 1}, {A, 0, C, D});
            } else if (auto s2 = sqrt_ratio(D, tr.cu)) {
                SystemCoeffs comp{detail::checked_mul(A, p * p), 0, tr.cu, D};
                out.companion = true;
                out.witness_system = comp;
                finish({0, 0, *s2, 1}, comp);
            }
            break;
        }
        default:
            break;
    }
    return out;
}

// Closed-form tests for the terminal cases at odd p (no witnesses): the
// residual parts a, c, d must all be coprime to p.  Returns nullopt at
// p = 2, where no shortcut exists.
inline std::optional<bool> fast_path_odd(i64 a, i64 c, i64 d, i64 p, LocalCase tag) {
    if (p == 2) return std::nullopt;
    check_odd_prime(p);
    if (mod_reduce(a, p) == 0 || mod_reduce(c, p) == 0 || mod_reduce(d, p) == 0)
        throw InvalidInput("fast_path_odd: residual parts must be coprime to p");
    switch (tag) {
        case LocalCase::Unit:
            return true;
        case LocalCase::CP:
        case LocalCase::CP3:
            return detail::legendre_nocheck(mul_mod(mod_reduce(a, p), mod_reduce(d, p), p), p) == 1;
        case LocalCase::DP: {
            i64 c3 = mod_pow(c, 3, p);
            i64 val = mod_reduce(-mul_mod(mod_reduce(a, p), c3, p), p);
            return is_fourth_power_mod_prime(val, p);
        }
        case LocalCase::CP2: {
            i64 ad = mul_mod(mod_reduce(a, p), mod_reduce(d, p), p);
            i64 cd = mul_mod(mod_reduce(c, p), mod_reduce(d, p), p);
            return detail::legendre_nocheck(ad, p) == 1 || detail::legendre_nocheck(cd, p) == 1;
        }
        case LocalCase::Impossible:
            return false;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Aggregate report
// ---------------------------------------------------------------------------

struct LocalReport {
    SystemCoeffs coeffs;
    RealVerdict real;
    std::vector<PLocalDecision> primes;  // p = 2 and every p | acd
    bool locally_solvable = false;
};

// Full local-solvability report for b = 0: real solvability, p = 2, and
// every prime dividing acd.  All other primes are solvable outright (odd p
// coprime to acd always lifts), so they are not listed.
//
// p = 2 is always tested explicitly: coprimality of acd to 2 does NOT grant
// 2-local solvability, (1, 3, 7) being the standard failure.
inline LocalReport decide_local(const SystemCoeffs& coeffs) {
    if (coeffs.b != 0)
        throw InvalidInput("decide_local: b must be 0 (use the p-adic route for general b)");
    if (coeffs.a == 0 || coeffs.c == 0 || coeffs.d == 0)
        throw InvalidInput("decide_local: a, c, d must be nonzero");

    LocalReport rep;
    rep.coeffs = coeffs;
    rep.real = real_solvable(coeffs);

    std::set<i64> ps{2};
    for (i64 x : {coeffs.a, coeffs.c, coeffs.d}) {
        for (auto& [p, e] : factorize(x)) {
            (void)e;
            ps.insert(p);
        }
    }
    bool all = true;
    for (i64 p : ps) {
        rep.primes.push_back(decide_p_local(coeffs.a, coeffs.c, coeffs.d, p));
        all = all && rep.primes.back().solvable;
    }
    rep.locally_solvable = rep.real.solvable && all;
    return rep;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle
// ---------------------------------------------------------------------------

// Least primitive solution modulo N by full enumeration, or nullopt.
// Ground truth for the decision paths; budget-limited.
inline std::optional<SolutionQuadruple> brute_force_primitive_mod(const SystemCoeffs& coeffs,
                                                                  i64 N, i64 budget = 10000) {
    if (N > budget) throw BudgetExceeded("brute_force_primitive_mod: modulus beyond budget");
    std::optional<SolutionQuadruple> hit;
    for_each_solution_mod(coeffs, N, [&](i64 u, i64 v, i64 w, i64 z) {
        if (!primitive_mod(u, v, w, z, N)) return false;
        SolutionQuadruple s{u, v, w, z, N, Classification::Primitive};
        auto fac = factorize(N);
        if (fac.size() == 1) s.classification = classify_solution(s, coeffs, fac[0].first, fac[0].second);
        hit = s;
        return true;
    });
    return hit;
}

}  // namespace hasse
