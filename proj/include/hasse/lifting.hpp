#pragma once

// Lifting solutions from mod p (or mod 16) to mod p^k.
//
// Three layers:
//   * lift_rth_power        - N an r-th power mod p, p coprime to rN, lifts
//                             inductively: from a^r = N mod p^j write
//                             N = a^r + c p^j and correct a by x p^j where
//                             r a^{r-1} x = c mod p.
//   * lift_fourth_power_2adic - the p = 2 analogue needs N = 1 mod 16 and a
//                             correction term c * 2^{j-2}; the classical
//                             obstruction is 3, a fourth power mod 2 but not
//                             mod 4.
//   * lift_strong_solution  - a strong solution (one of au, cw, dz a unit)
//                             normalizes that coordinate to 1 and rides the
//                             power lift: a^{-1}(d z^2 - c v^4) = 1 mod p is
//                             a fourth power mod p^k, say m^4, and then
//                             (m^2, m v, v^2, z) solves the system mod p^k.
//
// The mod-2^k branch mirrors the odd-p construction with the 2-adic
// fourth-power lift substituted for the generic one; it needs the base
// solution mod 2^4 rather than mod 2.

#include <vector>

#include "hasse/modarith.hpp"
#include "hasse/system.hpp"

namespace hasse {

// a with a^r = N (mod p^k).  Requires p coprime to rN and N an r-th power
// mod p; the returned witness starts from the least r-th root mod p.
inline Residue lift_rth_power(const LiftRequest& req) {
    if (!is_prime(req.p)) throw InvalidInput("lift_rth_power: p must be prime");
    if (req.r < 1 || req.k < 1) throw InvalidInput("lift_rth_power: need r >= 1, k >= 1");
    if (req.r % req.p == 0 || mod_reduce(req.n, req.p) == 0)
        throw PreconditionFailed("lift_rth_power: p must not divide r*N");
    i64 pk = pow_checked(req.p, req.k);

    // least base root mod p
    i64 n1 = mod_reduce(req.n, req.p);
    i64 a = -1;
    if (req.r == 2) {
        if (auto s = sqrt_mod_p(n1, req.p)) a = *s;
    } else {
        for (i64 x = 0; x < req.p; ++x) {
            if (mod_pow(x, req.r, req.p) == n1) { a = x; break; }
        }
    }
    if (a < 0) throw PreconditionFailed("lift_rth_power: N is not an r-th power mod p");

    i64 pj = req.p;
    for (int j = 1; j < req.k; ++j) {
        i64 pj1 = pj * req.p;
        i64 diff = sub_mod(mod_reduce(req.n, pj1), mod_pow(a, req.r, pj1), pj1);
        i64 cdig = (diff / pj) % req.p;  // diff = c * p^j with 0 <= c < p
        i64 deriv = mul_mod(mod_reduce(req.r, req.p),
                            mod_pow(a, req.r - 1, req.p), req.p);
        i64 x = mul_mod(cdig, inverse_mod(deriv, req.p), req.p);
        a = mod_reduce(a + x * pj, pj1);
        pj = pj1;
    }
    if (mod_pow(a, req.r, pk) != mod_reduce(req.n, pk))
        throw IdentityCheckFailed("lift_rth_power: lifted root does not verify");
    return {a, pk};
}

// a with a^4 = N (mod 2^k), for N = 1 (mod 16).
inline Residue lift_fourth_power_2adic(i64 n, int k) {
    if (k < 1) throw InvalidInput("lift_fourth_power_2adic: k must be >= 1");
    if (k > 61) throw InvalidInput("lift_fourth_power_2adic: 2^k exceeds exact range");
    if (mod_reduce(n, 16) != 1)
        throw PreconditionFailed("lift_fourth_power_2adic: N must be 1 mod 16");
    i64 pk = i64(1) << k;
    i64 a = 1;
    for (int j = 4; j < k; ++j) {
        i64 pj = i64(1) << j, pj1 = pj << 1;
        i64 diff = sub_mod(mod_reduce(n, pj1), mod_pow(a, 4, pj1), pj1);
        i64 cdig = (diff >> j) & 1;
        a = mod_reduce(a + (cdig << (j - 2)), pj1);
    }
    a = mod_reduce(a, pk);
    if (mod_pow(a, 4, pk) != mod_reduce(n, pk))
        throw IdentityCheckFailed("lift_fourth_power_2adic: lifted root does not verify");
    return {a, pk};
}

// Strong solutions mod p^k for k = 1..K (odd p) or k = 4..K (p = 2).
// Entries are built per exponent; consecutive entries need not be coherent.
struct StrongSolutionChain {
    i64 p = 0;
    int k_start = 1;
    std::vector<SolutionQuadruple> entries;  // entries[i] lives mod p^(k_start + i)

    int k_of(size_t i) const { return k_start + int(i); }
};

namespace detail {

// One chain entry at modulus p^k from a strong base solution, normalizing
// the coordinate named by use_u (u if true, else w, swapping the roles of
// U and W and of a and c).
inline SolutionQuadruple strong_entry(const SystemCoeffs& coeffs, i64 p, int k,
                                      const SolutionQuadruple& base, bool use_u) {
    i64 m = pow_checked(p, k);
    i64 a = use_u ? coeffs.a : coeffs.c;
    i64 c = use_u ? coeffs.c : coeffs.a;
    i64 u0 = use_u ? base.u : base.w;
    i64 v0 = base.v;
    i64 z0 = base.z;

    i64 inv = inverse_mod(u0, m);
    i64 v = mul_mod(mod_reduce(v0, m), inv, m);
    i64 z = mul_mod(mod_reduce(z0, m), inv, m);

    i64 v2 = mul_mod(v, v, m);
    i64 target = sub_mod(mul_mod(mod_reduce(coeffs.d, m), mul_mod(z, z, m), m),
                         mul_mod(mod_reduce(c, m), mul_mod(v2, v2, m), m), m);
    i64 nval = mul_mod(inverse_mod(mod_reduce(a, m), m), target, m);

    i64 mroot;
    if (p == 2) {
        mroot = lift_fourth_power_2adic(nval, k).value;
    } else {
        mroot = lift_rth_power({nval, 4, p, k}).value;
    }

    SolutionQuadruple out;
    i64 uu = mul_mod(mroot, mroot, m);
    i64 vv = mul_mod(mroot, v, m);
    i64 ww = v2;
    if (!use_u) std::swap(uu, ww);
    out.u = uu; out.v = vv; out.w = ww; out.z = z;
    out.modulus = m;
    out.classification = classify_solution(out, coeffs, p, k);
    if (!solves_mod(coeffs, out.u, out.v, out.w, out.z, m) ||
        out.classification != Classification::Strong)
        throw IdentityCheckFailed("lift_strong_solution: chain entry does not verify");
    return out;
}

}  // namespace detail

// Lift a strong base solution (mod p for odd p, mod 16 for p = 2) into a
// chain of strong solutions mod p^k, k up to K.
inline StrongSolutionChain lift_strong_solution(const SystemCoeffs& coeffs, i64 p,
                                                const SolutionQuadruple& base, int K) {
    if (!is_prime(p)) throw InvalidInput("lift_strong_solution: p must be prime");
    if (coeffs.b != 0) throw InvalidInput("lift_strong_solution: requires b = 0");
    if (coeffs.a == 0 || coeffs.c == 0 || coeffs.d == 0)
        throw InvalidInput("lift_strong_solution: a, c, d must be nonzero");
    int k0 = (p == 2) ? 4 : 1;
    if (K < k0) throw InvalidInput("lift_strong_solution: K below base exponent");
    i64 m0 = pow_checked(p, k0);
    if (base.modulus != m0)
        throw NotStrong("lift_strong_solution: base solution has the wrong modulus");
    if (!solves_mod(coeffs, base.u, base.v, base.w, base.z, m0) ||
        classify_solution(base, coeffs, p, k0) != Classification::Strong)
        throw NotStrong("lift_strong_solution: base solution is not strong");

    // Normalization preference: u, then w, then z.  The system equation
    // forces a*u or c*w to be a unit whenever the solution is strong, so
    // the z branch can never be reached.
    bool use_u;
    if (mul_mod(mod_reduce(coeffs.a, p), mod_reduce(base.u, p), p) != 0) {
        use_u = true;
    } else if (mul_mod(mod_reduce(coeffs.c, p), mod_reduce(base.w, p), p) != 0) {
        use_u = false;
    } else {
        throw NotStrong("lift_strong_solution: no unit coordinate to normalize");
    }

    StrongSolutionChain chain;
    chain.p = p;
    chain.k_start = k0;
    for (int k = k0; k <= K; ++k) {
        chain.entries.push_back(detail::strong_entry(coeffs, p, k, base, use_u));
    }
    return chain;
}

}  // namespace hasse
