#pragma once

// Rational parametrization of conics a x^2 + b y^2 = 1 over F_p and the
// resulting nontrivial F_p-solutions of the full system.
//
// From a base point (x0, y0) on the conic, sweeping lines of slope t gives
// the polynomial identity  a q1^2 + b q2^2 = q3^2  in F_p[T] with
//
//   q1 = b x0 T^2 - 2 b y0 T - a x0
//   q2 = -b y0 T^2 - 2 a x0 T + a y0
//   q3 = b T^2 + a
//
// (the generalization of (1-T^2)^2 + (2T)^2 = (1+T^2)^2 for the unit circle).
// In odd characteristic no two of q1, q2, q3 are associates, which is what
// makes the solver's sweep over t terminate.

#include <array>
#include <optional>

#include "hasse/modarith.hpp"
#include "hasse/system.hpp"

namespace hasse {

// Degree <= 2 polynomial over F_p, coefficients ascending: c[i] * T^i.
struct QuadPoly {
    std::array<i64, 3> c{0, 0, 0};

    i64 eval(i64 t, i64 p) const {
        t = mod_reduce(t, p);
        return add_mod(c[0], mul_mod(t, add_mod(c[1], mul_mod(c[2], t, p), p), p), p);
    }
    int degree() const {
        if (c[2] != 0) return 2;
        if (c[1] != 0) return 1;
        if (c[0] != 0) return 0;
        return -1;  // zero polynomial
    }
    bool operator==(const QuadPoly&) const = default;
};

// f = lambda * g for a nonzero scalar lambda?
inline bool polys_associate(const QuadPoly& f, const QuadPoly& g, i64 p) {
    if (f.degree() < 0 || g.degree() < 0) return false;
    if (f.degree() != g.degree()) return false;
    int d = f.degree();
    i64 lambda = mul_mod(f.c[d], inverse_mod(g.c[d], p), p);
    for (int i = 0; i < 3; ++i) {
        if (f.c[i] != mul_mod(lambda, g.c[i], p)) return false;
    }
    return true;
}

// A point on a x^2 + b y^2 = 1 over F_p.
struct ConicPoint {
    i64 x0, y0;
    i64 a, b;
    i64 p;
};

// The parametrization triple for one conic.
struct ConicParam {
    i64 p;
    i64 a, b;
    QuadPoly q1, q2, q3;
};

// Find a point on a x^2 + b y^2 = 1 over F_p (a, b nonzero mod p).  Always
// succeeds: f(x) = b^{-1}(1 - a x^2) cannot be a nonresidue for every x, or
// the degree-(p-1) polynomial f^{(p-1)/2} + 1 would have p roots.
//
// Deterministic scan: y = 0, 1, 2, ... with the least x root for each y.
inline ConicPoint find_conic_point(i64 a, i64 b, i64 p) {
    if (!is_prime(p)) throw InvalidInput("find_conic_point: p must be prime");
    i64 ar = mod_reduce(a, p), br = mod_reduce(b, p);
    if (ar == 0 || br == 0) throw InvalidInput("find_conic_point: a, b must be nonzero mod p");
    if (p == 2) return {1, 0, ar, br, p};
    i64 ainv = inverse_mod(ar, p);
    for (i64 y = 0; y < p; ++y) {
        i64 rhs = mul_mod(sub_mod(1, mul_mod(br, mul_mod(y, y, p), p), p), ainv, p);
        if (auto x = sqrt_mod_p(rhs, p)) return {*x, y, ar, br, p};
    }
    throw IdentityCheckFailed("find_conic_point: existence argument violated");
}

// Build q1, q2, q3 from a base point and verify the identity
// a q1^2 + b q2^2 = q3^2 coefficientwise before returning.
inline ConicParam parametrize_conic(i64 a, i64 b, i64 p, const ConicPoint& pt) {
    check_odd_prime(p);
    i64 ar = mod_reduce(a, p), br = mod_reduce(b, p);
    if (ar == 0 || br == 0) throw InvalidInput("parametrize_conic: a, b must be nonzero mod p");
    i64 x0 = mod_reduce(pt.x0, p), y0 = mod_reduce(pt.y0, p);
    i64 on = add_mod(mul_mod(ar, mul_mod(x0, x0, p), p),
                     mul_mod(br, mul_mod(y0, y0, p), p), p);
    if (on != 1 % p) throw PreconditionFailed("parametrize_conic: point not on the conic");

    ConicParam par;
    par.p = p;
    par.a = ar;
    par.b = br;
    par.q1 = {{mod_reduce(-mul_mod(ar, x0, p), p),
               mod_reduce(-2 * mul_mod(br, y0, p), p),
               mul_mod(br, x0, p)}};
    par.q2 = {{mul_mod(ar, y0, p),
               mod_reduce(-2 * mul_mod(ar, x0, p), p),
               mod_reduce(-mul_mod(br, y0, p), p)}};
    par.q3 = {{ar, 0, br}};

    // expand a q1^2 + b q2^2 - q3^2 (degree <= 4) and demand the zero poly
    std::array<i64, 5> acc{0, 0, 0, 0, 0};
    auto add_sq = [&](const QuadPoly& q, i64 scale) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                i64 term = mul_mod(scale, mul_mod(q.c[i], q.c[j], p), p);
                acc[i + j] = add_mod(acc[i + j], term, p);
            }
    };
    add_sq(par.q1, ar);
    add_sq(par.q2, br);
    add_sq(par.q3, p - 1);  // -1 mod p
    for (i64 coeff : acc) {
        if (coeff != 0) throw IdentityCheckFailed("parametrize_conic: identity failed");
    }
    return par;
}

namespace detail {

// Shared solver for a U^2 + b V^2 + c W^2 = d Z^2, U W = V^2 over F_p.
// Normalizes d = 1, completes the square to fold the b V^2 term into the
// conic, then sweeps t = 0, 1, ... until (q1'(t)/p) != -(q2(t)/p); the
// product q1'(t) q2(t) is then a square and supplies V.
inline SolutionQuadruple solve_fp_core(const SystemCoeffs& coeffs, i64 p) {
    i64 dinv = inverse_mod(coeffs.d, p);
    i64 a = mul_mod(mod_reduce(coeffs.a, p), dinv, p);
    i64 b = mul_mod(mod_reduce(coeffs.b, p), dinv, p);
    i64 c = mul_mod(mod_reduce(coeffs.c, p), dinv, p);

    i64 inv2a = inverse_mod(mul_mod(2, a, p), p);
    i64 inv4a = mul_mod(inv2a, inverse_mod(2 % p, p), p);
    i64 e = sub_mod(c, mul_mod(mul_mod(b, b, p), inv4a, p), p);  // c - b^2/(4a)

    ConicPoint pt = find_conic_point(a, e, p);
    ConicParam par = parametrize_conic(a, e, p, pt);

    // q1' = q1 - (b / 2a) q2, so that a q1'^2 + b q1' q2 + c q2^2 = q3^2
    i64 shift = mul_mod(b, inv2a, p);
    QuadPoly q1s;
    for (int i = 0; i < 3; ++i)
        q1s.c[i] = sub_mod(par.q1.c[i], mul_mod(shift, par.q2.c[i], p), p);

    for (i64 t = 0; t < p; ++t) {
        i64 f1 = q1s.eval(t, p);
        i64 f2 = par.q2.eval(t, p);
        LegendreValue l1 = detail::legendre_nocheck(f1, p);
        LegendreValue l2 = detail::legendre_nocheck(f2, p);
        if (l1 != -l2) {  // excludes both-zero (0 == -0) and opposite signs
            auto v = sqrt_mod_p(mul_mod(f1, f2, p), p);
            if (!v) throw IdentityCheckFailed("solve_fp_core: product not a square");
            SolutionQuadruple s;
            s.u = f1;
            s.v = *v;
            s.w = f2;
            s.z = par.q3.eval(t, p);
            s.modulus = p;
            s.classification = classify_solution(s.u, s.v, s.w, s.z, coeffs, p, 1);
            if (!solves_mod(coeffs, s.u, s.v, s.w, s.z, p))
                throw IdentityCheckFailed("solve_fp_core: result does not solve the system");
            return s;
        }
    }
    throw IdentityCheckFailed("solve_fp_core: sweep exhausted (non-associate property violated)");
}

}  // namespace detail

// Nontrivial F_p-solution of a U^2 + c W^2 = d Z^2, U W = V^2 for an odd
// prime p with p coprime to acd.
inline SolutionQuadruple solve_system_fp(i64 a, i64 c, i64 d, i64 p) {
    check_odd_prime(p);
    if (mod_reduce(a, p) == 0 || mod_reduce(c, p) == 0 || mod_reduce(d, p) == 0)
        throw InvalidInput("solve_system_fp: a, c, d must be nonzero mod p");
    return detail::solve_fp_core({a, 0, c, d}, p);
}

// General-b variant: requires p coprime to acd(b^2 - 4ac).
inline SolutionQuadruple solve_general_fp(i64 a, i64 b, i64 c, i64 d, i64 p) {
    check_odd_prime(p);
    i64 ar = mod_reduce(a, p), cr = mod_reduce(c, p), dr = mod_reduce(d, p);
    i64 disc = sub_mod(mul_mod(mod_reduce(b, p), mod_reduce(b, p), p),
                       mul_mod(4 % p, mul_mod(ar, cr, p), p), p);
    if (ar == 0 || cr == 0 || dr == 0 || disc == 0)
        throw InvalidInput("solve_general_fp: need acd(b^2-4ac) nonzero mod p");
    return detail::solve_fp_core({a, b, c, d}, p);
}

}  // namespace hasse
