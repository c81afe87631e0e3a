#pragma once

// Truncated p-adic integers, Hensel lifting, and Z_p-solutions of the
// general-b system for good primes.
//
// A p-adic integer is represented by its whole tower of truncations
// a_1, ..., a_K with a_k in [0, p^k) and a_{k+1} = a_k (mod p^k); storing
// every level keeps the coherence condition directly checkable.  Arithmetic
// is componentwise, which preserves coherence automatically.

#include <array>
#include <cassert>
#include <optional>
#include <set>
#include <vector>

#include "hasse/conics.hpp"
#include "hasse/local.hpp"
#include "hasse/modarith.hpp"
#include "hasse/system.hpp"

namespace hasse {

struct PadicApprox {
    i64 p = 0;
    int precision = 0;
    std::vector<i64> digits;  // digits[k-1] = value mod p^k

    static PadicApprox from_int(i64 n, i64 p, int K) {
        if (!is_prime(p)) throw InvalidInput("PadicApprox: p must be prime");
        if (K < 1) throw InvalidInput("PadicApprox: precision must be >= 1");
        pow_checked(p, K);
        PadicApprox x;
        x.p = p;
        x.precision = K;
        i64 pk = 1;
        for (int k = 1; k <= K; ++k) {
            pk *= p;
            x.digits.push_back(mod_reduce(n, pk));
        }
        return x;
    }

    i64 at(int k) const {
        if (k < 1 || k > precision) throw InvalidInput("PadicApprox: level out of range");
        return digits[k - 1];
    }

    bool coherent() const {
        i64 pk = 1;
        for (int k = 1; k < precision; ++k) {
            pk *= p;
            if (mod_reduce(digits[k], pk) != digits[k - 1]) return false;
        }
        return true;
    }

    bool is_zero() const { return digits.back() == 0; }
};

namespace detail {

inline void match_params(const PadicApprox& x, const PadicApprox& y) {
    if (x.p != y.p || x.precision != y.precision)
        throw InvalidInput("p-adic operands have mismatched parameters");
}

template <typename Op>
inline PadicApprox padic_zip(const PadicApprox& x, const PadicApprox& y, Op op) {
    match_params(x, y);
    PadicApprox out;
    out.p = x.p;
    out.precision = x.precision;
    i64 pk = 1;
    for (int k = 1; k <= x.precision; ++k) {
        pk *= x.p;
        out.digits.push_back(op(x.digits[k - 1], y.digits[k - 1], pk));
    }
    assert(out.coherent());
    return out;
}

}  // namespace detail

inline PadicApprox padic_add(const PadicApprox& x, const PadicApprox& y) {
    return detail::padic_zip(x, y, [](i64 a, i64 b, i64 m) { return add_mod(a, b, m); });
}

inline PadicApprox padic_sub(const PadicApprox& x, const PadicApprox& y) {
    return detail::padic_zip(x, y, [](i64 a, i64 b, i64 m) { return sub_mod(a, b, m); });
}

inline PadicApprox padic_mul(const PadicApprox& x, const PadicApprox& y) {
    return detail::padic_zip(x, y, [](i64 a, i64 b, i64 m) { return mul_mod(a, b, m); });
}

inline PadicApprox operator+(const PadicApprox& x, const PadicApprox& y) { return padic_add(x, y); }
inline PadicApprox operator-(const PadicApprox& x, const PadicApprox& y) { return padic_sub(x, y); }
inline PadicApprox operator*(const PadicApprox& x, const PadicApprox& y) { return padic_mul(x, y); }

// Polynomial with truncated Z_p coefficients (shared p and precision).
struct PolyOverZp {
    i64 p = 0;
    int precision = 0;
    std::vector<PadicApprox> coeffs;  // ascending degree

    static PolyOverZp from_ints(const std::vector<i64>& cs, i64 p, int K) {
        PolyOverZp f;
        f.p = p;
        f.precision = K;
        for (i64 c : cs) f.coeffs.push_back(PadicApprox::from_int(c, p, K));
        return f;
    }

    // f(t) mod p^k for an integer t.
    i64 eval_level(i64 t, int k) const {
        i64 pk = pow_checked(p, k);
        i64 tr = mod_reduce(t, pk);
        i64 acc = 0;
        for (size_t i = coeffs.size(); i-- > 0;) {
            acc = add_mod(mul_mod(acc, tr, pk), coeffs[i].at(k), pk);
        }
        return acc;
    }

    PolyOverZp derivative() const {
        PolyOverZp d;
        d.p = p;
        d.precision = precision;
        for (size_t i = 1; i < coeffs.size(); ++i) {
            PadicApprox scale = PadicApprox::from_int(i64(i), p, precision);
            d.coeffs.push_back(padic_mul(scale, coeffs[i]));
        }
        if (d.coeffs.empty()) d.coeffs.push_back(PadicApprox::from_int(0, p, precision));
        return d;
    }
};

// Hensel: from a simple root t0 of f mod p (f'(t0) nonzero mod p), the
// unique root u of f mod p^K with u = t0 mod p, by digitwise Newton steps.
inline PadicApprox hensel_lift_root(const PolyOverZp& f, i64 t0, int K) {
    if (K < 1 || K > f.precision)
        throw InvalidInput("hensel_lift_root: precision out of range");
    i64 p = f.p;
    if (mod_reduce(f.eval_level(t0, 1), p) != 0)
        throw PreconditionFailed("hensel_lift_root: t0 is not a root mod p");
    PolyOverZp fd = f.derivative();
    i64 d0 = mod_reduce(fd.eval_level(t0, 1), p);
    if (d0 == 0) throw DerivativeVanishes("hensel_lift_root: f'(t0) = 0 mod p");
    i64 dinv = inverse_mod(d0, p);

    i64 t = mod_reduce(t0, p);
    i64 pk = p;
    for (int k = 1; k < K; ++k) {
        i64 pk1 = pk * p;
        i64 fv = f.eval_level(t, k + 1);  // = 0 mod p^k by induction
        i64 cdig = (fv / pk) % p;
        i64 x = mul_mod(mod_reduce(-i64(cdig), p), dinv, p);
        t = mod_reduce(t + x * pk, pk1);
        pk = pk1;
    }
    if (f.eval_level(t, K) != 0)
        throw IdentityCheckFailed("hensel_lift_root: lifted root does not verify");
    return PadicApprox::from_int(t, p, K);
}

// Least root of a T^4 + b T^2 + c modulo p, if any.
inline std::optional<i64> find_quartic_root_mod_p(i64 a, i64 b, i64 c, i64 p) {
    check_odd_prime(p);
    for (i64 t = 0; t < p; ++t) {
        i64 t2 = mul_mod(t, t, p);
        i64 val = add_mod(mul_mod(mod_reduce(a, p), mul_mod(t2, t2, p), p),
                          add_mod(mul_mod(mod_reduce(b, p), t2, p), mod_reduce(c, p), p), p);
        if (val == 0) return t;
    }
    return std::nullopt;
}

// Lift a root of the quartic a T^4 + b T^2 + c from mod p to precision K.
// For p coprime to 2ac(b^2 - 4ac) a root mod p is automatically simple,
// so plain Hensel lifting applies.
inline PadicApprox quartic_root_lift(i64 a, i64 b, i64 c, i64 p, i64 t0, int K) {
    check_odd_prime(p);
    i64 disc = sub_mod(mul_mod(mod_reduce(b, p), mod_reduce(b, p), p),
                       mul_mod(4 % p, mul_mod(mod_reduce(a, p), mod_reduce(c, p), p), p), p);
    if (mod_reduce(a, p) == 0 || mod_reduce(c, p) == 0 || disc == 0)
        throw PreconditionFailed("quartic_root_lift: p must not divide 2ac(b^2-4ac)");
    PolyOverZp f = PolyOverZp::from_ints({c, 0, b, 0, a}, p, K);
    if (mod_reduce(f.eval_level(t0, 1), p) != 0)
        throw PreconditionFailed("quartic_root_lift: t0 is not a root mod p");
    return hensel_lift_root(f, t0, K);
}

// Scan for the base root first; RootSearchFailed when none exists mod p.
inline PadicApprox quartic_root_lift(i64 a, i64 b, i64 c, i64 p, int K) {
    auto t0 = find_quartic_root_mod_p(a, b, c, p);
    if (!t0) throw RootSearchFailed("quartic_root_lift: no root mod p to lift");
    return quartic_root_lift(a, b, c, p, *t0, K);
}

// A Z_p-solution (to precision K) of the general system.  swapped_uw records
// the U <-> W exchange used when only the u-coordinate of the mod-p seed was
// a unit.
struct GeneralPadicSolution {
    PadicApprox u, v, w, z;
    bool swapped_uw = false;
};

// Nontrivial Z_p-solution of a U^2 + b V^2 + c W^2 = d Z^2, U W = V^2 for a
// prime p coprime to 2acd(b^2 - 4ac): take a mod-p solution, normalize W = 1,
// then Hensel-lift either the quartic (z = 0 branch) or d T^2 - (a v^4 +
// b v^2 + c) (z a unit).
inline GeneralPadicSolution p_local_solve_general(const SystemCoeffs& coeffs, i64 p, int K) {
    check_odd_prime(p);
    if (K < 1) throw InvalidInput("p_local_solve_general: precision must be >= 1");
    i64 a = coeffs.a, b = coeffs.b, c = coeffs.c, d = coeffs.d;
    i64 disc = sub_mod(mul_mod(mod_reduce(b, p), mod_reduce(b, p), p),
                       mul_mod(4 % p, mul_mod(mod_reduce(a, p), mod_reduce(c, p), p), p), p);
    if (mod_reduce(a, p) == 0 || mod_reduce(c, p) == 0 || mod_reduce(d, p) == 0 || disc == 0)
        throw PreconditionFailed("p_local_solve_general: p must not divide 2acd(b^2-4ac)");

    SolutionQuadruple seed = solve_general_fp(a, b, c, d, p);
    bool swapped = false;
    i64 u0 = seed.u, v0 = seed.v, w0 = seed.w, z0 = seed.z;
    if (mod_reduce(w0, p) == 0) {
        // p cannot divide both u0 and w0 (else v0, z0 too); swap U and W
        std::swap(u0, w0);
        std::swap(a, c);
        swapped = true;
    }
    i64 winv = inverse_mod(w0, p);
    i64 v = mul_mod(mod_reduce(v0, p), winv, p);
    i64 z = mul_mod(mod_reduce(z0, p), winv, p);

    GeneralPadicSolution out;
    out.swapped_uw = swapped;
    if (z == 0) {
        PadicApprox t = quartic_root_lift(a, b, c, p, v, K);
        out.u = padic_mul(t, t);
        out.v = t;
        out.w = PadicApprox::from_int(1, p, K);
        out.z = PadicApprox::from_int(0, p, K);
    } else {
        i64 pk = pow_checked(p, K);
        i64 v2 = mul_mod(mod_reduce(v, pk), mod_reduce(v, pk), pk);
        i64 hv = add_mod(mul_mod(mod_reduce(a, pk), mul_mod(v2, v2, pk), pk),
                         add_mod(mul_mod(mod_reduce(b, pk), v2, pk), mod_reduce(c, pk), pk), pk);
        PolyOverZp g;
        g.p = p;
        g.precision = K;
        g.coeffs.push_back(PadicApprox::from_int(mod_reduce(-hv, pk), p, K));
        g.coeffs.push_back(PadicApprox::from_int(0, p, K));
        g.coeffs.push_back(PadicApprox::from_int(d, p, K));
        PadicApprox t = hensel_lift_root(g, z, K);
        out.u = PadicApprox::from_int(v2, p, K);
        out.v = PadicApprox::from_int(v, p, K);
        out.w = PadicApprox::from_int(1, p, K);
        out.z = t;
    }
    if (swapped) std::swap(out.u, out.w);

    // substitute at every precision
    SystemCoeffs orig = coeffs;
    for (int k = 1; k <= K; ++k) {
        i64 m = pow_checked(p, k);
        if (!solves_mod(orig, out.u.at(k), out.v.at(k), out.w.at(k), out.z.at(k), m))
            throw IdentityCheckFailed("p_local_solve_general: solution fails substitution");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-depth extendability
// ---------------------------------------------------------------------------

namespace detail {

// Children of a solution mod p^j that solve mod p^{j+1}: writing the
// perturbation as s + p^j * delta, both congruences become affine in delta
// over F_p, so the children form an affine subspace that Gaussian
// elimination enumerates directly.  (For p = 2 the quadratic terms drop out
// of the first congruence entirely.)
inline std::vector<std::array<i64, 4>> extension_children(const SystemCoeffs& coeffs,
                                                          i64 p, int j,
                                                          const std::array<i64, 4>& s) {
    i64 pj = pow_checked(p, j);
    i64 pj1 = pj * p;
    i64 a = mod_reduce(coeffs.a, pj1), b = mod_reduce(coeffs.b, pj1);
    i64 c = mod_reduce(coeffs.c, pj1), d = mod_reduce(coeffs.d, pj1);
    auto [u, v, w, z] = s;

    i64 f1 = sub_mod(add_mod(add_mod(mul_mod(a, mul_mod(u, u, pj1), pj1),
                                     mul_mod(b, mul_mod(v, v, pj1), pj1), pj1),
                             mul_mod(c, mul_mod(w, w, pj1), pj1), pj1),
                     mul_mod(d, mul_mod(z, z, pj1), pj1), pj1);
    i64 f2 = sub_mod(mul_mod(u, w, pj1), mul_mod(v, v, pj1), pj1);
    if (f1 % pj != 0 || f2 % pj != 0)
        throw IdentityCheckFailed("extension_children: parent is not a solution");

    // rows: grad . delta = rhs (mod p)
    std::array<std::array<i64, 5>, 2> rows{};
    if (p == 2) {
        rows[0] = {0, 0, 0, 0, mod_reduce(-(f1 / pj), p)};
    } else {
        rows[0] = {mul_mod(2 % p, mul_mod(a % p, u % p, p), p),
                   mul_mod(2 % p, mul_mod(b % p, v % p, p), p),
                   mul_mod(2 % p, mul_mod(c % p, w % p, p), p),
                   mod_reduce(-mul_mod(2 % p, mul_mod(d % p, z % p, p), p), p),
                   mod_reduce(-(f1 / pj), p)};
    }
    rows[1] = {w % p,
               p == 2 ? 0 : mod_reduce(-mul_mod(2 % p, v % p, p), p),
               u % p, 0, mod_reduce(-(f2 / pj), p)};

    // Gaussian elimination over F_p on the 2 x 4 system
    int pivot_col[2] = {-1, -1};
    int r = 0;
    for (int col = 0; col < 4 && r < 2; ++col) {
        int pr = -1;
        for (int i = r; i < 2; ++i)
            if (rows[i][col] != 0) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(rows[r], rows[pr]);
        i64 inv = inverse_mod(rows[r][col], p);
        for (int k = col; k < 5; ++k) rows[r][k] = mul_mod(rows[r][k], inv, p);
        for (int i = 0; i < 2; ++i) {
            if (i == r || rows[i][col] == 0) continue;
            i64 f = rows[i][col];
            for (int k = col; k < 5; ++k)
                rows[i][k] = sub_mod(rows[i][k], mul_mod(f, rows[r][k], p), p);
        }
        pivot_col[r] = col;
        ++r;
    }
    for (int i = r; i < 2; ++i) {
        bool zero = rows[i][0] == 0 && rows[i][1] == 0 && rows[i][2] == 0 && rows[i][3] == 0;
        if (zero && rows[i][4] != 0) return {};  // inconsistent: no children
    }

    std::vector<int> free_cols;
    for (int col = 0; col < 4; ++col) {
        if (col != pivot_col[0] && col != pivot_col[1]) free_cols.push_back(col);
    }

    std::vector<std::array<i64, 4>> kids;
    std::array<i64, 4> delta{};
    size_t count = 1;
    for (size_t i = 0; i < free_cols.size(); ++i) count *= size_t(p);
    for (size_t idx = 0; idx < count; ++idx) {
        size_t t = idx;
        for (int col : free_cols) {
            delta[col] = i64(t % size_t(p));
            t /= size_t(p);
        }
        for (int i = r - 1; i >= 0; --i) {
            i64 val = rows[i][4];
            for (int col = pivot_col[i] + 1; col < 4; ++col)
                val = sub_mod(val, mul_mod(rows[i][col], delta[col], p), p);
            delta[pivot_col[i]] = val;
        }
        kids.push_back({mod_reduce(u + delta[0] * pj, pj1),
                        mod_reduce(v + delta[1] * pj, pj1),
                        mod_reduce(w + delta[2] * pj, pj1),
                        mod_reduce(z + delta[3] * pj, pj1)});
    }
    return kids;
}

}  // namespace detail

// Primitive solutions mod p^k that extend to primitive solutions mod
// p^lambda, by exhaustive depth-first extension with failure memoization.
inline std::vector<SolutionQuadruple> extendable_solutions(const SystemCoeffs& coeffs,
                                                           i64 p, int k, int lambda) {
    if (!is_prime(p)) throw InvalidInput("extendable_solutions: p must be prime");
    if (k < 1 || lambda < k) throw InvalidInput("extendable_solutions: need 1 <= k <= lambda");
    i64 plam = pow_checked(p, lambda);
    if (plam > (i64(1) << 20))
        throw BudgetExceeded("extendable_solutions: p^lambda beyond enumeration budget");
    i64 pk = pow_checked(p, k);
    if (pk > 2048) throw BudgetExceeded("extendable_solutions: p^k beyond seed enumeration budget");

    std::vector<std::array<i64, 4>> seeds;
    for_each_solution_mod(coeffs, pk, [&](i64 u, i64 v, i64 w, i64 z) {
        if (primitive_mod(u, v, w, z, pk)) seeds.push_back({u, v, w, z});
        return false;
    });

    std::vector<std::set<std::array<i64, 4>>> dead(size_t(lambda) + 1);
    // returns true when s (a solution mod p^j) extends to level lambda
    auto extends = [&](auto&& self, const std::array<i64, 4>& s, int j) -> bool {
        if (j == lambda) return true;
        if (dead[j].count(s)) return false;
        for (const auto& child : detail::extension_children(coeffs, p, j, s)) {
            if (self(self, child, j + 1)) return true;
        }
        dead[j].insert(s);
        return false;
    };

    std::vector<SolutionQuadruple> out;
    for (const auto& s : seeds) {
        if (extends(extends, s, k)) {
            SolutionQuadruple q{s[0], s[1], s[2], s[3], pk, Classification::Primitive};
            // strongness relative to the coefficients, for callers that care
            q.classification = classify_solution(q, coeffs, p, k);
            out.push_back(q);
        }
    }
    return out;
}

}  // namespace hasse
