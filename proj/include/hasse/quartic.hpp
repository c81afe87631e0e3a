#pragma once

// Translation between the system a U^2 + b V^2 + c W^2 = d Z^2, U W = V^2
// and the single quartic equation a X^4 + b X^2 Y^2 + c Y^4 = d Z^2.
//
//   (x, y, z)    ->  (x^2, x y, y^2, z)
//   (u, v, w, z) ->  (u, v, z u)  or  (v, w, z w), at least one nontrivial
//                    when d != 0, and at least one primitive mod p^k when
//                    p^2 does not divide d.
//
// Both directions preserve nontriviality exactly and primitivity modulo
// prime powers under the p^2-coprime-d hypothesis.

#include <optional>
#include <string>

#include "hasse/local.hpp"
#include "hasse/system.hpp"

namespace hasse {

struct QuarticTriple {
    i64 x = 0, y = 0, z = 0;
    i64 modulus = 0;  // 0 marks an exact integer triple
    Classification classification = Classification::Trivial;

    bool exact() const { return modulus == 0; }
};

inline bool quartic_solves_mod(const SystemCoeffs& coeffs, i64 x, i64 y, i64 z, i64 m) {
    check_modulus(m);
    x = mod_reduce(x, m); y = mod_reduce(y, m); z = mod_reduce(z, m);
    i64 x2 = mul_mod(x, x, m), y2 = mul_mod(y, y, m);
    i64 lhs = add_mod(mul_mod(mod_reduce(coeffs.a, m), mul_mod(x2, x2, m), m),
                      mul_mod(mod_reduce(coeffs.b, m), mul_mod(x2, y2, m), m), m);
    lhs = add_mod(lhs, mul_mod(mod_reduce(coeffs.c, m), mul_mod(y2, y2, m), m), m);
    return lhs == mul_mod(mod_reduce(coeffs.d, m), mul_mod(z, z, m), m);
}

inline bool quartic_solves_exact(const SystemCoeffs& coeffs, i64 x, i64 y, i64 z) {
    const i64 bound = 1000000000;
    if (x > bound || x < -bound || y > bound || y < -bound)
        throw InvalidInput("quartic_solves_exact: inputs beyond exact range");
    __int128 x2 = __int128(x) * x, y2 = __int128(y) * y;
    __int128 lhs = coeffs.a * x2 * x2 + coeffs.b * x2 * y2 + coeffs.c * y2 * y2;
    return lhs == __int128(coeffs.d) * z * z;
}

namespace detail {

inline Classification classify_shape3(i64 x, i64 y, i64 z, i64 m) {
    if (m == 0) {
        if (x == 0 && y == 0 && z == 0) return Classification::Trivial;
        i64 g = std::gcd(std::gcd(x < 0 ? -x : x, y < 0 ? -y : y), z < 0 ? -z : z);
        return g == 1 ? Classification::Primitive : Classification::Nontrivial;
    }
    x = mod_reduce(x, m); y = mod_reduce(y, m); z = mod_reduce(z, m);
    if (x == 0 && y == 0 && z == 0) return Classification::Trivial;
    i64 g = std::gcd(std::gcd(x, y), z);
    return std::gcd(g, m) == 1 ? Classification::Primitive : Classification::Nontrivial;
}

inline Classification classify_shape4(i64 u, i64 v, i64 w, i64 z, i64 m) {
    if (m == 0) {
        if (u == 0 && v == 0 && w == 0 && z == 0) return Classification::Trivial;
        i64 g = std::gcd(std::gcd(u < 0 ? -u : u, v < 0 ? -v : v),
                         std::gcd(w < 0 ? -w : w, z < 0 ? -z : z));
        return g == 1 ? Classification::Primitive : Classification::Nontrivial;
    }
    u = mod_reduce(u, m); v = mod_reduce(v, m);
    w = mod_reduce(w, m); z = mod_reduce(z, m);
    if (u == 0 && v == 0 && w == 0 && z == 0) return Classification::Trivial;
    return primitive_mod(u, v, w, z, m) ? Classification::Primitive : Classification::Nontrivial;
}

}  // namespace detail

// (x, y, z) -> (x^2, x y, y^2, z).  Nontrivial in, nontrivial out; primitive
// mod p^k in, primitive out.
inline SolutionQuadruple quartic_to_system(const QuarticTriple& t) {
    SolutionQuadruple s;
    s.modulus = t.modulus;
    if (t.exact()) {
        if (t.x == 0 && t.y == 0 && t.z == 0)
            throw PreconditionFailed("quartic_to_system: trivial input");
        const i64 bound = 1000000000;
        if (t.x > bound || t.x < -bound || t.y > bound || t.y < -bound)
            throw InvalidInput("quartic_to_system: inputs beyond exact range");
        s.u = t.x * t.x;
        s.v = t.x * t.y;
        s.w = t.y * t.y;
        s.z = t.z;
    } else {
        i64 m = t.modulus;
        i64 x = mod_reduce(t.x, m), y = mod_reduce(t.y, m), z = mod_reduce(t.z, m);
        if (x == 0 && y == 0 && z == 0)
            throw PreconditionFailed("quartic_to_system: trivial input");
        s.u = mul_mod(x, x, m);
        s.v = mul_mod(x, y, m);
        s.w = mul_mod(y, y, m);
        s.z = z;
    }
    s.classification = detail::classify_shape4(s.u, s.v, s.w, s.z, s.modulus);
    return s;
}

// (u, v, w, z) -> (u, v, z u) or (v, w, z w), whichever is admissible;
// the first is preferred when both are.  Modular inputs need p^2 coprime
// to d for a primitive image to exist.
inline QuarticTriple system_to_quartic(const SolutionQuadruple& s, const SystemCoeffs& coeffs) {
    QuarticTriple t;
    t.modulus = s.modulus;
    if (s.exact()) {
        if (coeffs.d == 0) throw InvalidInput("system_to_quartic: d must be nonzero");
        if (s.u == 0 && s.v == 0 && s.w == 0 && s.z == 0)
            throw PreconditionFailed("system_to_quartic: trivial input");
        const i64 bound = 1000000000;
        for (i64 comp : {s.u, s.v, s.w, s.z})
            if (comp > bound || comp < -bound)
                throw InvalidInput("system_to_quartic: inputs beyond exact range");
        if (s.u != 0 || s.v != 0) {
            t.x = s.u; t.y = s.v; t.z = s.z * s.u;
        } else {
            t.x = s.v; t.y = s.w; t.z = s.z * s.w;
        }
        if (!quartic_solves_exact(coeffs, t.x, t.y, t.z))
            throw IdentityCheckFailed("system_to_quartic: image does not solve the quartic");
    } else {
        i64 m = s.modulus;
        auto fac = factorize(m);
        if (fac.size() != 1) throw InvalidInput("system_to_quartic: modulus must be a prime power");
        i64 p = fac[0].first;
        if (mod_reduce(coeffs.d, p * p) == 0)
            throw NoPrimitiveImage("system_to_quartic: p^2 divides d");
        i64 u = mod_reduce(s.u, m), v = mod_reduce(s.v, m);
        i64 w = mod_reduce(s.w, m), z = mod_reduce(s.z, m);
        QuarticTriple first{u, v, mul_mod(z, u, m), m, Classification::Trivial};
        QuarticTriple second{v, w, mul_mod(z, w, m), m, Classification::Trivial};
        first.classification = detail::classify_shape3(first.x, first.y, first.z, m);
        second.classification = detail::classify_shape3(second.x, second.y, second.z, m);
        if (first.classification == Classification::Primitive) t = first;
        else if (second.classification == Classification::Primitive) t = second;
        else throw NoPrimitiveImage("system_to_quartic: no primitive image (input not primitive?)");
        if (!quartic_solves_mod(coeffs, t.x, t.y, t.z, m))
            throw IdentityCheckFailed("system_to_quartic: image does not solve the quartic");
        return t;
    }
    t.classification = detail::classify_shape3(t.x, t.y, t.z, t.modulus);
    return t;
}

// ---------------------------------------------------------------------------
// Solvability transfer records
// ---------------------------------------------------------------------------

struct TransferQuery {
    enum class Domain { Exact, ModPk, Real, Fp };
    Domain domain = Domain::Exact;
    i64 p = 0;
    int k = 0;
    i64 height = 100;  // bound for the exact search
};

struct TransferVerdict {
    SystemCoeffs coeffs;
    TransferQuery query;
    bool equivalent = true;  // the solvability equivalence holds in this domain
    std::optional<bool> system_solvable;
    std::optional<bool> quartic_solvable;
    std::optional<SolutionQuadruple> system_witness;
    std::optional<QuarticTriple> quartic_witness;
    std::string note;
};

namespace detail {

inline std::optional<QuarticTriple> quartic_primitive_mod(const SystemCoeffs& coeffs, i64 N) {
    if (N > 4096) throw BudgetExceeded("quartic_primitive_mod: modulus beyond budget");
    std::vector<std::vector<i64>> dz2(N);
    for (i64 z = 0; z < N; ++z)
        dz2[mul_mod(mod_reduce(coeffs.d, N), mul_mod(z, z, N), N)].push_back(z);
    i64 a = mod_reduce(coeffs.a, N), b = mod_reduce(coeffs.b, N), c = mod_reduce(coeffs.c, N);
    for (i64 x = 0; x < N; ++x)
        for (i64 y = 0; y < N; ++y) {
            i64 x2 = mul_mod(x, x, N), y2 = mul_mod(y, y, N);
            i64 lhs = add_mod(mul_mod(a, mul_mod(x2, x2, N), N),
                              mul_mod(b, mul_mod(x2, y2, N), N), N);
            lhs = add_mod(lhs, mul_mod(c, mul_mod(y2, y2, N), N), N);
            for (i64 z : dz2[lhs]) {
                i64 g = std::gcd(std::gcd(x, y), z);
                if (std::gcd(g, N) == 1)
                    return QuarticTriple{x, y, z, N, Classification::Primitive};
            }
        }
    return std::nullopt;
}

inline std::optional<QuarticTriple> quartic_search_height(const SystemCoeffs& coeffs, i64 H) {
    if (H > 20000) throw BudgetExceeded("quartic_search_height: height beyond budget");
    for (i64 x = 0; x <= H; ++x)
        for (i64 y = 0; y <= H; ++y) {
            if (x == 0 && y == 0) continue;
            __int128 x2 = __int128(x) * x, y2 = __int128(y) * y;
            __int128 val = coeffs.a * x2 * x2 + coeffs.b * x2 * y2 + coeffs.c * y2 * y2;
            if (coeffs.d == 0) {
                if (val == 0) return QuarticTriple{x, y, 0, 0, detail::classify_shape3(x, y, 0, 0)};
                continue;
            }
            if (val % coeffs.d != 0) continue;
            __int128 zz = val / coeffs.d;
            if (zz < 0) continue;
            i64 z = isqrt128(zz);
            if (__int128(z) * z == zz && z <= H)
                return QuarticTriple{x, y, z, 0, detail::classify_shape3(x, y, z, 0)};
        }
    return std::nullopt;
}

inline std::optional<SolutionQuadruple> system_search_height(const SystemCoeffs& coeffs, i64 H) {
    if (H > 20000) throw BudgetExceeded("system_search_height: height beyond budget");
    for (i64 u = 0; u <= H; ++u)
        for (i64 w = 0; w <= H; ++w) {
            __int128 uw = __int128(u) * w;
            i64 v = isqrt128(uw);
            if (__int128(v) * v != uw) continue;
            __int128 val = coeffs.a * __int128(u) * u + coeffs.b * __int128(v) * v +
                           coeffs.c * __int128(w) * w;
            if (coeffs.d == 0) {
                if (val == 0 && !(u == 0 && v == 0 && w == 0))
                    return SolutionQuadruple{u, v, w, 0, 0,
                                             detail::classify_shape4(u, v, w, 0, 0)};
                continue;
            }
            if (val % coeffs.d != 0) continue;
            __int128 zz = val / coeffs.d;
            if (zz < 0) continue;
            i64 z = isqrt128(zz);
            if (__int128(z) * z != zz || z > H) continue;
            if (u == 0 && v == 0 && w == 0 && z == 0) continue;
            return SolutionQuadruple{u, v, w, z, 0, detail::classify_shape4(u, v, w, z, 0)};
        }
    return std::nullopt;
}

}  // namespace detail

// Produce the solvability-equivalence record for one domain, with whatever
// witnesses the budgeted searches can supply.
inline TransferVerdict transfer_verdict(const SystemCoeffs& coeffs, const TransferQuery& query) {
    TransferVerdict out;
    out.coeffs = coeffs;
    out.query = query;

    using Domain = TransferQuery::Domain;
    switch (query.domain) {
        case Domain::Exact: {
            if (coeffs.d == 0) {
                out.system_solvable = true;
                out.quartic_solvable = true;
                out.system_witness = SolutionQuadruple{0, 0, 0, 1, 0, Classification::Primitive};
                out.quartic_witness = QuarticTriple{0, 0, 1, 0, Classification::Primitive};
                out.note = "d = 0: both sides have obvious solutions";
                break;
            }
            out.system_witness = detail::system_search_height(coeffs, query.height);
            out.quartic_witness = detail::quartic_search_height(coeffs, query.height);
            if (out.system_witness) out.system_solvable = true;
            if (out.quartic_witness) out.quartic_solvable = true;
            out.note = "exact searches bounded by height " + std::to_string(query.height);
            break;
        }
        case Domain::ModPk: {
            if (!is_prime(query.p) || query.k <= 1)
                throw InvalidInput("transfer_verdict: mod p^k domain needs prime p and k > 1");
            if (mod_reduce(coeffs.d, query.p * query.p) == 0)
                throw PreconditionFailed("transfer_verdict: p^2 | d outside the transfer hypotheses");
            i64 N = pow_checked(query.p, query.k);
            auto sys = brute_force_primitive_mod(coeffs, N, 4096);
            auto qua = detail::quartic_primitive_mod(coeffs, N);
            out.system_solvable = sys.has_value();
            out.quartic_solvable = qua.has_value();
            out.system_witness = sys;
            out.quartic_witness = qua;
            break;
        }
        case Domain::Real: {
            RealVerdict rv = real_solvable(coeffs);
            out.system_solvable = rv.solvable;
            out.quartic_solvable = rv.solvable;  // same criterion with s = (X/Y)^2
            out.note = rv.witness;
            break;
        }
        case Domain::Fp: {
            check_odd_prime(query.p);
            i64 p = query.p;
            i64 disc = sub_mod(mul_mod(mod_reduce(coeffs.b, p), mod_reduce(coeffs.b, p), p),
                               mul_mod(4 % p, mul_mod(mod_reduce(coeffs.a, p),
                                                      mod_reduce(coeffs.c, p), p), p), p);
            bool good = mod_reduce(coeffs.a, p) != 0 && mod_reduce(coeffs.c, p) != 0 &&
                        mod_reduce(coeffs.d, p) != 0 && disc != 0;
            if (good) {
                SolutionQuadruple s = solve_general_fp(coeffs.a, coeffs.b, coeffs.c, coeffs.d, p);
                out.system_witness = s;
                out.system_solvable = true;
                out.quartic_witness = system_to_quartic(s, coeffs);
                out.quartic_solvable = true;
            } else {
                auto sys = brute_force_primitive_mod(coeffs, p, 4096);
                auto qua = detail::quartic_primitive_mod(coeffs, p);
                out.system_solvable = sys.has_value();
                out.quartic_solvable = qua.has_value();
                out.system_witness = sys;
                out.quartic_witness = qua;
            }
            break;
        }
    }
    return out;
}

}  // namespace hasse
