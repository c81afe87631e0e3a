#pragma once

// Shared domain types for the system
//
//     a U^2 + b V^2 + c W^2 = d Z^2,      U W = V^2
//
// plus the solution classifier (trivial / nontrivial / primitive / strong)
// and an exhaustive lexicographic enumerator of solutions modulo N that the
// decision and oracle layers build on.

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hasse/modarith.hpp"

namespace hasse {

// Coefficients of one system.  b = 0 throughout the core family; the
// appendix routines accept general b.  Individual operations validate the
// constraints they need (acd != 0, b^2 - 4ac != 0, ...) on entry.
struct SystemCoeffs {
    i64 a = 0;
    i64 b = 0;
    i64 c = 0;
    i64 d = 0;
};

enum class Classification { Trivial, Nontrivial, Primitive, Strong };

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::Trivial: return "trivial";
        case Classification::Nontrivial: return "nontrivial";
        case Classification::Primitive: return "primitive";
        case Classification::Strong: return "strong";
    }
    return "?";
}

// One candidate solution.  modulus >= 2 for a residue tuple, modulus == 0
// marks an exact integer tuple.
struct SolutionQuadruple {
    i64 u = 0, v = 0, w = 0, z = 0;
    i64 modulus = 0;
    Classification classification = Classification::Trivial;

    bool exact() const { return modulus == 0; }
};

// Classify (u, v, w, z) modulo p^k with respect to the coefficients:
//   trivial    all coordinates = 0 mod p^k
//   primitive  gcd of the coordinates coprime to p
//   strong     primitive and one of a*u, c*w, d*z nonzero mod p
// Only the shape is classified; whether the tuple actually solves the
// congruences is a separate check.
inline Classification classify_solution(i64 u, i64 v, i64 w, i64 z,
                                         const SystemCoeffs& coeffs, i64 p, int k) {
    if (!is_prime(p)) throw InvalidInput("classify_solution: p must be prime");
    if (k < 1) throw InvalidInput("classify_solution: k must be >= 1");
    i64 m = pow_checked(p, k);
    u = mod_reduce(u, m); v = mod_reduce(v, m);
    w = mod_reduce(w, m); z = mod_reduce(z, m);
    if (u == 0 && v == 0 && w == 0 && z == 0) return Classification::Trivial;
    i64 g = std::gcd(std::gcd(u, v), std::gcd(w, z));
    if (g % p == 0) return Classification::Nontrivial;
    bool strong = mul_mod(mod_reduce(coeffs.a, p), u % p, p) != 0 ||
                  mul_mod(mod_reduce(coeffs.c, p), w % p, p) != 0 ||
                  mul_mod(mod_reduce(coeffs.d, p), z % p, p) != 0;
    return strong ? Classification::Strong : Classification::Primitive;
}

inline Classification classify_solution(const SolutionQuadruple& s,
                                         const SystemCoeffs& coeffs, i64 p, int k) {
    return classify_solution(s.u, s.v, s.w, s.z, coeffs, p, k);
}

// Does (u, v, w, z) satisfy both congruences mod m?
inline bool solves_mod(const SystemCoeffs& coeffs, i64 u, i64 v, i64 w, i64 z, i64 m) {
    check_modulus(m);
    u = mod_reduce(u, m); v = mod_reduce(v, m);
    w = mod_reduce(w, m); z = mod_reduce(z, m);
    i64 lhs = add_mod(mul_mod(mod_reduce(coeffs.a, m), mul_mod(u, u, m), m),
                      mul_mod(mod_reduce(coeffs.b, m), mul_mod(v, v, m), m), m);
    lhs = add_mod(lhs, mul_mod(mod_reduce(coeffs.c, m), mul_mod(w, w, m), m), m);
    i64 rhs = mul_mod(mod_reduce(coeffs.d, m), mul_mod(z, z, m), m);
    if (lhs != rhs) return false;
    return mul_mod(u, w, m) == mul_mod(v, v, m);
}

// Exact integer check, guarded against overflow by 128-bit accumulation.
inline bool solves_exact(const SystemCoeffs& coeffs, i64 u, i64 v, i64 w, i64 z) {
    __int128 lhs = __int128(coeffs.a) * u * u + __int128(coeffs.b) * v * v +
                   __int128(coeffs.c) * w * w;
    __int128 rhs = __int128(coeffs.d) * z * z;
    if (lhs != rhs) return false;
    return __int128(u) * w == __int128(v) * v;
}

// Enumerate every solution of the two congruences mod N in lexicographic
// (u, v, w, z) order and feed it to fn; stop early when fn returns true.
//
// For fixed (u, v) the w's are the solutions of u*w = v^2 (mod N), an
// arithmetic progression, so the cost is ~N^2 * avg#w instead of N^4;
// z comes from a precomputed table of d*z^2 values.
template <typename Fn>
void for_each_solution_mod(const SystemCoeffs& coeffs, i64 N, Fn&& fn) {
    check_modulus(N);
    i64 a = mod_reduce(coeffs.a, N), b = mod_reduce(coeffs.b, N);
    i64 c = mod_reduce(coeffs.c, N), d = mod_reduce(coeffs.d, N);

    // dz2[t] = ascending list of z with d*z^2 = t (mod N); sq[x] = x^2 mod N
    std::vector<std::vector<i64>> dz2(N);
    std::vector<i64> sq(N);
    for (i64 z = 0; z < N; ++z) {
        sq[z] = mul_mod(z, z, N);
        dz2[mul_mod(d, sq[z], N)].push_back(z);
    }

    std::vector<i64> ws;
    for (i64 u = 0; u < N; ++u) {
        i64 g = std::gcd(u, N);
        i64 step = u == 0 ? 0 : N / g;
        i64 uinv = u == 0 ? 0 : inverse_mod(u / g, step);
        i64 au2 = mul_mod(a, sq[u], N);
        for (i64 v = 0; v < N; ++v) {
            i64 t = sq[v];
            ws.clear();
            if (u == 0) {
                if (t != 0) continue;
                for (i64 w = 0; w < N; ++w) ws.push_back(w);
            } else {
                if (t % g != 0) continue;
                i64 w0 = mul_mod(mod_reduce(t / g, step), uinv, step);
                for (i64 j = 0; j < g; ++j) ws.push_back(w0 + j * step);
            }
            i64 lhs_uv = add_mod(au2, mul_mod(b, t, N), N);
            for (i64 w : ws) {
                i64 lhs = add_mod(lhs_uv, mul_mod(c, sq[w], N), N);
                for (i64 z : dz2[lhs]) {
                    if (fn(u, v, w, z)) return;
                }
            }
        }
    }
}

// Is the reduced tuple primitive mod N (gcd of entries coprime to N)?
inline bool primitive_mod(i64 u, i64 v, i64 w, i64 z, i64 N) {
    i64 g = std::gcd(std::gcd(u, v), std::gcd(w, z));
    return std::gcd(g, N) == 1;
}

}  // namespace hasse
