#pragma once

// Exact modular arithmetic on 64-bit integers: powering, inverses, Legendre
// symbols via Euler's criterion, square roots mod p (Tonelli-Shanks), r-th
// power detection by exhaustive scan, and desk-scale factorization.
//
// All residues are canonicalized into [0, m).  Intermediate products go
// through unsigned __int128, so results are exact for every modulus below
// 2^62; larger moduli are rejected rather than silently truncated.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "hasse/errors.hpp"

namespace hasse {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Largest modulus for which a*b mod m stays exact through u128.
inline constexpr i64 kMaxModulus = i64(1) << 62;

// A canonical residue class: 0 <= value < modulus, modulus >= 2.
struct Residue {
    i64 value;
    i64 modulus;
};

// Arguments of an r-th power lifting problem: find a with a^r = N mod p^k.
struct LiftRequest {
    i64 n;
    i64 r;
    i64 p;
    int k;
};

inline void check_modulus(i64 m) {
    if (m < 2) throw InvalidInput("modulus must be >= 2");
    if (m >= kMaxModulus) throw InvalidInput("modulus too large for exact 64-bit arithmetic");
}

// Reduce an arbitrary signed value into [0, m).
inline i64 mod_reduce(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// a, b already in [0, m).
inline i64 mul_mod(i64 a, i64 b, i64 m) {
    return i64((u128(a) * u128(b)) % u128(m));
}

inline i64 add_mod(i64 a, i64 b, i64 m) {
    i64 s = a + b;  // both < 2^62, no overflow
    return s >= m ? s - m : s;
}

inline i64 sub_mod(i64 a, i64 b, i64 m) {
    i64 s = a - b;
    return s < 0 ? s + m : s;
}

// base^exp mod m by repeated squaring.  exp >= 0.
inline i64 mod_pow(i64 base, i64 exp, i64 m) {
    check_modulus(m);
    if (exp < 0) throw InvalidInput("mod_pow: negative exponent");
    i64 b = mod_reduce(base, m);
    i64 acc = 1 % m;
    while (exp > 0) {
        if (exp & 1) acc = mul_mod(acc, b, m);
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    return acc;
}

namespace detail {

// Extended gcd: returns g = gcd(a, b) and x, y with a*x + b*y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    x = 1; y = 0;
    i64 x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        std::swap(a, b); b -= q * a;
        std::swap(x, x1); x1 -= q * x;
        std::swap(y, y1); y1 -= q * y;
    }
    return a;
}

}  // namespace detail

// Multiplicative inverse of a mod m.  Throws NoInverse when gcd(a, m) > 1.
inline i64 inverse_mod(i64 a, i64 m) {
    check_modulus(m);
    i64 ar = mod_reduce(a, m);
    i64 x, y;
    i64 g = detail::ext_gcd(ar, m, x, y);
    if (g != 1) throw NoInverse("inverse_mod: arguments not coprime");
    return mod_reduce(x, m);
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs with the fixed
// base set {2, 3, ..., 37}.
inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    i64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    auto witness = [&](i64 a) {
        i64 x = 1;
        // n can be close to 2^63, so square through u128 directly
        i64 b = a % n, e = d;
        while (e > 0) {
            if (e & 1) x = i64((u128(x) * b) % u128(n));
            b = i64((u128(b) * b) % u128(n));
            e >>= 1;
        }
        if (x == 1 || x == n - 1) return false;
        for (int i = 1; i < s; ++i) {
            x = i64((u128(x) * x) % u128(n));
            if (x == n - 1) return false;
        }
        return true;  // composite witness found
    };
    for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (witness(a)) return false;
    }
    return true;
}

inline void check_odd_prime(i64 p) {
    if (p == 2 || !is_prime(p)) throw InvalidInput("expected an odd prime");
}

// Legendre symbol values are plain ints in {-1, 0, +1}.
using LegendreValue = int;

namespace detail {

// Euler's criterion, no primality re-check (callers validate p once).
inline LegendreValue legendre_nocheck(i64 a, i64 p) {
    i64 ar = mod_reduce(a, p);
    if (ar == 0) return 0;
    i64 e = mod_pow(ar, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

}  // namespace detail

// Legendre symbol (a/p) for an odd prime p, by Euler's criterion.
inline LegendreValue legendre(i64 a, i64 p) {
    check_odd_prime(p);
    return detail::legendre_nocheck(a, p);
}

// Least square root of a mod p (odd prime), or nullopt for nonresidues.
// Tonelli-Shanks, with the p = 3 mod 4 exponent shortcut.
inline std::optional<i64> sqrt_mod_p(i64 a, i64 p) {
    check_odd_prime(p);
    i64 ar = mod_reduce(a, p);
    if (ar == 0) return 0;
    if (detail::legendre_nocheck(ar, p) != 1) return std::nullopt;
    i64 r;
    if (p % 4 == 3) {
        r = mod_pow(ar, (p + 1) / 4, p);
    } else {
        // write p - 1 = q * 2^s with q odd
        i64 q = p - 1;
        int s = 0;
        while ((q & 1) == 0) { q >>= 1; ++s; }
        i64 z = 2;
        while (detail::legendre_nocheck(z, p) != -1) ++z;
        i64 c = mod_pow(z, q, p);
        r = mod_pow(ar, (q + 1) / 2, p);
        i64 t = mod_pow(ar, q, p);
        int m = s;
        while (t != 1) {
            i64 t2 = t;
            int i = 0;
            while (t2 != 1) { t2 = mul_mod(t2, t2, p); ++i; }
            i64 b = c;
            for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
            r = mul_mod(r, b, p);
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            m = i;
        }
    }
    if (mul_mod(r, r, p) != ar) throw IdentityCheckFailed("sqrt_mod_p: root does not verify");
    return std::min(r, p - r);
}

// Is a an r-th power mod m?  Exhaustive scan; returns the least witness.
// Oracle-grade and correct for every modulus; fast paths live elsewhere.
inline std::optional<i64> is_rth_power_mod(i64 a, i64 r, i64 m) {
    check_modulus(m);
    if (r < 1) throw InvalidInput("is_rth_power_mod: exponent must be >= 1");
    if (m > (i64(1) << 26)) throw BudgetExceeded("is_rth_power_mod: scan budget exceeded");
    i64 ar = mod_reduce(a, m);
    for (i64 x = 0; x < m; ++x) {
        if (mod_pow(x, r, m) == ar) return x;
    }
    return std::nullopt;
}

// Fourth-power test mod an odd prime for p-coprime a, via the exponent
// (p-1)/gcd(4, p-1).  For p = 3 mod 4 this coincides with the square test.
inline bool is_fourth_power_mod_prime(i64 a, i64 p) {
    check_odd_prime(p);
    i64 ar = mod_reduce(a, p);
    if (ar == 0) throw InvalidInput("is_fourth_power_mod_prime: p divides a");
    i64 g = (p - 1) % 4 == 0 ? 4 : 2;
    return mod_pow(ar, (p - 1) / g, p) == 1;
}

// Exact floor square root of a nonnegative 128-bit value.
inline i64 isqrt128(__int128 n) {
    if (n < 0) throw InvalidInput("isqrt128: negative argument");
    i64 r = i64(sqrtl((long double)n));
    while (r > 0 && __int128(r) * r > n) --r;
    while (__int128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

// p-adic valuation of n != 0.
inline int valuation(i64 n, i64 p) {
    if (n == 0) throw InvalidInput("valuation of 0");
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

// p^k as i64, rejecting overflow past the exact range.
inline i64 pow_checked(i64 p, int k) {
    i64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > kMaxModulus / p) throw InvalidInput("prime power exceeds exact 64-bit range");
        r *= p;
    }
    return r;
}

// Trial-division factorization for desk-scale inputs.  Divides out primes up
// to 10^6 and accepts a prime (or squared-prime) cofactor, which covers all
// |n| <= 10^12 and most larger inputs; anything else is rejected loudly.
inline std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n == 0) throw InvalidInput("factorize(0)");
    if (n < 0) n = -n;
    std::vector<std::pair<i64, int>> out;
    for (i64 p = 2; p <= 1000000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    if (n > 1) {
        if (is_prime(n)) {
            out.emplace_back(n, 1);
        } else {
            i64 s = isqrt128(n);
            if (s * s == n && is_prime(s)) {
                out.emplace_back(s, 2);
            } else {
                throw BudgetExceeded("factorize: cofactor beyond trial-division budget");
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_square_free(i64 n) {
    if (n == 0) return false;
    for (auto& [p, e] : factorize(n)) {
        (void)p;
        if (e > 1) return false;
    }
    return true;
}

}  // namespace hasse
