#pragma once

// Global nonsolvability: the fourth-power obstruction, certification of
// counterexample pairs (q, d), and family search.
//
// For the system U^2 - q W^2 = d Z^2, U W = V^2 with
//   (1) q prime, q = 1 mod 16,
//   (2) d nonzero, square-free, q coprime to d,
//   (3) d a square but not a fourth power mod q,
//   (4) q a fourth power mod every odd prime dividing d,
// the system is locally solvable everywhere yet has no nontrivial integer
// solution: any primitive integer solution would force d to be a fourth
// power mod q (descent through quadratic reciprocity), against (3).
//
// A certificate records the four conditions, the local witnesses, the
// obstruction, and the height actually swept for integer solutions, so a
// third party can re-verify everything from (q, d) alone.

#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hasse/local.hpp"
#include "hasse/modarith.hpp"
#include "hasse/padic.hpp"
#include "hasse/system.hpp"

namespace hasse {

enum class HypothesisMode { Mod16, Mod8 };

inline const char* to_string(HypothesisMode m) {
    return m == HypothesisMode::Mod16 ? "q = 1 (mod 16)" : "q = 1 (mod 8)";
}

struct SearchConfig {
    i64 q_bound = 100;
    i64 d_bound = 20;
    i64 height = 200;                                // integer-search bound per certificate
    int lambda = 0;                                  // >0: extendability cross-check depth
    HypothesisMode hypothesis = HypothesisMode::Mod16;
    int threads = 1;
};

struct CounterexampleCertificate {
    i64 q = 0;
    i64 d = 0;
    bool c1 = false, c2 = false, c3 = false, c4 = false;
    HypothesisMode hypothesis = HypothesisMode::Mod16;
    LocalReport local;
    bool obstruction = false;
    i64 height_checked = 0;
};

struct CertifyResult {
    std::optional<CounterexampleCertificate> certificate;
    std::string failure;  // first failing condition when empty certificate
};

// True iff d is NOT a fourth power mod q, i.e. the system U^2 - q W^2 =
// d Z^2, U W = V^2 has no nontrivial integer solution.  The hypotheses
// (q = 1 mod 8 prime, d square-free, q coprime to d) are rejected rather
// than assumed.
inline bool fourth_power_obstruction(i64 q, i64 d) {
    if (q < 2 || !is_prime(q)) throw PreconditionFailed("fourth_power_obstruction: q must be prime");
    if (q % 8 != 1) throw PreconditionFailed("fourth_power_obstruction: q must be 1 mod 8");
    if (d == 0 || !is_square_free(d))
        throw PreconditionFailed("fourth_power_obstruction: d must be nonzero and square-free");
    if (mod_reduce(d, q) == 0) throw PreconditionFailed("fourth_power_obstruction: q divides d");
    return !is_fourth_power_mod_prime(mod_reduce(d, q), q);
}

// Least nontrivial integer solution with max coordinate <= H, scanning the
// sign-normalized quadrant u, v, w, z >= 0 in ascending (u, w) order, or
// nullopt.  The bounded empirical face of global nonsolvability.
inline std::optional<SolutionQuadruple> global_search_height(const SystemCoeffs& coeffs,
                                                             i64 H, i64 budget = 20000) {
    if (H < 0) throw InvalidInput("global_search_height: negative height");
    if (H > budget) throw BudgetExceeded("global_search_height: height beyond budget");
    if (coeffs.d == 0) throw InvalidInput("global_search_height: d must be nonzero");
    for (i64 u = 0; u <= H; ++u)
        for (i64 w = 0; w <= H; ++w) {
            __int128 uw = __int128(u) * w;
            i64 v = isqrt128(uw);
            if (__int128(v) * v != uw) continue;
            __int128 val = coeffs.a * __int128(u) * u + coeffs.b * __int128(v) * v +
                           coeffs.c * __int128(w) * w;
            if (val % coeffs.d != 0) continue;
            __int128 zz = val / coeffs.d;
            if (zz < 0) continue;
            i64 z = isqrt128(zz);
            if (__int128(z) * z != zz || z > H) continue;
            if (u == 0 && v == 0 && w == 0 && z == 0) continue;
            SolutionQuadruple s{u, v, w, z, 0, Classification::Nontrivial};
            i64 g = std::gcd(std::gcd(u, v), std::gcd(w, z));
            if (g == 1) s.classification = Classification::Primitive;
            return s;
        }
    return std::nullopt;
}

// Check conditions (1)-(4) for (q, d), assemble the local report and the
// obstruction, and sweep integers up to cfg.height.  On any failure the
// result names the first condition that broke.
inline CertifyResult certify_counterexample(i64 q, i64 d, const SearchConfig& cfg = {}) {
    i64 mod = cfg.hypothesis == HypothesisMode::Mod16 ? 16 : 8;
    if (q < 2 || !is_prime(q))
        return {std::nullopt, "condition (1): q is not a prime"};
    if (q % mod != 1)
        return {std::nullopt, std::string("condition (1): q is not 1 mod ") + std::to_string(mod)};
    if (d == 0)
        return {std::nullopt, "condition (2): d is zero"};
    if (!is_square_free(d))
        return {std::nullopt, "condition (2): d is not square-free"};
    if (mod_reduce(d, q) == 0)
        return {std::nullopt, "condition (2): q divides d"};
    if (legendre(d, q) != 1)
        return {std::nullopt, "condition (3): d is not a square mod q"};
    if (is_fourth_power_mod_prime(mod_reduce(d, q), q))
        return {std::nullopt, "condition (3): d is a fourth power mod q"};
    for (auto& [p, e] : factorize(d)) {
        (void)e;
        if (p == 2) continue;
        if (!is_fourth_power_mod_prime(mod_reduce(q, p), p))
            return {std::nullopt,
                    "condition (4): q is not a fourth power mod " + std::to_string(p)};
    }

    SystemCoeffs coeffs{1, 0, -q, d};
    LocalReport rep = decide_local(coeffs);
    if (!rep.locally_solvable)
        return {std::nullopt, "local solvability failed (expected only under the mod-8 relaxation)"};

    bool obstruction = fourth_power_obstruction(q, d);
    if (!obstruction)
        return {std::nullopt, "obstruction vanished despite condition (3)"};

    if (auto hit = global_search_height(coeffs, cfg.height))
        return {std::nullopt, "integer solution found below height bound"};

    if (cfg.lambda > 0) {
        // optional oracle: every certified prime must admit extendable
        // primitive solutions to depth lambda
        for (const auto& dec : rep.primes) {
            i64 plam = 1;
            bool fits = true;
            for (int i = 0; i < cfg.lambda; ++i) {
                if (plam > (i64(1) << 20) / dec.p) { fits = false; break; }
                plam *= dec.p;
            }
            if (!fits) continue;
            if (extendable_solutions(coeffs, dec.p, 1, cfg.lambda).empty())
                return {std::nullopt,
                        "extendability check failed at p = " + std::to_string(dec.p)};
        }
    }

    CounterexampleCertificate cert;
    cert.q = q;
    cert.d = d;
    cert.c1 = cert.c2 = cert.c3 = cert.c4 = true;
    cert.hypothesis = cfg.hypothesis;
    cert.local = std::move(rep);
    cert.obstruction = obstruction;
    cert.height_checked = cfg.height;
    return {cert, ""};
}

// All certified (q, d) with q <= q_bound, |d| <= d_bound, in lexicographic
// (q, d) order.  The q loop is parallelized; output order is independent of
// the thread count.
inline std::vector<CounterexampleCertificate> search_counterexamples(const SearchConfig& cfg) {
    i64 mod = cfg.hypothesis == HypothesisMode::Mod16 ? 16 : 8;
    std::vector<i64> qs;
    for (i64 q = 17; q <= cfg.q_bound; q += 2) {
        if (q % mod == 1 && is_prime(q)) qs.push_back(q);
    }
    std::vector<std::vector<CounterexampleCertificate>> per_q(qs.size());

    auto work = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            for (i64 d = -cfg.d_bound; d <= cfg.d_bound; ++d) {
                if (d == 0) continue;
                CertifyResult res = certify_counterexample(qs[i], d, cfg);
                if (res.certificate) per_q[i].push_back(std::move(*res.certificate));
            }
        }
    };

    int threads = std::max(1, cfg.threads);
    if (threads == 1 || qs.size() <= 1) {
        work(0, qs.size());
    } else {
        size_t n = qs.size();
        size_t chunk = (n + size_t(threads) - 1) / size_t(threads);
        std::vector<std::thread> pool;
        for (size_t lo = 0; lo < n; lo += chunk) {
            pool.emplace_back(work, lo, std::min(n, lo + chunk));
        }
        for (auto& t : pool) t.join();
    }

    std::vector<CounterexampleCertificate> out;
    for (auto& v : per_q)
        for (auto& cert : v) out.push_back(std::move(cert));
    return out;
}

}  // namespace hasse
