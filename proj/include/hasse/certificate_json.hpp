#pragma once

// JSON serialization of counterexample certificates and independent
// re-verification of serialized certificates.
//
// Schema (keys are stable; ordered_json keeps output byte-stable):
//
// {
//   "q": 17, "d": 2,
//   "hypothesis": "q = 1 (mod 16)",
//   "conditions": {"c1": true, "c2": true, "c3": true, "c4": true},
//   "local": {
//     "real": true,
//     "real_witness": "...",
//     "primes": [
//       {"p": 2, "witness": [1,1,1,0], "modulus": 16,
//        "case": "(a,c,dp)", "system": [1,-17,2], "companion": false}
//     ]
//   },
//   "obstruction": true,
//   "height_checked": 200
// }

#include <string>

#include <json.hpp>

#include "hasse/global.hpp"

namespace hasse {

using ordered_json = nlohmann::ordered_json;

inline ordered_json certificate_to_json(const CounterexampleCertificate& cert) {
    ordered_json j;
    j["q"] = cert.q;
    j["d"] = cert.d;
    j["hypothesis"] = to_string(cert.hypothesis);
    j["conditions"] = {{"c1", cert.c1}, {"c2", cert.c2}, {"c3", cert.c3}, {"c4", cert.c4}};
    ordered_json local;
    local["real"] = cert.local.real.solvable;
    local["real_witness"] = cert.local.real.witness;
    ordered_json primes = ordered_json::array();
    for (const auto& dec : cert.local.primes) {
        ordered_json e;
        e["p"] = dec.p;
        if (dec.witness) {
            e["witness"] = {dec.witness->u, dec.witness->v, dec.witness->w, dec.witness->z};
            e["modulus"] = dec.witness->modulus;
        }
        e["case"] = to_string(dec.transcript.terminal);
        e["system"] = {dec.witness_system.a, dec.witness_system.c, dec.witness_system.d};
        e["companion"] = dec.companion;
        primes.push_back(e);
    }
    local["primes"] = primes;
    j["local"] = local;
    j["obstruction"] = cert.obstruction;
    j["height_checked"] = cert.height_checked;
    return j;
}

struct VerifyResult {
    bool ok = false;
    std::string first_failure;
};

// Recompute every condition, witness and obstruction in a serialized
// certificate.  Returns the first failing check by name.
inline VerifyResult verify_certificate(const ordered_json& j) {
    auto fail = [](const std::string& s) { return VerifyResult{false, s}; };
    try {
        for (const char* key : {"q", "d", "hypothesis", "conditions", "local",
                                "obstruction", "height_checked"}) {
            if (!j.contains(key)) return fail(std::string("missing field: ") + key);
        }
        i64 q = j["q"].get<i64>();
        i64 d = j["d"].get<i64>();
        std::string hyp = j["hypothesis"].get<std::string>();
        HypothesisMode mode;
        if (hyp == to_string(HypothesisMode::Mod16)) mode = HypothesisMode::Mod16;
        else if (hyp == to_string(HypothesisMode::Mod8)) mode = HypothesisMode::Mod8;
        else return fail("unknown hypothesis tag");

        // conditions (1)-(4), recomputed
        i64 mod = mode == HypothesisMode::Mod16 ? 16 : 8;
        if (!(j["conditions"]["c1"].get<bool>() && q >= 2 && is_prime(q) && q % mod == 1))
            return fail("condition (1)");
        if (!(j["conditions"]["c2"].get<bool>() && d != 0 && is_square_free(d) &&
              mod_reduce(d, q) != 0))
            return fail("condition (2)");
        if (!(j["conditions"]["c3"].get<bool>() && legendre(d, q) == 1 &&
              !is_fourth_power_mod_prime(mod_reduce(d, q), q)))
            return fail("condition (3)");
        if (!j["conditions"]["c4"].get<bool>()) return fail("condition (4)");
        for (auto& [p, e] : factorize(d)) {
            (void)e;
            if (p != 2 && !is_fourth_power_mod_prime(mod_reduce(q, p), p))
                return fail("condition (4) at p = " + std::to_string(p));
        }

        SystemCoeffs coeffs{1, 0, -q, d};

        // real solvability
        if (!j["local"].contains("real") || !j["local"]["real"].get<bool>())
            return fail("local: real flag");
        if (!real_solvable(coeffs).solvable) return fail("local: real solvability recomputation");

        // witnesses: every stored prime entry must carry a strong solution of
        // the system it names, and that system must be the terminal (or
        // companion) reduction of (1, -q, d) at p
        std::set<i64> required{2};
        for (i64 x : {coeffs.a, coeffs.c, coeffs.d})
            for (auto& [p, e] : factorize(x)) {
                (void)e;
                required.insert(p);
            }
        std::set<i64> seen;
        for (const auto& entry : j["local"]["primes"]) {
            i64 p = entry["p"].get<i64>();
            if (!is_prime(p)) return fail("local: listed p not prime");
            seen.insert(p);
            if (!entry.contains("witness"))
                return fail("local: missing witness at p = " + std::to_string(p));
            auto wit = entry["witness"];
            auto sys = entry["system"];
            if (wit.size() != 4 || sys.size() != 3) return fail("local: malformed entry");
            i64 m = entry["modulus"].get<i64>();
            if (p == 2 ? m != 16 : m != p)
                return fail("local: wrong witness modulus at p = " + std::to_string(p));
            SystemCoeffs wsys{sys[0].get<i64>(), 0, sys[1].get<i64>(), sys[2].get<i64>()};
            bool companion = entry.value("companion", false);
            ReductionTranscript tr = reduce_system(coeffs.a, coeffs.c, coeffs.d, p);
            if (companion) {
                if (tr.terminal != LocalCase::CP2) return fail("local: companion outside (a,cp^2,d)");
                if (wsys.a != detail::checked_mul(tr.a, p * p) || wsys.c != tr.cu || wsys.d != tr.d)
                    return fail("local: companion system mismatch at p = " + std::to_string(p));
            } else {
                if (wsys.a != tr.a || wsys.c != tr.c || wsys.d != tr.d)
                    return fail("local: terminal system mismatch at p = " + std::to_string(p));
            }
            i64 u = wit[0].get<i64>(), v = wit[1].get<i64>(), w = wit[2].get<i64>(),
                z = wit[3].get<i64>();
            if (!solves_mod(wsys, u, v, w, z, m))
                return fail("local: witness fails congruences at p = " + std::to_string(p));
            int k = p == 2 ? 4 : 1;
            if (classify_solution(u, v, w, z, wsys, p, k) != Classification::Strong)
                return fail("local: witness not strong at p = " + std::to_string(p));
        }
        for (i64 p : required) {
            if (!seen.count(p)) return fail("local: missing prime p = " + std::to_string(p));
        }

        // obstruction
        if (!j["obstruction"].get<bool>()) return fail("obstruction flag");
        if (!fourth_power_obstruction(q, d)) return fail("obstruction recomputation");

        // integer sweep up to the recorded height
        i64 h = std::min<i64>(j["height_checked"].get<i64>(), 20000);
        if (global_search_height(coeffs, h)) return fail("integer solution below recorded height");
    } catch (const Error& e) {
        return fail(std::string("exception: ") + e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(std::string("malformed JSON: ") + e.what());
    }
    return {true, ""};
}

}  // namespace hasse
