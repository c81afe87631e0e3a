#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hasse/certificate_json.hpp"
#include "hasse/global.hpp"
#include "oracles.hpp"

using namespace hasse;

TEST_CASE("fourth_power_obstruction") {
    CHECK(fourth_power_obstruction(17, 2));   // 2 is a square but not a fourth power mod 17
    CHECK(fourth_power_obstruction(17, 19));  // 19 = 2 mod 17
    CHECK_FALSE(fourth_power_obstruction(17, 1));
    CHECK_FALSE(fourth_power_obstruction(17, 13));  // 13 = 9^4 mod 17

    CHECK_THROWS_AS(fourth_power_obstruction(15, 2), PreconditionFailed);   // composite
    CHECK_THROWS_AS(fourth_power_obstruction(19, 2), PreconditionFailed);   // 19 = 3 mod 8
    CHECK_THROWS_AS(fourth_power_obstruction(17, 4), PreconditionFailed);   // 4 not square-free
    CHECK_THROWS_AS(fourth_power_obstruction(17, 34), PreconditionFailed);  // 17 | 34
}

TEST_CASE("obstruction is one-directional") {
    // when d IS a fourth power mod q the obstruction asserts nothing; we
    // only check that it reports false and that certification rejects
    std::mt19937_64 rng(42);
    std::vector<i64> qs;
    for (i64 q = 17; q < 2000; q += 8)
        if (is_prime(q)) qs.push_back(q);
    int done = 0;
    while (done < 200) {
        i64 q = qs[rng() % qs.size()];
        i64 x = 2 + i64(rng() % (q - 2));
        i64 d = mod_pow(x, 4, q);  // a fourth power mod q
        if (d == 0 || !is_square_free(d) || d % q == 0) continue;
        CHECK_FALSE(fourth_power_obstruction(q, d));
        CHECK_FALSE(certify_counterexample(q, d).certificate.has_value());
        ++done;
    }
}

TEST_CASE("global_search_height") {
    auto s = global_search_height({1, 0, -1, 2}, 2);
    REQUIRE(s.has_value());
    CHECK(std::array<i64, 4>{s->u, s->v, s->w, s->z} == std::array<i64, 4>{1, 1, 1, 0});

    CHECK_FALSE(global_search_height({1, 0, -17, 2}, 1000).has_value());

    // hits re-verify exactly
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        i64 a = i64(rng() % 11) - 5, b = i64(rng() % 11) - 5;
        i64 c = i64(rng() % 11) - 5, d = i64(rng() % 11) - 5;
        if (d == 0) continue;
        auto hit = global_search_height({a, b, c, d}, 30);
        if (hit) {
            REQUIRE(solves_exact({a, b, c, d}, hit->u, hit->v, hit->w, hit->z));
            REQUIRE((hit->u || hit->v || hit->w || hit->z));
        }
    }

    CHECK_THROWS_AS(global_search_height({1, 0, -17, 2}, 100000), BudgetExceeded);
}

TEST_CASE("certify_counterexample accepts the classical pairs") {
    CertifyResult r1 = certify_counterexample(17, 2);
    REQUIRE(r1.certificate.has_value());
    const CounterexampleCertificate& c = *r1.certificate;
    CHECK((c.c1 && c.c2 && c.c3 && c.c4));
    CHECK(c.obstruction);
    CHECK(c.local.locally_solvable);

    CertifyResult r2 = certify_counterexample(17, 19);
    REQUIRE(r2.certificate.has_value());

    CertifyResult r3 = certify_counterexample(17, -2);
    REQUIRE(r3.certificate.has_value());  // negative d is admissible
}

TEST_CASE("certify_counterexample rejects with the first failing condition") {
    CHECK(certify_counterexample(17, 4).failure == "condition (2): d is not square-free");
    CHECK(certify_counterexample(15, 2).failure == "condition (1): q is not a prime");
    CHECK(certify_counterexample(19, 2).failure == "condition (1): q is not 1 mod 16");
    CHECK(certify_counterexample(17, 0).failure == "condition (2): d is zero");
    CHECK(certify_counterexample(17, 34).failure == "condition (2): q divides d");
    CHECK(certify_counterexample(17, 3).failure == "condition (3): d is not a square mod q");
    CHECK(certify_counterexample(17, 13).failure == "condition (3): d is a fourth power mod q");
    // d = 15 is a square but not a fourth power mod 17, yet 17 = 2 is not
    // even a square mod 3, so condition (4) breaks at p = 3
    CHECK(certify_counterexample(17, 15).failure == "condition (4): q is not a fourth power mod 3");
}

TEST_CASE("footnote family: q = 9 mod 16 with the mod-8 relaxation") {
    // q = 41: 2 is not a fourth power mod 41, and (1, 1, 1, 2) is a strong
    // solution mod 16 of U^2 - 41 W^2 = 2 Z^2
    CHECK(solves_mod({1, 0, -41, 2}, 1, 1, 1, 2, 16));
    CHECK(classify_solution(1, 1, 1, 2, {1, 0, -41, 2}, 2, 4) == Classification::Strong);

    CHECK_FALSE(certify_counterexample(41, 2).certificate.has_value());  // strict mod 16
    SearchConfig relaxed;
    relaxed.hypothesis = HypothesisMode::Mod8;
    CertifyResult r = certify_counterexample(41, 2, relaxed);
    REQUIRE(r.certificate.has_value());
    CHECK(r.certificate->hypothesis == HypothesisMode::Mod8);
    CHECK(r.certificate->local.locally_solvable);
}

TEST_CASE("certify with the extendability cross-check enabled") {
    SearchConfig cfg;
    cfg.lambda = 3;  // require primitive solutions extending to p^3 at each certified prime
    CertifyResult r = certify_counterexample(17, 2, cfg);
    REQUIRE(r.certificate.has_value());
}

TEST_CASE("search_counterexamples") {
    SearchConfig cfg;
    cfg.q_bound = 20;
    cfg.d_bound = 2;
    auto certs = search_counterexamples(cfg);
    bool has_17_2 = false;
    for (auto& c : certs) has_17_2 |= (c.q == 17 && c.d == 2);
    CHECK(has_17_2);

    cfg.d_bound = 19;
    certs = search_counterexamples(cfg);
    bool has_17_19 = false;
    for (auto& c : certs) has_17_19 |= (c.q == 17 && c.d == 19);
    CHECK(has_17_19);

    SearchConfig small;
    small.q_bound = 16;
    small.d_bound = 50;
    CHECK(search_counterexamples(small).empty());
}

TEST_CASE("search results are thread-count independent") {
    SearchConfig one;
    one.q_bound = 120;
    one.d_bound = 6;
    one.height = 60;
    SearchConfig four = one;
    four.threads = 4;
    auto a = search_counterexamples(one);
    auto b = search_counterexamples(four);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].q == b[i].q);
        CHECK(a[i].d == b[i].d);
    }
    // lexicographic (q, d) order
    for (size_t i = 1; i < a.size(); ++i) {
        CHECK((a[i - 1].q < a[i].q || (a[i - 1].q == a[i].q && a[i - 1].d < a[i].d)));
    }
}

TEST_CASE("emitted certificates re-validate from scratch") {
    SearchConfig cfg;
    cfg.q_bound = 120;
    cfg.d_bound = 6;
    cfg.height = 500;
    auto certs = search_counterexamples(cfg);
    REQUIRE_FALSE(certs.empty());
    for (const auto& cert : certs) {
        // every stored witness satisfies its congruences
        for (const auto& dec : cert.local.primes) {
            REQUIRE(dec.solvable);
            REQUIRE(dec.witness.has_value());
            REQUIRE(solves_mod(dec.witness_system, dec.witness->u, dec.witness->v,
                               dec.witness->w, dec.witness->z, dec.witness->modulus));
        }
        REQUIRE(fourth_power_obstruction(cert.q, cert.d));
        REQUIRE_FALSE(global_search_height({1, 0, -cert.q, cert.d}, 500).has_value());
        // and the serialized form passes the verifier
        VerifyResult v = verify_certificate(certificate_to_json(cert));
        INFO("q=" << cert.q << " d=" << cert.d << ": " << v.first_failure);
        REQUIRE(v.ok);
    }
}

TEST_CASE("verifier rejects tampered certificates") {
    auto cert = certify_counterexample(17, 2).certificate;
    REQUIRE(cert.has_value());
    ordered_json good = certificate_to_json(*cert);
    REQUIRE(verify_certificate(good).ok);

    ordered_json bad = good;
    bad["local"]["primes"][1]["witness"] = {5, 0, 0, 1};
    VerifyResult v1 = verify_certificate(bad);
    CHECK_FALSE(v1.ok);
    CHECK(v1.first_failure == "local: witness fails congruences at p = 17");

    ordered_json bad2 = good;
    bad2["q"] = 15;
    CHECK_FALSE(verify_certificate(bad2).ok);
    CHECK(verify_certificate(bad2).first_failure == "condition (1)");

    ordered_json bad3 = good;
    bad3["local"]["primes"].erase(0);
    CHECK_FALSE(verify_certificate(bad3).ok);

    ordered_json bad4 = good;
    bad4.erase("obstruction");
    CHECK_FALSE(verify_certificate(bad4).ok);

    ordered_json bad5 = good;
    bad5["d"] = 13;  // a fourth power mod 17
    CHECK_FALSE(verify_certificate(bad5).ok);
}

TEST_CASE("certificate JSON is byte-stable") {
    auto c1 = certify_counterexample(17, 2).certificate;
    auto c2 = certify_counterexample(17, 2).certificate;
    REQUIRE(c1.has_value());
    REQUIRE(c2.has_value());
    CHECK(certificate_to_json(*c1).dump() == certificate_to_json(*c2).dump());
}
