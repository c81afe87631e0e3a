#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hasse/lifting.hpp"
#include "hasse/local.hpp"
#include "oracles.hpp"

using namespace hasse;

TEST_CASE("lift_rth_power examples") {
    Residue r = lift_rth_power({2, 2, 7, 2});
    CHECK(r.value == 10);  // 100 = 2*49 + 2
    CHECK(r.modulus == 49);

    CHECK(lift_rth_power({1, 3, 5, 4}).value == 1);
    CHECK(lift_rth_power({1, 7, 11, 2}).value == 1);

    // 2 is not a fourth power mod 17
    CHECK_THROWS_AS(lift_rth_power({2, 4, 17, 3}), PreconditionFailed);
    // p | N and p | r are rejected
    CHECK_THROWS_AS(lift_rth_power({14, 2, 7, 2}), PreconditionFailed);
    CHECK_THROWS_AS(lift_rth_power({2, 7, 7, 2}), PreconditionFailed);
}

TEST_CASE("lift_rth_power re-verifies on random admissible input") {
    std::mt19937_64 rng(808);
    std::vector<i64> ps;
    for (i64 p = 2; p < 100; ++p)
        if (is_prime(p)) ps.push_back(p);
    int done = 0;
    while (done < 2000) {
        i64 p = ps[rng() % ps.size()];
        i64 r = 1 + i64(rng() % 6);
        if (r % p == 0) continue;
        int kmax = 1;
        while (pow_checked(p, kmax + 1) <= 1000000) ++kmax;
        int k = 1 + int(rng() % kmax);
        i64 x = 1 + i64(rng() % (p - 1));
        i64 n = mod_pow(x, r, p) + p * i64(rng() % 1000);  // an r-th power mod p
        if (n % p == 0) continue;
        Residue res = lift_rth_power({n, r, p, k});
        REQUIRE(mod_pow(res.value, r, res.modulus) == mod_reduce(n, res.modulus));
        ++done;
    }
}

TEST_CASE("lift_fourth_power_2adic") {
    Residue r = lift_fourth_power_2adic(17, 5);
    CHECK(r.modulus == 32);
    CHECK(mod_pow(r.value, 4, 32) == 17);
    CHECK(r.value == 5);  // induction from 1: 5^4 = 625 = 19*32 + 17

    CHECK(lift_fourth_power_2adic(1, 10).value == 1);
    // 3 is a fourth power mod 2 but not mod 2^k for k > 1
    CHECK(is_rth_power_mod(3, 4, 2) == 1);
    CHECK_FALSE(is_rth_power_mod(3, 4, 4).has_value());
    CHECK_THROWS_AS(lift_fourth_power_2adic(3, 2), PreconditionFailed);
    CHECK_THROWS_AS(lift_fourth_power_2adic(9, 8), PreconditionFailed);

    // re-verification up to 2^20
    std::mt19937_64 rng(6);
    for (int i = 0; i < 500; ++i) {
        int k = 1 + int(rng() % 20);
        i64 n = 1 + 16 * i64(rng() % 100000);
        Residue res = lift_fourth_power_2adic(n, k);
        REQUIRE(mod_pow(res.value, 4, res.modulus) == mod_reduce(n, res.modulus));
    }
}

TEST_CASE("classify_solution") {
    SystemCoeffs c137{1, 0, 3, 7};
    CHECK(classify_solution(0, 0, 0, 0, c137, 2, 3) == Classification::Trivial);
    CHECK(classify_solution(8, 8, 8, 8, c137, 2, 3) == Classification::Trivial);
    CHECK(classify_solution(1, 1, 1, 2, c137, 2, 3) == Classification::Strong);
    CHECK(classify_solution(2, 2, 2, 4, c137, 2, 3) == Classification::Nontrivial);

    // (p, p, p, 1) with p coprime to d is primitive and strong via dz
    SystemCoeffs sys{5, 0, 5, 3};
    CHECK(classify_solution(5, 5, 5, 1, sys, 5, 2) == Classification::Strong);
    // all coefficient products divisible by p: primitive but not strong
    SystemCoeffs sys2{5, 0, 5, 5};
    CHECK(classify_solution(1, 1, 1, 1, sys2, 5, 2) == Classification::Primitive);
}

TEST_CASE("lift_strong_solution produces verified chains") {
    SystemCoeffs lr{1, 0, -17, 2};
    SolutionQuadruple base{1, 1, 1, 1, 3, Classification::Strong};
    StrongSolutionChain chain = lift_strong_solution(lr, 3, base, 4);
    REQUIRE(chain.entries.size() == 4);
    for (size_t i = 0; i < chain.entries.size(); ++i) {
        const SolutionQuadruple& e = chain.entries[i];
        i64 m = pow_checked(3, chain.k_of(i));
        REQUIRE(e.modulus == m);
        REQUIRE(solves_mod(lr, e.u, e.v, e.w, e.z, m));
        REQUIRE(classify_solution(e, lr, 3, chain.k_of(i)) == Classification::Strong);
    }
    // entries at 3^2, 3^3 live inside the exhaustively enumerated solution set
    for (int k : {2, 3}) {
        i64 m = pow_checked(3, k);
        auto all = oracles::all_solutions_mod(lr, m);
        const SolutionQuadruple& e = chain.entries[size_t(k - 1)];
        bool found = false;
        for (auto& s : all)
            if (s == std::array<i64, 4>{e.u, e.v, e.w, e.z}) found = true;
        REQUIRE(found);
    }
}

TEST_CASE("lift_strong_solution from the (m, 0, 0, 1) seed at p | q") {
    // system (1, 0, -q, d) with p | q: (sqrt(d), 0, 0, 1) is strong mod p
    SystemCoeffs sys{1, 0, -17, 2};
    i64 p = 17;
    i64 m = *sqrt_mod_p(2, p);
    SolutionQuadruple base{m, 0, 0, 1, p, Classification::Strong};
    StrongSolutionChain chain = lift_strong_solution(sys, p, base, 4);
    for (size_t i = 0; i < chain.entries.size(); ++i) {
        const SolutionQuadruple& e = chain.entries[i];
        i64 mod = pow_checked(p, chain.k_of(i));
        REQUIRE(solves_mod(sys, e.u, e.v, e.w, e.z, mod));
        REQUIRE(classify_solution(e, sys, p, chain.k_of(i)) == Classification::Strong);
    }
}

TEST_CASE("lift_strong_solution at p = 2 from a mod-16 base") {
    SystemCoeffs lr{1, 0, -17, 2};
    SolutionQuadruple base{1, 1, 1, 0, 16, Classification::Strong};
    StrongSolutionChain chain = lift_strong_solution(lr, 2, base, 12);
    REQUIRE(chain.k_start == 4);
    REQUIRE(chain.entries.size() == 9);
    for (size_t i = 0; i < chain.entries.size(); ++i) {
        const SolutionQuadruple& e = chain.entries[i];
        i64 m = pow_checked(2, chain.k_of(i));
        REQUIRE(solves_mod(lr, e.u, e.v, e.w, e.z, m));
        REQUIRE(classify_solution(e, lr, 2, chain.k_of(i)) == Classification::Strong);
    }
}

TEST_CASE("lift_strong_solution rejects weak bases") {
    SystemCoeffs lr{1, 0, -17, 2};
    // not a solution at all
    CHECK_THROWS_AS(lift_strong_solution(lr, 3, {1, 0, 1, 1, 3, Classification::Strong}, 3),
                    NotStrong);
    // wrong base modulus for p = 2
    CHECK_THROWS_AS(lift_strong_solution(lr, 2, {1, 1, 1, 0, 8, Classification::Strong}, 6),
                    NotStrong);
    // genuine solution mod 3 that is primitive but not strong
    SystemCoeffs s2{3, 0, 5, 15};
    SolutionQuadruple weak{0, 0, 3, 1, 3, Classification::Primitive};
    REQUIRE(solves_mod(s2, weak.u, weak.v, weak.w, weak.z, 3));
    CHECK_THROWS_AS(lift_strong_solution(s2, 3, weak, 3), NotStrong);
}

TEST_CASE("primitive solutions are strong when p^2 does not divide acd") {
    std::mt19937_64 rng(11);
    const std::pair<i64, int> moduli[] = {{3, 2}, {3, 3}, {5, 2}, {2, 4}};
    for (auto [p, k] : moduli) {
        i64 m = pow_checked(p, k);
        int done = 0;
        while (done < 10) {
            i64 a = i64(rng() % 41) - 20, c = i64(rng() % 41) - 20, d = i64(rng() % 41) - 20;
            if (a == 0 || c == 0 || d == 0) continue;
            if (mod_reduce(a * c * d, p * p) == 0) continue;  // need p^2 coprime to acd
            SystemCoeffs sys{a, 0, c, d};
            for_each_solution_mod(sys, m, [&](i64 u, i64 v, i64 w, i64 z) {
                Classification cls = classify_solution(u, v, w, z, sys, p, k);
                INFO("a=" << a << " c=" << c << " d=" << d << " p=" << p << " k=" << k << " ("
                          << u << "," << v << "," << w << "," << z << ")");
                REQUIRE(cls != Classification::Primitive);  // primitive implies strong here
                return false;
            });
            ++done;
        }
    }
}
