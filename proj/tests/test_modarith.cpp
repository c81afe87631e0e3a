#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "hasse/modarith.hpp"
#include "oracles.hpp"

using namespace hasse;

TEST_CASE("mod_pow basics") {
    CHECK(mod_pow(2, 8, 17) == 1);   // 256 = 15*17 + 1
    CHECK(mod_pow(3, 4, 32) == 17);  // 81 - 64
    CHECK(mod_pow(5, 0, 11) == 1);
    CHECK(mod_pow(0, 0, 11) == 1);   // empty product
    CHECK(mod_pow(-3, 2, 7) == 2);
    CHECK_THROWS_AS(mod_pow(2, 3, 1), InvalidInput);
    CHECK_THROWS_AS(mod_pow(2, -1, 5), InvalidInput);
}

TEST_CASE("mod_pow matches repeated multiplication") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 500; ++i) {
        i64 m = 2 + i64(rng() % 1000);
        i64 b = i64(rng() % 2000) - 1000;
        i64 e = i64(rng() % 50);
        CHECK(mod_pow(b, e, m) == oracles::naive_pow_mod(b, e, m));
    }
}

TEST_CASE("inverse_mod") {
    CHECK(inverse_mod(1, 7) == 1);
    CHECK(inverse_mod(3, 17) == 6);  // 18 = 17 + 1
    CHECK_THROWS_AS(inverse_mod(2, 4), NoInverse);
    CHECK_THROWS_AS(inverse_mod(0, 5), NoInverse);

    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        i64 m = 2 + i64(rng() % 10000);
        i64 a = 1 + i64(rng() % (m - 1));
        if (std::gcd(a, m) != 1) continue;
        CHECK(mul_mod(inverse_mod(a, m), a, m) == 1 % m);
    }
}

TEST_CASE("is_prime spot checks") {
    CHECK(is_prime(2));
    CHECK(is_prime(17));
    CHECK(is_prime(1000003));
    CHECK(is_prime(2147483647));  // 2^31 - 1
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));     // Carmichael
    CHECK_FALSE(is_prime(1000001));
    // against trial division up to 10^4
    for (i64 n = 2; n < 10000; ++n) {
        bool p = true;
        for (i64 q = 2; q * q <= n; ++q)
            if (n % q == 0) { p = false; break; }
        REQUIRE(is_prime(n) == p);
    }
}

TEST_CASE("legendre examples") {
    CHECK(legendre(2, 17) == 1);   // 2 is a square mod 17 (6^2 = 36)
    CHECK(legendre(0, 7) == 0);
    CHECK(legendre(21, 7) == 0);
    CHECK(legendre(3, 7) == -1);   // squares mod 7: 1, 2, 4
    CHECK_THROWS_AS(legendre(3, 2), InvalidInput);
    CHECK_THROWS_AS(legendre(3, 15), InvalidInput);
}

TEST_CASE("legendre agrees with square enumeration for p <= 200") {
    for (i64 p = 3; p <= 200; p += 2) {
        if (!is_prime(p)) continue;
        for (i64 a = 0; a < p; ++a) {
            INFO("a=" << a << " p=" << p);
            REQUIRE(legendre(a, p) == oracles::naive_legendre(a, p));
            REQUIRE((legendre(a, p) == 0) == (a % p == 0));
        }
    }
}

TEST_CASE("legendre multiplicativity") {
    std::mt19937_64 rng(2024);
    std::vector<i64> ps;
    for (i64 p = 3; p < 500; p += 2)
        if (is_prime(p)) ps.push_back(p);
    for (int i = 0; i < 1000; ++i) {
        i64 p = ps[rng() % ps.size()];
        i64 a = i64(rng() % (2 * p)) - p;
        i64 b = i64(rng() % (2 * p)) - p;
        CHECK(legendre(a * b, p) == legendre(a, p) * legendre(b, p));
    }
}

TEST_CASE("sqrt_mod_p examples") {
    CHECK(sqrt_mod_p(2, 17) == 6);  // 36 = 2*17 + 2
    CHECK(sqrt_mod_p(0, 13) == 0);
    CHECK_FALSE(sqrt_mod_p(3, 7).has_value());
    CHECK_THROWS_AS(sqrt_mod_p(3, 2), InvalidInput);
    CHECK_THROWS_AS(sqrt_mod_p(3, 21), InvalidInput);
}

TEST_CASE("sqrt_mod_p agrees with exhaustive scan for p < 1000") {
    for (i64 p = 3; p < 1000; p += 2) {
        if (!is_prime(p)) continue;
        for (i64 a = 0; a < p; ++a) {
            auto s = sqrt_mod_p(a, p);
            i64 naive = oracles::naive_sqrt_mod(a, p);
            if (naive < 0) {
                REQUIRE_FALSE(s.has_value());
                REQUIRE(legendre(a, p) == -1);
            } else {
                REQUIRE(s.has_value());
                REQUIRE(*s == naive);  // both return the least root
                REQUIRE(mul_mod(*s, *s, p) == a);
            }
        }
    }
}

TEST_CASE("is_rth_power_mod") {
    CHECK_FALSE(is_rth_power_mod(2, 4, 17).has_value());  // fourth powers mod 17: 0,1,4,13,16
    CHECK(is_rth_power_mod(1, 5, 9) == 1);
    CHECK(is_rth_power_mod(17, 4, 32) == 3);  // 81 = 2*32 + 17
    CHECK(is_rth_power_mod(0, 3, 11) == 0);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        i64 m = 2 + i64(rng() % 500);
        i64 r = 1 + i64(rng() % 6);
        i64 a = i64(rng() % m);
        auto wit = is_rth_power_mod(a, r, m);
        if (wit) CHECK(mod_pow(*wit, r, m) == a);  // witness re-verifies
    }
}

TEST_CASE("fourth power test mod odd primes") {
    // fourth powers mod 17: {1, 4, 13, 16}
    std::set<i64> q17;
    for (i64 x = 1; x < 17; ++x) q17.insert(mod_pow(x, 4, 17));
    for (i64 a = 1; a < 17; ++a)
        CHECK(is_fourth_power_mod_prime(a, 17) == (q17.count(a) > 0));
    // p = 3 mod 4: fourth power iff square
    for (i64 a = 1; a < 19; ++a)
        CHECK(is_fourth_power_mod_prime(a, 19) == (legendre(a, 19) == 1));
}

TEST_CASE("factorize and square-free") {
    using V = std::vector<std::pair<i64, int>>;
    CHECK(factorize(12) == V{{2, 2}, {3, 1}});
    CHECK(factorize(-17) == V{{17, 1}});
    CHECK(factorize(1).empty());
    CHECK(factorize(999999999989LL) == V{{999999999989LL, 1}});  // prime near 10^12
    CHECK(is_square_free(34));
    CHECK_FALSE(is_square_free(4));
    CHECK_FALSE(is_square_free(0));
    CHECK_THROWS_AS(factorize(0), InvalidInput);
}

TEST_CASE("valuation and pow_checked") {
    CHECK(valuation(48, 2) == 4);
    CHECK(valuation(48, 3) == 1);
    CHECK(valuation(5, 3) == 0);
    CHECK(pow_checked(3, 4) == 81);
    CHECK_THROWS_AS(pow_checked(10, 20), InvalidInput);
}
