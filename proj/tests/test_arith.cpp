#include <gtest/gtest.h>

#include <set>

#include "twist49/arith.hpp"

using namespace twist49;

namespace {

// Legendre symbol by exhaustive residue table.
int legendre_by_table(int64_t a, int64_t p) {
    a = mod_floor(a, p);
    if (a == 0) return 0;
    for (int64_t x = 1; x < p; ++x)
        if (x * x % p == a) return 1;
    return -1;
}

bool quartic_by_table(int64_t a, int64_t p) {
    a = mod_floor(a, p);
    for (int64_t x = 1; x < p; ++x)
        if (x * x % p * x % p * x % p == a) return true;
    return false;
}

}  // namespace

TEST(Kronecker, Examples) {
    EXPECT_EQ(kronecker(1, 12), 1);
    EXPECT_EQ(kronecker(-7, 5), -1);
    EXPECT_EQ(kronecker(-7, 7), 0);
    EXPECT_EQ(kronecker(-7, 2), 1);
}

TEST(Kronecker, MatchesResidueTables) {
    for (int64_t p : primes_up_to(200)) {
        if (p == 2) continue;
        for (int64_t a = -60; a <= 60; ++a) ASSERT_EQ(kronecker(a, p), legendre_by_table(a, p)) << a << " " << p;
    }
}

TEST(Kronecker, ReciprocityOnOddPrimePairs) {
    auto primes = primes_up_to(200);
    for (int64_t p : primes)
        for (int64_t q : primes) {
            if (p == 2 || q == 2 || p == q) continue;
            int sign = ((p - 1) / 2 * ((q - 1) / 2)) % 2 ? -1 : 1;
            ASSERT_EQ(legendre_by_table(p, q) * legendre_by_table(q, p), sign);
            ASSERT_EQ(kronecker(p, q) * kronecker(q, p), sign);
        }
}

TEST(Kronecker, MultiplicativeInNumerator) {
    for (int64_t n = 1; n <= 1000; n += 2)
        for (int64_t a = -1000; a <= 1000; a += 37)
            for (int64_t b = -1000; b <= 1000; b += 53) ASSERT_EQ(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
}

TEST(Quartic, Examples) {
    EXPECT_TRUE(quartic_is_one(16, 13));
    EXPECT_FALSE(quartic_is_one(-7, 29));
    EXPECT_TRUE(quartic_is_one(-7, 53));
}

TEST(Quartic, MatchesFourthPowerTable) {
    for (int64_t p : primes_up_to(400)) {
        if (p % 4 != 1) continue;
        for (int64_t a = -30; a <= 30; ++a) {
            if (a % p == 0 || kronecker(a, p) != 1) continue;
            ASSERT_EQ(quartic_is_one(a, p), quartic_by_table(a, p)) << a << " " << p;
        }
    }
}

TEST(ClassifyPrime, Examples) {
    EXPECT_EQ(classify_prime(7).splitting, Splitting::ramified);
    auto five = classify_prime(5);
    EXPECT_EQ(five.splitting, Splitting::inert);
    EXPECT_TRUE(five.eligible_q);
    auto p53 = classify_prime(53);
    EXPECT_EQ(p53.splitting, Splitting::split);
    EXPECT_TRUE(p53.eligible_p4);
}

TEST(ClassifyPrime, EligibleQBelowHundredByBruteForce) {
    std::set<int64_t> found, brute;
    for (int64_t p : primes_up_to(100)) {
        if (classify_prime(p).eligible_q) found.insert(p);
        if (p % 4 == 1 && p != 7 && legendre_by_table(-7, p) == -1) brute.insert(p);
    }
    EXPECT_EQ(found, brute);
    EXPECT_EQ(found, (std::set<int64_t>{5, 13, 17, 41, 61, 73, 89, 97}));
}

TEST(ClassifyPrime, Invariants) {
    for (int64_t p : primes_up_to(3000)) {
        auto c = classify_prime(p);
        ASSERT_EQ(c.splitting == Splitting::ramified, p == 7);
        if (c.eligible_q) {
            ASSERT_TRUE(c.splitting == Splitting::inert && c.mod4 == 1);
        }
        if (c.eligible_p4) {
            ASSERT_TRUE(c.splitting == Splitting::split && c.mod4 == 1);
        }
    }
}

TEST(FactorTwist, Examples) {
    auto m65 = factor_twist(65);
    EXPECT_EQ(m65.epsilon, 1);
    EXPECT_EQ(m65.delta, 0);
    EXPECT_EQ(m65.R, 65);
    EXPECT_EQ(m65.N, 1);
    auto m19 = factor_twist(-19);
    EXPECT_EQ(m19.epsilon, -1);
    EXPECT_EQ(m19.R, 19);
    EXPECT_EQ(m19.R_minus, 19);
    try {
        factor_twist(12);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_squarefree);
    }
}

TEST(FactorTwist, Decomposition) {
    for (int64_t M = -3000; M <= 3000; ++M) {
        if (M == 0 || M % 7 == 0 || !is_squarefree(M)) continue;
        auto f = factor_twist(M);
        ASSERT_EQ(f.epsilon * (f.delta ? 2 : 1) * f.R * f.N, M);
        ASSERT_EQ(f.R_plus * f.R_minus, f.R);
        ASSERT_EQ(f.N_plus * f.N_minus, f.N);
        ASSERT_EQ(gcd(f.R, f.N), 1);
        for (int64_t q : f.inert_primes) ASSERT_EQ(kronecker(-7, q), -1);
        for (int64_t p : f.split_primes) ASSERT_EQ(kronecker(-7, p), 1);
    }
}

TEST(NormForm, SolvesFourP) {
    for (int64_t p : primes_up_to(2000)) {
        auto s = norm_form_4p(p);
        if (p == 7) continue;
        ASSERT_EQ(s.has_value(), kronecker(-7, p) == 1) << p;
        if (s) {
            ASSERT_EQ(s->first * s->first + 7 * s->second * s->second, 4 * p);
        }
    }
}
