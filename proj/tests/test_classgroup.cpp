#include <gtest/gtest.h>

#include <set>

#include "twist49/arith.hpp"
#include "twist49/classgroup.hpp"

using namespace twist49;

namespace {

// Reduced primitive forms counted directly from the inequalities.
int64_t brute_class_number(int64_t D) {
    int64_t h = 0;
    for (int64_t a = 1; 3 * a * a <= -D; ++a)
        for (int64_t b = -a + 1; b <= a; ++b) {
            int64_t num = b * b - D;
            if (num % (4 * a)) continue;
            int64_t c = num / (4 * a);
            if (c < a || (c == a && b < 0)) continue;
            if (gcd(gcd(a, std::llabs(b)), c) != 1) continue;
            ++h;
        }
    return h;
}

int log2_exact(int64_t x) {
    int k = 0;
    while (x > 1) {
        x /= 2;
        ++k;
    }
    return k;
}

// dim 2A/4A from the composition table.
int four_rank_from_table(int64_t D) {
    std::set<QuadForm> twice, four_times;
    for (const auto& f : reduced_forms(D)) {
        twice.insert(reduce(compose(f, f)));
        auto g = reduce(compose(f, f));
        four_times.insert(reduce(compose(g, g)));
    }
    return log2_exact(static_cast<int64_t>(twice.size() / four_times.size()));
}

}  // namespace

TEST(ClassGroup, Examples) {
    EXPECT_EQ(class_group(-7).h, 1);
    auto g35 = class_group(-35);
    EXPECT_EQ(g35.h, 2);
    EXPECT_EQ(g35.cycle_structure, std::vector<int64_t>{2});
    EXPECT_EQ(reduced_forms(-35), (std::vector<QuadForm>{{1, 1, 9}, {3, 1, 3}}));
    EXPECT_EQ(class_group(-19).h, 1);
}

TEST(ClassGroup, ClassNumberMatchesEnumeration) {
    for (int64_t D = -3; D > -4000; --D) {
        if (mod_floor(D, 4) > 1) continue;
        auto g = class_group(D);
        ASSERT_EQ(g.h, brute_class_number(D)) << D;
        int64_t prod = 1;
        for (auto d : g.cycle_structure) prod *= d;
        ASSERT_EQ(prod, g.h);
        for (const auto& f : g.elements) {
            ASSERT_TRUE(f.is_reduced());
            ASSERT_EQ(f.disc(), D);
        }
    }
}

TEST(Redei, Examples) {
    auto r7 = redei_ranks(-7);
    EXPECT_EQ(r7.h2, 0);
    EXPECT_EQ(r7.h4, 0);
    auto r203 = redei_ranks(-203);
    EXPECT_EQ(r203.h4, 1);
    for (const auto& row : r203.matrix.entries)
        for (int e : row) EXPECT_EQ(e, 0);
    auto r35 = redei_ranks(-35);
    EXPECT_EQ(r35.h4, 0);
    EXPECT_EQ(r35.matrix.entries, (std::vector<std::vector<int>>{{1, 1}, {1, 1}}));
}

TEST(Redei, FourRankMatchesCompositionTable) {
    for (int64_t D = -3; D > -10000; --D) {
        if (mod_floor(D, 4) > 1 || !is_fundamental(D)) continue;
        auto g = class_group(D);
        auto r = redei_ranks(D);
        int t = static_cast<int>(prime_discriminants(D).size());
        ASSERT_EQ(r.h2, t - 1) << D;
        ASSERT_EQ(g.h % (int64_t{1} << r.h2), 0) << D;
        ASSERT_EQ(r.h4, four_rank_from_table(D)) << D;
        ASSERT_EQ(r.h4, g.h4) << D;
        ASSERT_LE(g.h8, g.h4);
        ASSERT_LE(g.h4, g.h2);
        for (const auto& row : r.matrix.entries) {
            int sum = 0;
            for (int e : row) sum ^= e;
            ASSERT_EQ(sum, 0);
        }
    }
}

TEST(EightRank, Examples) {
    EXPECT_EQ(h8_for_7p(29).value, 0);
    EXPECT_EQ(h8_for_7p(53).value, 1);
    EXPECT_EQ(h8_for_7p_by_triples(29).value, 0);
}

TEST(EightRank, CriterionMatchesTripleSearch) {
    for (int64_t p : primes_up_to(3000)) {
        if (p % 4 != 1 || kronecker(p, 7) != 1) continue;
        auto crit = h8_for_7p(p);
        auto trip = h8_for_7p_by_triples(p);
        ASSERT_EQ(crit.value, trip.value) << p;
        ASSERT_EQ(crit.value == 1, quartic_is_one(-7, p)) << p;
        ASSERT_EQ(crit.value, class_group(-7 * p).h8) << p;
        if (trip.from_triple) {
            ASSERT_EQ(trip.z * trip.z, p * trip.x * trip.x + 7 * trip.y * trip.y);
            ASSERT_EQ(gcd(gcd(trip.x, trip.y), trip.z), 1);
        }
    }
}

TEST(OrderFour, Examples) {
    EXPECT_FALSE(has_order_four(-19));
    EXPECT_FALSE(has_order_four(-35));
    EXPECT_TRUE(has_order_four(-371));
}

TEST(GenusCharacter, Examples) {
    EXPECT_EQ(genus_character(-35, 5, identity_form(-35)), 1);
    EXPECT_EQ(genus_character(-35, 5, 3), -1);
    EXPECT_EQ(genus_character(-35, 5, 7), -1);
}

TEST(GenusCharacter, HomomorphismOnClassGroups) {
    for (int64_t n : {5, 13, 17, 29, 53, 65, 85, 101}) {
        int64_t D = -7 * n;
        auto forms = reduced_forms(D);
        for (int64_t d = 1; d <= n; ++d) {
            if (n % d) continue;
            for (const auto& f : forms)
                for (const auto& g : forms)
                    ASSERT_EQ(genus_character(D, d, compose(f, g)), genus_character(D, d, f) * genus_character(D, d, g));
        }
    }
}

TEST(GenusCharacter, ComplementaryDivisorsAgree) {
    // chi^(d) chi^(n/d) is the character of 7* n*, trivial on the class group.
    for (int64_t n : {5, 13, 29, 53, 65, 85}) {
        int64_t D = -7 * n;
        for (const auto& f : reduced_forms(D))
            for (int64_t d = 1; d <= n; ++d)
                if (n % d == 0) {
                    ASSERT_EQ(genus_character(D, d, f) * genus_character(D, n / d, f), genus_character(D, n, f));
                }
    }
}
