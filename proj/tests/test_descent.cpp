#include <gtest/gtest.h>

#include <set>

#include "twist49/arith.hpp"
#include "twist49/classgroup.hpp"
#include "twist49/descent.hpp"
#include "twist49/tamagawa.hpp"

using namespace twist49;

namespace {

std::vector<int64_t> sweep_labels(int64_t bound) {
    std::vector<int64_t> out;
    for (int64_t M = -bound; M <= bound; ++M)
        if (M != 0 && M % 7 != 0 && is_squarefree(M)) out.push_back(M);
    return out;
}

}  // namespace

TEST(Q2M, Examples) {
    auto five = q2m(factor_twist(5));
    EXPECT_EQ(five, (std::vector<int64_t>{-70, -35, -14, -10, -7, -5, -2, -1, 1, 2, 5, 7, 10, 14, 35, 70}));
    EXPECT_EQ(q2m(factor_twist(65)).size(), 32u);
}

TEST(Confucian, Examples) {
    EXPECT_TRUE(is_confucian(1, factor_twist(53)));
    EXPECT_TRUE(is_confucian(1, factor_twist(5)));
    EXPECT_TRUE(is_confucian(53, factor_twist(53)));
    EXPECT_FALSE(is_confucian(29, factor_twist(29)));
}

TEST(Selmer, Examples) {
    EXPECT_EQ(selmer_phi(factor_twist(5)).members, (std::vector<int64_t>{-7, 1}));
    EXPECT_EQ(selmer_phi(factor_twist(53)).members, (std::vector<int64_t>{-371, -7, 1, 53}));
    EXPECT_EQ(selmer_phi(factor_twist(29)).members, (std::vector<int64_t>{-7, 1}));
    EXPECT_EQ(selmer_phihat(factor_twist(5)).members, (std::vector<int64_t>{1, 7}));
    EXPECT_EQ(selmer_phihat(factor_twist(53)).members, (std::vector<int64_t>{1, 7, 53, 371}));
    EXPECT_EQ(selmer_phihat(factor_twist(-19)).members, (std::vector<int64_t>{1, 7}));
}

TEST(LocalOracle, Examples) {
    auto M = factor_twist(5);
    for (int64_t v : {real_place, int64_t{2}, int64_t{5}, int64_t{7}}) {
        EXPECT_TRUE(local_oracle(IsogenySide::phi, 1, M, v));
        EXPECT_TRUE(local_oracle(IsogenySide::phi, -7, M, v));
    }
    EXPECT_FALSE(local_oracle(IsogenySide::phi, 5, M, 5));
}

TEST(Selmer2, Examples) {
    EXPECT_EQ(selmer2_report(factor_twist(5)).dim2, 0);
    EXPECT_EQ(selmer2_report(factor_twist(53)).dim2, 2);
    EXPECT_EQ(selmer2_report(factor_twist(-19)).dim2, 1);
}

TEST(Selmer, OracleEquivalence) {
    for (int64_t Mv : sweep_labels(300)) {
        auto M = factor_twist(Mv);
        for (IsogenySide side : {IsogenySide::phi, IsogenySide::phihat}) {
            auto stated = side == IsogenySide::phi ? selmer_phi(M) : selmer_phihat(M);
            std::set<int64_t> members(stated.members.begin(), stated.members.end());
            for (int64_t d : q2m(M)) ASSERT_EQ(members.count(d) == 1, everywhere_locally_soluble(side, d, M)) << Mv << " d=" << d;
        }
    }
}

TEST(Selmer, GroupStructureAndTorsionImage) {
    for (int64_t Mv : sweep_labels(300)) {
        auto M = factor_twist(Mv);
        for (const auto& s : {selmer_phi(M), selmer_phihat(M)}) {
            std::set<int64_t> members(s.members.begin(), s.members.end());
            ASSERT_TRUE(members.count(s.kind == IsogenySide::phi ? -7 : 7));
            ASSERT_EQ(members.size(), size_t{1} << s.dim);
            for (int64_t a : members)
                for (int64_t b : members) ASSERT_TRUE(members.count(class_mul(a, b))) << Mv;
        }
    }
}

TEST(Selmer2, BoundsAndParity) {
    for (int64_t Mv : sweep_labels(300)) {
        auto rep = selmer2_report(factor_twist(Mv));
        ASSERT_LE(rep.lo, rep.hi);
        ASSERT_GE(rep.lo, rep.dim_phi_quot);
        ASSERT_LE(rep.hi, rep.dim_phi_quot + rep.dim_phihat - 1);
        if (rep.dim2) {
            ASSERT_EQ(*rep.dim2 % 2 == 0, Mv > 0) << Mv;
            ASSERT_GE(*rep.dim2, rep.lo);
            ASSERT_LE(*rep.dim2, rep.hi);
        }
        for (const auto& c : rep.consistency) ASSERT_TRUE(c.consistent) << Mv << " " << c.name << " " << c.detail;
    }
}

TEST(Selmer2, QuotientDimensionForInertProducts) {
    for (int64_t Mv : sweep_labels(300)) {
        auto M = factor_twist(Mv);
        if (mod_floor(Mv, 4) != 1 || M.N != 1 || M.delta) continue;
        auto rep = selmer2_report(M);
        ASSERT_TRUE(rep.dim2.has_value()) << Mv;
        ASSERT_EQ(*rep.dim2, M.r_minus) << Mv;
    }
}

TEST(Selmer2, OrderFourCriterion) {
    // -l0 N+ with l0 = 3 mod 4 inert in F: dim 1 iff no class of order four.
    for (int64_t l0 : primes_up_to(500)) {
        if (l0 <= 3 || l0 % 4 != 3 || kronecker(-7, l0) != -1) continue;
        for (int64_t N = 1; l0 * N <= 500; ++N) {
            if (N > 1 && !(is_prime(N) && N % 4 == 1 && kronecker(-7, N) == 1 && quartic_is_one(-7, N))) continue;
            auto rep = selmer2_report(factor_twist(-l0 * N));
            if (!rep.dim2) continue;
            ASSERT_EQ(*rep.dim2 == 1, !has_order_four(-l0 * N)) << l0 << " " << N;
        }
    }
}

TEST(Tamagawa, Examples) {
    auto a5 = tamagawa(TwistCurve::A_twist, factor_twist(5));
    EXPECT_EQ(a5.c_map, (std::map<int64_t, int>{{5, 2}, {7, 2}}));
    EXPECT_EQ(a5.c_infinity, 1);
    auto a53 = tamagawa(TwistCurve::A_twist, factor_twist(53));
    EXPECT_EQ(a53.c_map, (std::map<int64_t, int>{{7, 2}, {53, 4}}));
    auto b5 = tamagawa(TwistCurve::Aprime_twist, factor_twist(5));
    EXPECT_EQ(b5.c_map, (std::map<int64_t, int>{{5, 2}, {7, 2}}));
    EXPECT_EQ(b5.c_infinity, 2);
}

TEST(Tamagawa, ShaRatioExamples) {
    EXPECT_EQ(sha_ratio_ord2({factor_twist(5), 0, 0}), 0);
    EXPECT_EQ(sha_ratio_ord2({factor_twist(65), 0, 0}), 0);
    EXPECT_EQ(sha_ratio_ord2({factor_twist(-19), 1, 1}), 0);
}

TEST(Tamagawa, BsdPredictionExamples) {
    EXPECT_EQ(bsd_predicted_ord2(factor_twist(65), 0), 1);
    EXPECT_EQ(bsd_predicted_ord2(factor_twist(53), 2), 3);
    EXPECT_EQ(bsd_predicted_ord2(factor_twist(5), 0), 0);
}

TEST(Tamagawa, RatioIdentityOverSweep) {
    for (int64_t Mv : sweep_labels(300)) {
        auto M = factor_twist(Mv);
        auto a = tamagawa(TwistCurve::A_twist, M);
        auto b = tamagawa(TwistCurve::Aprime_twist, M);
        ASSERT_EQ(a.c_map.at(7), 2);
        ASSERT_EQ(a.c_infinity, 1);
        ASSERT_EQ(b.c_infinity, 2);
        for (auto [p, c] : a.c_map) ASSERT_TRUE(c == 1 || c == 2 || c == 4);
        for (auto [p, c] : b.c_map) ASSERT_TRUE(c == 1 || c == 2 || c == 4);
        auto finite_ord2 = [](const TamagawaData& t) {
            int e = 0;
            for (auto [p, c] : t.c_map) e += c == 4 ? 2 : c == 2 ? 1 : 0;
            return e;
        };
        ASSERT_EQ(finite_ord2(a) - finite_ord2(b), a_of(M) + M.k_minus - M.r_minus) << Mv;
        ASSERT_EQ(a.tam_product_ord2, finite_ord2(a));
        ASSERT_EQ(b.tam_product_ord2, finite_ord2(b) + 1);
    }
}

TEST(Tamagawa, AOfMatchesResidueRule) {
    for (int64_t Mv : sweep_labels(300)) {
        auto M = factor_twist(Mv);
        int64_t prod = mod_floor(M.N_minus * M.R_minus, 4);
        int sign = Mv > 0 ? 1 : -1;
        ASSERT_EQ(a_of(M) == 1, prod == mod_floor(-sign, 4));
    }
}
