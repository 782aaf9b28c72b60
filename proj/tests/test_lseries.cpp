#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "twist49/arith.hpp"
#include "twist49/lseries.hpp"

using namespace twist49;

namespace {

// p + 1 - #A(F_p) from the affine equation plus the point at infinity.
int64_t trace_by_enumeration(int64_t p) {
    int64_t count = 1;
    for (int64_t x = 0; x < p; ++x)
        for (int64_t y = 0; y < p; ++y) {
            int64_t lhs = mod_floor(y * y + x * y, p);
            int64_t rhs = mod_floor(x * x * x - x * x - 2 * x - 1, p);
            count += lhs == rhs;
        }
    return p + 1 - count;
}

std::filesystem::path scratch_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "twist49_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::optional<int> ord2_of(int64_t M) { return lalg_ord2(M).ord2; }

}  // namespace

TEST(HeckeAp, Examples) {
    EXPECT_EQ(ap_oracle(2), 1);
    EXPECT_EQ(ap_oracle(3), 0);
    EXPECT_EQ(ap_oracle(11), 4);
    EXPECT_EQ(ap(5), 0);
    EXPECT_EQ(ap(2), 1);
    EXPECT_EQ(ap(11), 4);
}

TEST(HeckeAp, CharacterMatchesPointCount) {
    for (int64_t p : primes_up_to(200)) {
        if (p == 7) continue;
        ASSERT_EQ(ap(p), trace_by_enumeration(p)) << p;
        ASSERT_EQ(ap_oracle(p), trace_by_enumeration(p)) << p;
    }
}

TEST(HeckeAp, HasseBoundAndSupersingularity) {
    EXPECT_EQ(ap(7), 0);
    for (int64_t p : primes_up_to(20000)) {
        int64_t a = ap(p);
        ASSERT_LE(static_cast<double>(a * a), 4.0 * p) << p;
        if (kronecker(-7, p) == -1) {
            ASSERT_EQ(a, 0) << p;
        }
    }
}

TEST(HeckeAp, CoefficientsFollowEulerProduct) {
    const int64_t n_max = 10000;
    std::vector<int64_t> euler(n_max + 1, 0);
    euler[1] = 1;
    // Multiply in one Euler factor at a time.
    for (int64_t p : primes_up_to(n_max)) {
        std::vector<int64_t> powers{1, p == 7 ? 0 : ap(p)};
        for (int64_t q = p * p, k = 2; q <= n_max; q *= p, ++k)
            powers.push_back(powers[k - 1] * powers[1] - (p == 7 ? 0 : p) * powers[k - 2]);
        for (int64_t m = n_max; m >= 1; --m) {
            if (m % p == 0) continue;
            if (euler[m] == 0) continue;
            int64_t q = p;
            for (size_t k = 1; k < powers.size() && m * q <= n_max; ++k, q *= p) euler[m * q] = euler[m] * powers[k];
        }
    }
    auto table = an_table(n_max);
    ASSERT_GE(table->size(), static_cast<size_t>(n_max + 1));
    for (int64_t n = 1; n <= n_max; ++n) {
        ASSERT_EQ((*table)[n], euler[n]) << n;
        for (auto [q, e] : factorize(n))
            if (kronecker(-7, q) == -1 && e % 2 == 1) {
                ASSERT_EQ((*table)[n], 0) << n;
            }
    }
}

TEST(Periods, GammaProduct) {
    double gamma_product = std::tgamma(1.0 / 7) * std::tgamma(2.0 / 7) * std::tgamma(4.0 / 7) / (2 * M_PI * std::sqrt(7.0));
    EXPECT_NEAR(omega_A(), gamma_product, 1e-12);
    EXPECT_NEAR(omega_A(), 1.9333117056168116, 1e-12);
    EXPECT_NEAR(omega_minus(), omega_A() * std::sqrt(7.0), 1e-12);
    for (int64_t M : {5, 13, 17, 29, 53, 65})
        EXPECT_NEAR(omega_twist(M), omega_A() / std::sqrt(static_cast<double>(M)), 1e-12);
}

TEST(RootNumber, Examples) {
    EXPECT_EQ(root_number(5), 1);
    EXPECT_EQ(root_number(-19), -1);
    EXPECT_EQ(root_number(-35), 1);
}

TEST(LCentral, Examples) {
    auto one = l_central(1);
    EXPECT_EQ(*one.lalg, Rational(1, 2));
    EXPECT_NEAR(one.L_numeric / one.omega, 0.5, 1e-9);
    EXPECT_EQ(l_central(65).ord2, 1);
    auto five = l_central(5);
    EXPECT_EQ(five.ord2, 0);
    EXPECT_EQ(five.lalg->numerator() % 2, 1);
    try {
        l_central(-19);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::wrong_root_number);
    }
}

TEST(LCentral, FrozenAlgebraicValues) {
    // From an independent Dirichlet-series prototype.
    const std::vector<std::pair<int64_t, Rational>> frozen{
        {1, {1, 2}}, {5, {1, 1}},  {13, {1, 1}}, {17, {1, 1}},  {65, {2, 1}},  {53, {0, 1}},   {689, {0, 1}},
        {-35, {1, 1}}, {-7, {1, 2}}, {2, {2, 1}}, {3, {4, 1}}, {6, {4, 1}}, {10, {0, 1}}, {-91, {1, 1}},
    };
    for (const auto& [M, value] : frozen) EXPECT_EQ(lalg_ord2(M).value, value) << M;
}

TEST(LCentral, DoubleDoublePath) {
    auto rec = l_central(4889);
    EXPECT_EQ(rec.precision_used, Precision::double_double);
    EXPECT_EQ(*rec.lalg, Rational(49, 1));
    auto forced = l_central(65, Precision::double_double);
    EXPECT_EQ(*forced.lalg, Rational(2, 1));
    EXPECT_LT(forced.error_bound, 1e-12);
}

TEST(LCentral, RecordInvariants) {
    for (int64_t M = -400; M <= 400; ++M) {
        if (M == 0 || !is_squarefree(M) || root_number(M) != 1) continue;
        auto rec = l_central(M);
        ASSERT_TRUE(rec.lalg.has_value());
        double lalg = static_cast<double>(rec.lalg->numerator()) / static_cast<double>(rec.lalg->denominator());
        ASSERT_LT(std::fabs(rec.L_numeric / rec.omega - lalg), 1e-6) << M;
        ASSERT_EQ(rec.ord2.has_value(), rec.lalg->numerator() != 0) << M;
    }
}

TEST(LDerivative, Examples) {
    for (int64_t M : {-19, -247}) {
        auto rec = l_derivative(M);
        EXPECT_GT(std::fabs(*rec.L_prime_numeric), 1e3 * rec.error_bound) << M;
    }
    EXPECT_NEAR(*l_derivative(-19).L_prime_numeric, 3.036406066895, 1e-9);
    EXPECT_NEAR(*l_derivative(-247).L_prime_numeric, 7.258272052433, 1e-9);
    try {
        l_derivative(5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::wrong_root_number);
    }
}

TEST(LalgOrd2, Examples) {
    auto one = lalg_ord2(1);
    EXPECT_EQ(one.value, Rational(1, 2));
    EXPECT_EQ(one.ord2, -1);
    auto p53 = ord2_of(53);
    EXPECT_TRUE(!p53 || *p53 >= 3);
    auto p689 = ord2_of(689);
    EXPECT_TRUE(!p689 || *p689 >= 4);
}

TEST(LalgOrd2, DeskProductsHaveOrd2RMinusOne) {
    const std::vector<int64_t> qs{5, 13, 17, 41, 61, 97};
    for (unsigned mask = 1; mask < (1u << qs.size()); ++mask) {
        int64_t R = 1;
        int r = 0;
        for (size_t s = 0; s < qs.size(); ++s)
            if (mask & (1u << s)) {
                R *= qs[s];
                ++r;
            }
        if (R > 5000) continue;
        ASSERT_EQ(ord2_of(R), r - 1) << R;
    }
}

TEST(LalgOrd2, SplitProductsLowerBound) {
    std::vector<int64_t> pool;
    for (int64_t p : primes_up_to(5000))
        if (p % 4 == 1 && kronecker(p, 7) == 1) pool.push_back(p);
    for (int64_t N = 1; N <= 5000; ++N) {
        auto f = factorize(N);
        bool ok = N > 1;
        for (auto [p, e] : f) ok = ok && e == 1 && std::binary_search(pool.begin(), pool.end(), p);
        if (!ok) continue;
        int k = static_cast<int>(f.size());
        auto v = ord2_of(N);
        ASSERT_TRUE(!v || *v >= 2 * k - 1) << N;
    }
}

TEST(LalgOrd2, QuarticDichotomy) {
    for (int64_t p : primes_up_to(3000)) {
        if (p % 4 != 1 || kronecker(p, 7) != 1) continue;
        auto v = ord2_of(p);
        ASSERT_NE(v, std::optional<int>(2)) << p;
        if (quartic_is_one(-7, p))
            ASSERT_TRUE(!v || *v >= 3) << p;
        else
            ASSERT_EQ(v, 1) << p;
    }
}

TEST(Snap, Rationals) {
    EXPECT_EQ(snap_rational(0.5000000001), Rational(1, 2));
    EXPECT_EQ(snap_rational(3.0), Rational(3, 1));
    EXPECT_FALSE(snap_rational(M_PI).has_value());
    EXPECT_EQ(ord2_rational(Rational(3, 8)), -3);
    EXPECT_EQ(ord2_rational(Rational(12, 1)), 2);
}

TEST(ApCache, RoundTrip) {
    calibrate_ap(200);
    HeckeApTable table;
    for (int64_t p : primes_up_to(500))
        if (p != 7) table.insert(p, ap(p), ApSource::character);
    auto path = scratch_file("roundtrip.txt");
    table.save(path);
    auto loaded = HeckeApTable::load(path);
    auto a = table.snapshot(), b = loaded.snapshot();
    ASSERT_EQ(a.size(), b.size());
    for (auto& [p, e] : a) {
        EXPECT_EQ(b.at(p).ap, e.ap);
        EXPECT_EQ(b.at(p).source, e.source);
    }
    auto again = scratch_file("roundtrip2.txt");
    loaded.save(again);
    std::ifstream f1(path), f2(again);
    std::string s1((std::istreambuf_iterator<char>(f1)), {}), s2((std::istreambuf_iterator<char>(f2)), {});
    EXPECT_EQ(s1, s2);
}

TEST(ApCache, TamperedLineReportsLineNumber) {
    HeckeApTable table;
    for (int64_t p : {2, 3, 5, 11}) table.insert(p, ap(p), ApSource::point_count);
    auto path = scratch_file("tampered.txt");
    table.save(path);
    std::vector<std::string> lines;
    {
        std::ifstream in(path);
        for (std::string line; std::getline(in, line);) lines.push_back(line);
    }
    ASSERT_GE(lines.size(), 3u);
    lines[2] = "abc";
    {
        std::ofstream out(path);
        for (const auto& line : lines) out << line << '\n';
    }
    try {
        HeckeApTable::load(path);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::parse_error);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(ApCache, EmptyFileIsEmptyTable) {
    auto path = scratch_file("empty.txt");
    std::ofstream(path).close();
    EXPECT_EQ(HeckeApTable::load(path).size(), 0u);
}

TEST(ApCache, ConflictingInsertRejected) {
    HeckeApTable table;
    table.insert(11, 4, ApSource::character);
    EXPECT_NO_THROW(table.insert(11, 4, ApSource::point_count));
    try {
        table.insert(11, -4, ApSource::character);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::oracle_disagreement);
    }
}
