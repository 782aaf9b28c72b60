#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <vector>

#include <boost/rational.hpp>

namespace twist49 {

using Rational = boost::rational<int64_t>;

enum class ApSource { character, point_count };

struct ApEntry {
    int64_t ap = 0;
    ApSource source = ApSource::character;
};

// Grow-only a_p cache. Readers take a shared lock, the single writer an exclusive one.
class HeckeApTable {
public:
    HeckeApTable() = default;
    HeckeApTable(HeckeApTable&& other) noexcept;
    int64_t ap(int64_t p);
    void insert(int64_t p, int64_t ap, ApSource source);
    std::map<int64_t, ApEntry> snapshot() const;
    size_t size() const;

    // "p<TAB>a_p<LF>", ascending p, no header.
    void save(const std::filesystem::path& path) const;
    static HeckeApTable load(const std::filesystem::path& path);

private:
    mutable std::shared_mutex mutex_;
    std::map<int64_t, ApEntry> entries_;
};

// p + 1 - #A(F_p) on y^2 + xy = x^3 - x^2 - 2x - 1.
int64_t ap_oracle(int64_t p);
// Grossencharacter route.
int64_t ap(int64_t p);
// Throws oracle_disagreement on the first mismatch below bound.
void calibrate_ap(int64_t bound = 200);

HeckeApTable& default_ap_table();

// Entries a_0 = 0, a_1 = 1, ... up to at least index n; cached and extended on demand.
std::shared_ptr<const std::vector<int64_t>> an_table(int64_t n);

int root_number(int64_t M);

double omega_A();
double omega_minus();
double omega_twist(int64_t M);

enum class Precision { automatic, binary64, double_double };

struct LValueRecord {
    int64_t M = 1;
    int64_t label = 1;  // coprime-to-7 twist carrying the same L-series
    int64_t conductor = 49;
    int root = 1;
    double L_numeric = 0;
    std::optional<double> L_prime_numeric;
    double omega = 0;
    std::optional<Rational> lalg;
    std::optional<int> ord2;
    int64_t terms_used = 0;
    double error_bound = 0;
    Precision precision_used = Precision::binary64;
};

LValueRecord l_central(int64_t M, Precision precision = Precision::automatic);
LValueRecord l_derivative(int64_t M);

struct LalgValue {
    Rational value;
    std::optional<int> ord2;  // empty when value = 0
};

LalgValue lalg_ord2(int64_t M, Precision precision = Precision::automatic);

// Continued-fraction snap; empty if no fraction with den <= max_den lies within tol.
std::optional<Rational> snap_rational(double x, int64_t max_den = 64, double tol = 1e-6);

int ord2_rational(const Rational& r);

}  // namespace twist49
