#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twist49 {

enum class ErrorCode {
    invalid_argument,
    not_squarefree,
    divisible_by_seven,
    out_of_range,
    wrong_root_number,
    snap_failure,
    oracle_disagreement,
    indeterminate,
    pole,
    parse_error,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

int64_t mod_floor(int64_t a, int64_t m);
int64_t mulmod(int64_t a, int64_t b, int64_t m);
int64_t powmod(int64_t a, uint64_t e, int64_t m);
int64_t gcd(int64_t a, int64_t b);
int64_t isqrt(int64_t n);
bool is_square(int64_t n);

// Full Kronecker symbol (a/n), including n even or negative.
int kronecker(int64_t a, int64_t n);

// Deterministic Miller-Rabin; bases cover every 64-bit input.
bool is_prime(int64_t n);

std::vector<std::pair<int64_t, int>> factorize(int64_t n);
std::vector<int64_t> prime_factors(int64_t n);
std::vector<int64_t> primes_up_to(int64_t n);
bool is_squarefree(int64_t n);
int ord_p(int64_t n, int64_t p);

// Signed squarefree representative of n modulo rational squares.
int64_t squarefree_part(int64_t n);
// Product of two squarefree classes, reduced modulo squares.
int64_t class_mul(int64_t a, int64_t b);

std::optional<int64_t> sqrt_mod(int64_t a, int64_t p);

// (a/p)_4 == 1; requires p = 1 mod 4 and (a/p) = 1.
bool quartic_is_one(int64_t a, int64_t p);

enum class Splitting { split, inert, ramified };

struct PrimeClassification {
    int64_t p = 0;
    Splitting splitting = Splitting::inert;
    int mod4 = 0;
    bool eligible_q = false;   // p = 1 mod 4, inert in Q(sqrt(-7))
    bool eligible_p4 = false;  // p splits completely in Q(i, (-7)^(1/4))
};

PrimeClassification classify_prime(int64_t p);

struct FactoredTwist {
    int64_t M = 1;
    int epsilon = 1;
    int delta = 0;
    int64_t R = 1, N = 1;
    int64_t R_plus = 1, R_minus = 1, N_plus = 1, N_minus = 1;
    int r_minus = 0, k_minus = 0;
    std::vector<int64_t> inert_primes;  // odd primes of R, ascending
    std::vector<int64_t> split_primes;  // odd primes of N, ascending

    int r() const { return static_cast<int>(inert_primes.size()); }
    int k() const { return static_cast<int>(split_primes.size()); }
};

FactoredTwist factor_twist(int64_t M);

// Fundamental discriminant of Q(sqrt(M)) for squarefree M != 1.
int64_t field_discriminant(int64_t M);

// Solve 4p = a^2 + 7 b^2 with a, b > 0.
std::optional<std::pair<int64_t, int64_t>> norm_form_4p(int64_t p);

}  // namespace twist49
