#include "twist49/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace twist49 {

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

int64_t mod_floor(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

int64_t mulmod(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>(static_cast<__int128>(mod_floor(a, m)) * mod_floor(b, m) % m);
}

int64_t powmod(int64_t a, uint64_t e, int64_t m) {
    int64_t result = 1 % m;
    int64_t base = mod_floor(a, m);
    while (e > 0) {
        if (e & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return result;
}

int64_t gcd(int64_t a, int64_t b) { return std::gcd(a, b); }

int64_t isqrt(int64_t n) {
    if (n < 0) fail(ErrorCode::invalid_argument, "isqrt of negative");
    auto r = static_cast<int64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<__int128>(r) * r > n) --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(int64_t n) {
    if (n < 0) return false;
    int64_t r = isqrt(n);
    return r * r == n;
}

int kronecker(int64_t a, int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int twos = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++twos;
    }
    if (twos > 0) {
        if (a % 2 == 0) return 0;
        if ((twos & 1) && (mod_floor(a, 8) == 3 || mod_floor(a, 8) == 5)) result = -result;
    }
    // Jacobi symbol (a/n) for odd positive n
    a = mod_floor(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int r = static_cast<int>(n % 8);
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

bool is_prime(int64_t n) {
    if (n < 2) return false;
    static const int64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (int64_t p : small) {
        if (n % p == 0) return n == p;
    }
    int64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (int64_t a : small) {
        int64_t x = powmod(a, static_cast<uint64_t>(d), n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

int64_t pollard_brent(int64_t n) {
    if (n % 2 == 0) return 2;
    for (int64_t c = 1;; ++c) {
        int64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        int64_t r = 1;
        const int64_t m = 128;
        auto f = [&](int64_t v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (int64_t i = 0; i < r; ++i) y = f(y);
            int64_t k = 0;
            do {
                ys = y;
                for (int64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, std::llabs(x - y), n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(std::llabs(x - ys), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(int64_t n, std::vector<int64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    int64_t d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
    if (n == 0) fail(ErrorCode::invalid_argument, "factorize(0)");
    if (n == INT64_MIN) fail(ErrorCode::out_of_range, "factorize: input out of range");
    n = std::llabs(n);
    std::vector<int64_t> primes;
    for (int64_t p = 2; p <= 1000 && p * p <= n; ++p) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    factor_into(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<int64_t, int>> out;
    for (int64_t p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

std::vector<int64_t> prime_factors(int64_t n) {
    std::vector<int64_t> out;
    for (auto& [p, e] : factorize(n)) out.push_back(p);
    return out;
}

std::vector<int64_t> primes_up_to(int64_t n) {
    std::vector<int64_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
    for (int64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (int64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

bool is_squarefree(int64_t n) {
    if (n == 0) return false;
    for (auto& [p, e] : factorize(n))
        if (e > 1) return false;
    return true;
}

int ord_p(int64_t n, int64_t p) {
    if (n == 0) fail(ErrorCode::invalid_argument, "ord_p(0)");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int64_t squarefree_part(int64_t n) {
    if (n == 0) fail(ErrorCode::invalid_argument, "squarefree_part(0)");
    int64_t out = n < 0 ? -1 : 1;
    for (auto& [p, e] : factorize(n))
        if (e & 1) out *= p;
    return out;
}

int64_t class_mul(int64_t a, int64_t b) {
    int64_t g = std::gcd(a, b);
    return (a / g) * (b / g);
}

std::optional<int64_t> sqrt_mod(int64_t a, int64_t p) {
    a = mod_floor(a, p);
    if (p == 2) return a;
    if (a == 0) return 0;
    if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
    int64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    int64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    int64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        int64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        int64_t b = c;
        for (int64_t j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return std::min(r, p - r);
}

bool quartic_is_one(int64_t a, int64_t p) {
    if (p % 4 != 1 || !is_prime(p)) fail(ErrorCode::invalid_argument, "quartic_is_one: need prime p = 1 mod 4");
    if (mod_floor(a, p) == 0) fail(ErrorCode::invalid_argument, "quartic_is_one: a divisible by p");
    if (kronecker(a, p) != 1) fail(ErrorCode::invalid_argument, "quartic_is_one: a is a non-residue");
    return powmod(a, static_cast<uint64_t>((p - 1) / 4), p) == 1;
}

PrimeClassification classify_prime(int64_t p) {
    if (!is_prime(p)) fail(ErrorCode::invalid_argument, "classify_prime: not prime");
    PrimeClassification c;
    c.p = p;
    c.mod4 = static_cast<int>(p % 4);
    int s = kronecker(-7, p);
    c.splitting = s == 0 ? Splitting::ramified : (s == 1 ? Splitting::split : Splitting::inert);
    c.eligible_q = c.splitting == Splitting::inert && c.mod4 == 1;
    c.eligible_p4 = c.splitting == Splitting::split && c.mod4 == 1 && quartic_is_one(-7, p);
    return c;
}

FactoredTwist factor_twist(int64_t M) {
    if (M == 0) fail(ErrorCode::invalid_argument, "factor_twist: M = 0");
    if (M % 7 == 0) fail(ErrorCode::divisible_by_seven, "factor_twist: 7 divides M");
    if (!is_squarefree(M)) fail(ErrorCode::not_squarefree, "factor_twist: M not squarefree");
    FactoredTwist t;
    t.M = M;
    t.epsilon = M < 0 ? -1 : 1;
    for (auto& [p, e] : factorize(M)) {
        if (p == 2) {
            t.delta = 1;
            continue;
        }
        bool minus = p % 4 == 3;
        if (kronecker(-7, p) == -1) {
            t.R *= p;
            t.inert_primes.push_back(p);
            if (minus) {
                t.R_minus *= p;
                ++t.r_minus;
            } else {
                t.R_plus *= p;
            }
        } else {
            t.N *= p;
            t.split_primes.push_back(p);
            if (minus) {
                t.N_minus *= p;
                ++t.k_minus;
            } else {
                t.N_plus *= p;
            }
        }
    }
    return t;
}

int64_t field_discriminant(int64_t M) { return mod_floor(M, 4) == 1 ? M : 4 * M; }

std::optional<std::pair<int64_t, int64_t>> norm_form_4p(int64_t p) {
    if (p == 2) return std::make_pair(int64_t{1}, int64_t{1});
    if (kronecker(-7, p) != 1) return std::nullopt;
    auto root = sqrt_mod(-7, p);
    int64_t x0 = *root;
    if (x0 % 2 == 0) x0 = p - x0;  // x0 = -7 mod 2
    int64_t a = 2 * p, b = x0;
    int64_t limit = isqrt(4 * p);
    while (b > limit) {
        int64_t r = a % b;
        a = b;
        b = r;
    }
    int64_t rest = 4 * p - b * b;
    if (rest % 7 != 0 || !is_square(rest / 7)) return std::nullopt;
    return std::make_pair(b, isqrt(rest / 7));
}

}  // namespace twist49
