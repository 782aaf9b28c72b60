#include "twist49/descent.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <set>

#include "twist49/classgroup.hpp"

namespace twist49 {

bool SelmerSet::contains(int64_t d) const { return std::binary_search(members.begin(), members.end(), d); }

namespace {

int dim_of(size_t n) {
    int d = 0;
    while ((size_t{1} << d) < n) ++d;
    return d;
}

std::vector<int64_t> signed_divisors(const std::vector<int64_t>& primes) {
    std::vector<int64_t> out;
    size_t count = size_t{1} << primes.size();
    for (size_t mask = 0; mask < count; ++mask) {
        int64_t d = 1;
        for (size_t i = 0; i < primes.size(); ++i)
            if (mask >> i & 1) d *= primes[i];
        out.push_back(d);
        out.push_back(-d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SelmerSet close_up(IsogenySide kind, std::vector<int64_t> base) {
    int64_t torsion = kind == IsogenySide::phi ? -7 : 7;
    std::set<int64_t> all;
    for (int64_t d : base) {
        all.insert(d);
        all.insert(class_mul(d, torsion));
    }
    SelmerSet s;
    s.kind = kind;
    s.members.assign(all.begin(), all.end());
    s.dim = dim_of(s.members.size());
    s.quotient_dim = s.dim - 1;
    return s;
}

int64_t m8(int64_t x) { return mod_floor(x, 8); }
int64_t m16(int64_t x) { return mod_floor(x, 16); }

}  // namespace

std::vector<int64_t> q2m(const FactoredTwist& M) {
    std::vector<int64_t> primes{2, 7};
    for (int64_t p : prime_factors(M.M))
        if (p != 2) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    return signed_divisors(primes);
}

bool is_confucian(int64_t d, const FactoredTwist& M) {
    if (d == 0 || (2 * M.M) % d != 0) fail(ErrorCode::invalid_argument, "is_confucian: d must divide 2M");
    // M/d as a fraction num/den in lowest terms
    int64_t g = gcd(M.M, d);
    int64_t num = M.M / g, den = d / g;
    for (int64_t p : M.split_primes) {
        if (p % 4 != 1) continue;
        if (d % p != 0) {
            if (kronecker(d, p) != 1) return false;
        } else {
            int quartic = quartic_is_one(-7, p) ? 1 : -1;
            if (kronecker(num, p) * kronecker(den, p) != quartic) return false;
        }
    }
    return true;
}

SelmerSet selmer_phi(const FactoredTwist& M) {
    std::vector<int64_t> support;
    if (M.delta) support.push_back(2);
    for (int64_t q : M.inert_primes)
        if (q % 4 == 3) support.push_back(q);
    for (int64_t p : M.split_primes)
        if (p % 4 == 1) support.push_back(p);
    int64_t m4 = mod_floor(M.M, 4), mm8 = m8(M.M);
    std::vector<int64_t> accepted;
    for (int64_t d : signed_divisors(support)) {
        // (2)
        if (m4 == 1 && mod_floor(d, 4) != 1) continue;
        if (m4 == 3 && m8(d) != 1) continue;
        // (3)
        if (mm8 == 6 && m8(d) != 1) continue;
        if (mm8 == 2 && !(m8(d) == 1 || m16(d) == m16(5 * M.M))) continue;
        // (4)
        bool ok = true;
        for (int64_t p : M.split_primes)
            if (p % 4 == 3 && kronecker(d, p) != 1) ok = false;
        if (!ok) continue;
        // (5)
        if (!is_confucian(d, M)) continue;
        accepted.push_back(d);
    }
    return close_up(IsogenySide::phi, accepted);
}

SelmerSet selmer_phihat(const FactoredTwist& M) {
    std::vector<int64_t> support{2};
    for (int64_t p : M.split_primes) support.push_back(p);
    int64_t m4 = mod_floor(M.M, 4), mm8 = m8(M.M);
    std::vector<int64_t> accepted;
    for (int64_t d : signed_divisors(support)) {
        // (1)
        if (d <= 0) continue;
        if ((2 * M.N) % d != 0) continue;
        // (2)
        if (m4 == 1 && d % 2 == 0) continue;
        if (mm8 == 2) {
            int64_t r = m8(d);
            int64_t t = m16(d);
            bool ok = r == 1 || r == 7 || t == m16(3 * M.M) || t == m16(-3 * M.M);
            if (!ok) continue;
        }
        // (3)
        bool ok = true;
        for (int64_t q : M.inert_primes)
            if (q % 4 == 3 && kronecker(d, q) != 1) ok = false;
        if (!ok) continue;
        // (4)
        if (!is_confucian(d, M)) continue;
        accepted.push_back(d);
    }
    return close_up(IsogenySide::phihat, accepted);
}

std::array<int64_t, 3> torsor_quartic(IsogenySide kind, int64_t d, int64_t M) {
    __int128 dd = d, mm = M;
    __int128 c4, c2, c0;
    if (kind == IsogenySide::phi) {
        c4 = -7 * mm * mm * dd * dd * dd;
        c2 = -42 * mm * dd * dd;
        c0 = dd;
    } else {
        c4 = 28 * mm * mm * dd * dd * dd;
        c2 = 84 * mm * dd * dd;
        c0 = 64 * dd;
    }
    const __int128 limit = static_cast<__int128>(INT64_MAX);
    if (c4 > limit || c4 < -limit) fail(ErrorCode::out_of_range, "torsor_quartic: coefficients exceed 64 bits");
    return {static_cast<int64_t>(c4), static_cast<int64_t>(c2), static_cast<int64_t>(c0)};
}

namespace {

using Poly = std::array<mpz_class, 5>;  // coefficients of x^0 .. x^4

int valuation(const mpz_class& x, long p) {
    if (x == 0) return 1 << 30;
    mpz_class t = x;
    int v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

mpz_class unit_part(const mpz_class& x, long p) {
    mpz_class t = x;
    while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p)))
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
    return t;
}

bool is_padic_square_nonzero(const mpz_class& x, long p) {
    int v = valuation(x, p);
    if (v & 1) return false;
    mpz_class u = unit_part(x, p);
    if (p == 2) {
        mpz_class r = u % 8;
        if (r < 0) r += 8;
        return r == 1;
    }
    mpz_class pp = p;
    return mpz_legendre(u.get_mpz_t(), pp.get_mpz_t()) == 1;
}

// Taylor coefficients g^(i)(x0)/i! for i = 0..4.
std::array<mpz_class, 5> taylor(const Poly& g, const mpz_class& x0) {
    static const int binom[5][5] = {{1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
    std::array<mpz_class, 5> t;
    for (int i = 0; i < 5; ++i) {
        t[i] = 0;
        for (int j = i; j < 5; ++j) {
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), x0.get_mpz_t(), static_cast<unsigned long>(j - i));
            t[i] += g[j] * binom[j][i] * pw;
        }
    }
    return t;
}

struct BallSearch {
    Poly g;
    long p;
    int max_depth;

    // Is there x in x0 + p^k Z_p with g(x) a nonzero square (or a root)?
    bool soluble(const mpz_class& x0, int k) const {
        auto t = taylor(g, x0);
        if (t[0] == 0) return true;
        int l = valuation(t[0], p);
        int v = 1 << 30;
        for (int i = 1; i < 5; ++i)
            if (t[i] != 0) v = std::min(v, valuation(t[i], p) + i * k);
        int margin = p == 2 ? 3 : 1;
        if (v >= l + margin) return is_padic_square_nonzero(t[0], p);
        if (t[1] != 0) {
            int m = valuation(t[1], p);
            if (l > 2 * m && l - m >= k) return true;  // Newton converges to a root inside the ball
        }
        if (k >= max_depth)
            fail(ErrorCode::indeterminate, "local oracle: depth bound reached at p = " + std::to_string(p));
        mpz_class step;
        mpz_ui_pow_ui(step.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
        for (long j = 0; j < p; ++j)
            if (soluble(x0 + step * j, k + 1)) return true;
        return false;
    }
};

bool real_soluble(int64_t c4, int64_t c2, int64_t c0) {
    // g(u) = c4 U^2 + c2 U + c0 with U = u^2 >= 0
    if (c4 > 0 || c0 > 0) return true;
    if (c4 == 0) return c2 > 0;
    long double vertex = -static_cast<long double>(c2) / (2.0L * c4);
    if (vertex <= 0) return false;
    long double value = c4 * vertex * vertex + c2 * vertex + c0;
    return value > 0;
}

}  // namespace

bool local_oracle(IsogenySide kind, int64_t d, const FactoredTwist& M, int64_t place) {
    auto [c4, c2, c0] = torsor_quartic(kind, d, M.M);
    if (place == real_place) return real_soluble(c4, c2, c0);
    if (!is_prime(place)) fail(ErrorCode::invalid_argument, "local_oracle: place must be 0 or a prime");
    long p = static_cast<long>(place);
    int depth = p == 2 ? 40 : 24;
    Poly affine{mpz_class(static_cast<long>(c0)), 0, mpz_class(static_cast<long>(c2)), 0, mpz_class(static_cast<long>(c4))};
    Poly reversed{affine[4], affine[3], affine[2], affine[1], affine[0]};
    BallSearch a{affine, p, depth};
    if (a.soluble(0, 0)) return true;
    BallSearch b{reversed, p, depth};
    return b.soluble(0, 1);
}

bool everywhere_locally_soluble(IsogenySide kind, int64_t d, const FactoredTwist& M) {
    if (!local_oracle(kind, d, M, real_place)) return false;
    std::set<int64_t> places{2, 7};
    for (int64_t p : prime_factors(M.M)) places.insert(p);
    for (int64_t p : places)
        if (!local_oracle(kind, d, M, p)) return false;
    return true;
}

SelmerSet selmer_by_oracle(IsogenySide kind, const FactoredTwist& M) {
    SelmerSet s;
    s.kind = kind;
    s.from_oracle = true;
    for (int64_t d : q2m(M))
        if (everywhere_locally_soluble(kind, d, M)) s.members.push_back(d);
    s.dim = dim_of(s.members.size());
    s.quotient_dim = s.dim - 1;
    return s;
}

Selmer2Report selmer2_report(const FactoredTwist& M) {
    Selmer2Report r;
    auto phi = selmer_phi(M);
    auto phihat = selmer_phihat(M);
    r.dim_phi_quot = phi.quotient_dim;
    r.dim_phihat = phihat.dim;
    r.even = M.M > 0;
    r.lo = r.dim_phi_quot;
    r.hi = r.dim_phi_quot + r.dim_phihat - 1;
    int parity = r.even ? 0 : 1;
    if ((r.lo & 1) != parity) ++r.lo;
    if ((r.hi & 1) != parity) --r.hi;
    if (r.lo == r.hi) r.dim2 = r.lo;

    auto exact_is = [&](int v) { return r.dim2 && *r.dim2 == v; };
    bool m1 = mod_floor(M.M, 4) == 1;
    if (M.M > 0 && M.delta == 0 && M.N == 1 && M.R_minus == 1) {
        r.consistency.push_back({"R_plus_trivial", exact_is(0), "expected 0"});
    }
    if (M.M > 0 && M.delta == 0 && M.N == 1 && m1) {
        r.consistency.push_back({"R_order_r_minus", exact_is(M.r_minus), "expected " + std::to_string(M.r_minus)});
    }
    if (M.M > 0 && M.delta == 0 && M.N_minus == 1 && M.N_plus > 1 && m1) {
        bool hyp = true;
        for (int64_t p : M.split_primes) {
            if (!classify_prime(p).eligible_p4) hyp = false;
            for (int64_t q : M.inert_primes)
                if (kronecker(q, p) != 1) hyp = false;
        }
        if (hyp) r.consistency.push_back({"split_nonzero", r.lo >= 1, "expected nonzero"});
    }
    if (M.M < 0 && M.delta == 0 && M.N_minus == 1) {
        std::vector<int64_t> minus;
        for (int64_t q : M.inert_primes)
            if (q % 4 == 3) minus.push_back(q);
        bool hyp = minus.size() == 1;
        for (int64_t p : M.split_primes) {
            if (!classify_prime(p).eligible_p4) hyp = false;
            for (int64_t q : M.inert_primes)
                if (q % 4 == 1 && kronecker(q, p) != 1) hyp = false;
        }
        if (hyp) {
            int64_t V = -minus[0] * M.N_plus;
            bool order_two = phi.dim == 2 && phi.contains(V) && phihat.dim == 1;
            bool no_four = !has_order_four(V);
            r.consistency.push_back({"order_four_criterion", order_two == no_four,
                                     std::string("order 2: ") + (order_two ? "yes" : "no") +
                                         ", no element of order 4: " + (no_four ? "yes" : "no")});
        }
    }
    return r;
}

}  // namespace twist49
