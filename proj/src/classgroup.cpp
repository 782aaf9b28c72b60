#include "twist49/classgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twist49/arith.hpp"

namespace twist49 {

namespace {

using i128 = __int128;

int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Extended gcd: returns g = gcd(a, b) >= 0 with x a + y b = g.
int64_t ext_gcd(int64_t a, int64_t b, int64_t& x, int64_t& y) {
    int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        int64_t q = floor_div(old_r, r);
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

QuadForm normalize(QuadForm f) {
    int64_t D = f.disc();
    int64_t r = floor_div(f.a - f.b, 2 * f.a);
    f.b += 2 * f.a * r;
    f.c = static_cast<int64_t>((static_cast<i128>(f.b) * f.b - D) / (4 * static_cast<i128>(f.a)));
    return f;
}

}  // namespace

bool QuadForm::is_reduced() const {
    if (a <= 0) return false;
    if (std::llabs(b) > a || a > c) return false;
    if ((std::llabs(b) == a || a == c) && b < 0) return false;
    return true;
}

void check_discriminant(int64_t D) {
    if (D >= 0) fail(ErrorCode::invalid_argument, "discriminant must be negative");
    int64_t r = mod_floor(D, 4);
    if (r != 0 && r != 1) fail(ErrorCode::invalid_argument, "discriminant must be 0 or 1 mod 4");
}

bool is_fundamental(int64_t D) {
    check_discriminant(D);
    if (mod_floor(D, 4) == 1) return is_squarefree(D);
    int64_t m = D / 4;
    int64_t r = mod_floor(m, 4);
    return (r == 2 || r == 3) && is_squarefree(m);
}

QuadForm reduce(QuadForm f) {
    int64_t D = f.disc();
    if (D >= 0 || f.a <= 0) fail(ErrorCode::invalid_argument, "reduce: need positive definite form");
    f = normalize(f);
    while (f.a > f.c) {
        f = QuadForm{f.c, -f.b, f.a};
        f = normalize(f);
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
}

QuadForm identity_form(int64_t D) {
    check_discriminant(D);
    int64_t b = mod_floor(D, 4) == 0 ? 0 : 1;
    return QuadForm{1, b, (b * b - D) / 4};
}

QuadForm inverse(const QuadForm& f) { return reduce(QuadForm{f.a, -f.b, f.c}); }

QuadForm compose(const QuadForm& f1, const QuadForm& f2) {
    int64_t D = f1.disc();
    if (f2.disc() != D) fail(ErrorCode::invalid_argument, "compose: discriminants differ");
    QuadForm f = f1, g = f2;
    if (f.a > g.a) std::swap(f, g);
    int64_t s = (f.b + g.b) / 2;
    int64_t n = g.b - s;
    int64_t y1, d;
    if (g.a % f.a == 0) {
        y1 = 0;
        d = f.a;
    } else {
        int64_t u, v;
        d = ext_gcd(g.a, f.a, u, v);
        y1 = u;
    }
    int64_t x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        d1 = ext_gcd(s, d, x2, y2);
        y2 = -y2;
    }
    int64_t v1 = f.a / d1, v2 = g.a / d1;
    i128 r = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * g.c) % v1;
    if (r < 0) r += v1;
    i128 b3 = g.b + 2 * static_cast<i128>(v2) * r;
    i128 a3 = static_cast<i128>(v1) * v2;
    i128 c3 = (b3 * b3 - D) / (4 * a3);
    return reduce(QuadForm{static_cast<int64_t>(a3), static_cast<int64_t>(b3), static_cast<int64_t>(c3)});
}

QuadForm power(const QuadForm& f, int64_t e) {
    QuadForm result = identity_form(f.disc());
    QuadForm base = reduce(f);
    if (e < 0) {
        base = inverse(base);
        e = -e;
    }
    while (e > 0) {
        if (e & 1) result = compose(result, base);
        base = compose(base, base);
        e >>= 1;
    }
    return result;
}

std::vector<QuadForm> reduced_forms(int64_t D) {
    check_discriminant(D);
    std::vector<QuadForm> out;
    for (int64_t a = 1; 3 * a * a <= -D; ++a) {
        for (int64_t b = -a + 1; b <= a; ++b) {
            if (mod_floor(b * b - D, 4 * a) != 0) continue;
            int64_t c = (b * b - D) / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1) continue;
            out.push_back(QuadForm{a, b, c});
        }
    }
    return out;
}

int ClassGroupData::index_of(const QuadForm& f) const {
    auto it = index_.find(reduce(f));
    if (it == index_.end()) fail(ErrorCode::invalid_argument, "form not in class group");
    return it->second;
}

bool ClassGroupData::has_order_four() const {
    return std::any_of(cycle_structure.begin(), cycle_structure.end(), [](int64_t d) { return d % 4 == 0; });
}

ClassGroupData class_group(int64_t D) {
    ClassGroupData g;
    g.disc = D;
    g.elements = reduced_forms(D);
    QuadForm e = identity_form(D);
    auto it = std::find(g.elements.begin(), g.elements.end(), e);
    std::rotate(g.elements.begin(), it, it + 1);
    g.h = static_cast<int64_t>(g.elements.size());
    for (size_t i = 0; i < g.elements.size(); ++i) g.index_[g.elements[i]] = static_cast<int>(i);

    g.orders.resize(g.elements.size());
    for (size_t i = 0; i < g.elements.size(); ++i) {
        QuadForm x = g.elements[i];
        int64_t k = 1;
        while (x != e) {
            x = compose(x, g.elements[i]);
            ++k;
        }
        g.orders[i] = k;
    }

    // Invariant factors from the sizes of the p^k-torsion subgroups.
    std::vector<std::vector<int64_t>> per_prime;
    for (auto& [p, exponent] : (g.h > 1 ? factorize(g.h) : std::vector<std::pair<int64_t, int>>{})) {
        std::vector<int64_t> counts{1};  // |G[p^k]| for k = 0, 1, ...
        int64_t pk = 1;
        while (counts.back() < [&] {
            int64_t full = 1;
            for (int i = 0; i < exponent; ++i) full *= p;
            return full;
        }()) {
            pk *= p;
            int64_t cnt = std::count_if(g.orders.begin(), g.orders.end(), [&](int64_t o) { return pk % o == 0; });
            counts.push_back(cnt);
        }
        // number of cyclic factors of order >= p^k is log_p(counts[k]/counts[k-1])
        std::vector<int> at_least;
        for (size_t k = 1; k < counts.size(); ++k) {
            int64_t ratio = counts[k] / counts[k - 1];
            int m = 0;
            while (ratio > 1) {
                ratio /= p;
                ++m;
            }
            at_least.push_back(m);
        }
        std::vector<int64_t> factors;
        int total = at_least.empty() ? 0 : at_least[0];
        for (int j = 0; j < total; ++j) {
            int64_t order = 1;
            for (size_t k = 0; k < at_least.size(); ++k)
                if (at_least[k] > j) order *= p;
            factors.push_back(order);
        }
        std::sort(factors.begin(), factors.end());
        per_prime.push_back(factors);
        if (p == 2) g.two_sylow = factors;
    }
    size_t rank = 0;
    for (auto& f : per_prime) rank = std::max(rank, f.size());
    g.cycle_structure.assign(rank, 1);
    for (auto& f : per_prime) {
        size_t offset = rank - f.size();
        for (size_t i = 0; i < f.size(); ++i) g.cycle_structure[offset + i] *= f[i];
    }
    for (int64_t d : g.two_sylow) {
        if (d % 2 == 0) ++g.h2;
        if (d % 4 == 0) ++g.h4;
        if (d % 8 == 0) ++g.h8;
    }
    return g;
}

bool has_order_four(int64_t D) { return class_group(D).has_order_four(); }

std::vector<int64_t> prime_discriminants(int64_t D) {
    if (!is_fundamental(D)) fail(ErrorCode::invalid_argument, "prime_discriminants: D not fundamental");
    std::vector<int64_t> out;
    int64_t odd_product = 1;
    for (int64_t p : prime_factors(D)) {
        if (p == 2) continue;
        int64_t ps = p % 4 == 1 ? p : -p;
        out.push_back(ps);
        odd_product *= ps;
    }
    if (D % 4 == 0) out.push_back(D / odd_product);
    return out;
}

int RedeiMatrix::rank() const {
    auto m = entries;
    int rows = static_cast<int>(m.size());
    int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pivot = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c]) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[r], m[pivot]);
        for (int i = 0; i < rows; ++i)
            if (i != r && m[i][c])
                for (int j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
        ++r;
    }
    return r;
}

RedeiRanks redei_ranks(int64_t D) {
    RedeiRanks out;
    auto ps = prime_discriminants(D);
    size_t t = ps.size();
    out.matrix.primes = ps;
    out.matrix.entries.assign(t, std::vector<int>(t, 0));
    auto prime_of = [](int64_t pstar) { return std::llabs(pstar) % 2 == 0 ? int64_t{2} : std::llabs(pstar); };
    for (size_t i = 0; i < t; ++i) {
        int diag = 0;
        for (size_t j = 0; j < t; ++j) {
            if (i == j) continue;
            int s = kronecker(ps[j], prime_of(ps[i]));
            out.matrix.entries[i][j] = s == -1 ? 1 : 0;
            diag ^= out.matrix.entries[i][j];
        }
        out.matrix.entries[i][i] = diag;
    }
    out.h2 = static_cast<int>(t) - 1;
    out.h4 = out.h2 - out.matrix.rank();
    return out;
}

namespace {

void check_h8_input(int64_t p) {
    if (!is_prime(p) || p % 4 != 1 || kronecker(p, 7) != 1)
        fail(ErrorCode::invalid_argument, "h8_for_7p: need prime p = 1 mod 4 with (p/7) = 1");
}

}  // namespace

EightRankCertificate h8_for_7p_by_triples(int64_t p) {
    check_h8_input(p);
    EightRankCertificate cert;
    cert.p = p;
    cert.from_triple = true;
    auto bound = static_cast<int64_t>(4.0 * std::sqrt(static_cast<double>(p))) + 1;
    std::optional<EightRankCertificate> negative;
    for (int pass = 0; pass < 2; ++pass, bound *= 4) {
        for (int64_t x = 1; x <= bound; ++x) {
            for (int64_t y = 1; y <= bound; ++y) {
                int64_t zz = p * x * x + 7 * y * y;
                if (!is_square(zz)) continue;
                int64_t z = isqrt(zz);
                if (std::gcd(std::gcd(x, y), z) != 1) continue;
                if (z % 2 == 0 || z % 7 == 0 || z % p == 0) continue;
                EightRankCertificate c = cert;
                c.x = x;
                c.y = y;
                c.z = z;
                if (kronecker(z, 7) == 1) {
                    c.value = 1;
                    return c;
                }
                if (!negative) negative = c;
            }
        }
    }
    if (negative) return *negative;
    cert.from_triple = false;
    return cert;
}

EightRankCertificate h8_for_7p(int64_t p) {
    check_h8_input(p);
    EightRankCertificate cert;
    cert.p = p;
    cert.value = quartic_is_one(-7, p) ? 1 : 0;
    auto triple = h8_for_7p_by_triples(p);
    if (triple.value != cert.value)
        fail(ErrorCode::oracle_disagreement, "h8_for_7p: criterion and triple search disagree at p = " + std::to_string(p));
    return cert;
}

PrimeRepresentative prime_representative(const QuadForm& f, int64_t avoid, int64_t skip_below) {
    int64_t D = f.disc();
    QuadForm g = reduce(f);
    for (int64_t bound = 16;; bound *= 2) {
        std::optional<std::tuple<int64_t, int64_t, int64_t>> best;
        for (int64_t x = -bound; x <= bound; ++x) {
            for (int64_t y = 0; y <= bound; ++y) {
                if (y == 0 && x <= 0) continue;
                if (std::gcd(std::llabs(x), y) != 1) continue;
                int64_t v = g.eval(x, y);
                if (v <= skip_below || !is_prime(v) || (avoid != 0 && avoid % v == 0) || D % v == 0) continue;
                if (!best || v < std::get<0>(*best)) best = std::make_tuple(v, x, y);
            }
        }
        if (!best) {
            if (bound > (int64_t{1} << 12)) fail(ErrorCode::indeterminate, "prime_representative: no prime found");
            continue;
        }
        auto [p, x, y] = *best;
        int64_t u, w;
        ext_gcd(x, y, w, u);  // w x + u y = 1
        // matrix [[x, -u], [y, w]] has determinant 1
        int64_t b = 2 * g.a * x * (-u) + g.b * (x * w + y * (-u)) + 2 * g.c * y * w;
        int64_t c = (b * b - D) / (4 * p);
        QuadForm h{p, b, c};
        if (reduce(h) != g) fail(ErrorCode::indeterminate, "prime_representative: transform failed");
        return {p, h};
    }
}

int64_t signed_discriminant(int64_t d) {
    if (d <= 0 || d % 2 == 0) fail(ErrorCode::invalid_argument, "signed_discriminant: need odd d > 0");
    return d % 4 == 1 ? d : -d;
}

int genus_character(int64_t D, int64_t d, int64_t q) {
    int64_t ds = signed_discriminant(d);
    if (D % ds != 0) fail(ErrorCode::invalid_argument, "genus_character: d* does not divide D");
    int64_t co = D / ds;
    if (mod_floor(co, 4) == 2 || mod_floor(co, 4) == 3)
        fail(ErrorCode::invalid_argument, "genus_character: cofactor is not a discriminant");
    if (q == 1) return 1;
    if (std::gcd(ds, q) == 1) return kronecker(ds, q);
    return kronecker(co, q);
}

int genus_character(int64_t D, int64_t d, const QuadForm& f) {
    auto rep = prime_representative(f, 2 * D);
    return genus_character(D, d, rep.p);
}

}  // namespace twist49
