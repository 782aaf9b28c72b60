#include "twist49/waldspurger.hpp"

#include <algorithm>
#include <cmath>

#include "twist49/arith.hpp"
#include "twist49/lseries.hpp"

namespace twist49 {

TestVector make_test_vector(TestVectorKind kind) {
    std::array<int, 4> f0{1, 0, -1, 0}, f1{0, 1, 0, -1};
    TestVector v;
    v.kind = kind;
    for (int s = 0; s < 4; ++s) {
        switch (kind) {
            case TestVectorKind::f0: v.values[s] = f0[s]; break;
            case TestVectorKind::f1: v.values[s] = f1[s]; break;
            case TestVectorKind::f0_minus_f1: v.values[s] = f0[s] - f1[s]; break;
            case TestVectorKind::f0_plus_f1: v.values[s] = f0[s] + f1[s]; break;
        }
    }
    v.pairing_norm = (kind == TestVectorKind::f0 || kind == TestVectorKind::f1) ? 2 : 4;
    return v;
}

std::string to_string(TestVectorKind kind) {
    switch (kind) {
        case TestVectorKind::f0: return "f0";
        case TestVectorKind::f1: return "f1";
        case TestVectorKind::f0_minus_f1: return "f0-f1";
        case TestVectorKind::f0_plus_f1: return "f0+f1";
    }
    return "?";
}

int lambda_order(int lambda) {
    int l = ((lambda % 4) + 4) % 4;
    return l == 0 ? 1 : (l == 2 ? 2 : 4);
}

namespace {

void check_label(int64_t n) {
    if (n < 1 || !is_squarefree(n) || mod_floor(n, 4) != 1 || n % 7 == 0)
        fail(ErrorCode::invalid_argument, "need n >= 1 squarefree, n = 1 mod 4, 7 not dividing n");
}

bool half_one_plus_integral(const OrderElement& xi) {
    auto X = xi.doubled();
    X[0] += 2;
    for (auto& v : X) {
        if (v % 2 != 0) return false;
        v /= 2;
    }
    return OrderElement::doubled_in_order(X);
}

}  // namespace

OrderElement find_embedding(int64_t n) {
    check_label(n);
    // trace zero forces d = -2a; then (2b + c)^2 + 7c^2 + 28a^2 = 28n
    int64_t limit = isqrt(28 * n) + 2;
    for (int64_t s = 0; s <= limit; ++s) {
        for (int64_t a = -s; a <= s; ++a) {
            for (int64_t b = -s; b <= s; ++b) {
                for (int64_t c = -s; c <= s; ++c) {
                    int64_t d = -2 * a;
                    if (std::max({std::llabs(a), std::llabs(b), std::llabs(c), std::llabs(d)}) != s) continue;
                    OrderElement xi{{a, b, c, d}};
                    if (xi.nrd() == 7 * n && half_one_plus_integral(xi)) return xi;
                }
            }
        }
    }
    fail(ErrorCode::indeterminate, "find_embedding: search exhausted for n = " + std::to_string(n));
}

int embedding_omega(const OrderElement& xi) {
    OrderElement jxi = OrderElement::unit_j() * xi, w;
    if (!divides_exactly(jxi, -7, w)) fail(ErrorCode::indeterminate, "embedding_omega: j xi not divisible by 7");
    return f49_class_log(reduce_mod_j(w)) % 4;
}

int class_to_lambda(const OrderElement& xi, int64_t p, int64_t m, OrderElement* witness) {
    if (p < 3 || !is_prime(p) || p == 7) fail(ErrorCode::invalid_argument, "class_to_lambda: need odd prime p != 7");
    if (mod_floor(m * m + xi.nrd(), p) != 0) fail(ErrorCode::invalid_argument, "class_to_lambda: m^2 != -7n mod p");
    OrderElement mx = scalar(m) + xi;
    for (const auto& t : elements_of_norm(p)) {
        OrderElement q;
        if (divides_exactly(mx * t.conj(), p, q)) {
            if (witness) *witness = t;
            return f49_class_log(reduce_mod_j(t)) % 4;
        }
    }
    fail(ErrorCode::indeterminate, "class_to_lambda: no divisor of norm " + std::to_string(p));
}

int chi7_of(int64_t d) { return kronecker(signed_discriminant(d), 7); }

TestVector select_test_vector(int delta, int chi7) {
    if (delta == 0) return make_test_vector(chi7 == 1 ? TestVectorKind::f0 : TestVectorKind::f1);
    return make_test_vector(chi7 == 1 ? TestVectorKind::f0_minus_f1 : TestVectorKind::f0_plus_f1);
}

TestVector select_test_vector(const GrossSetup& setup, int64_t d) {
    return select_test_vector(setup.delta, chi7_of(d));
}

GrossSetup gross_setup(int64_t n, bool orient) {
    check_label(n);
    GrossSetup setup;
    setup.n = n;
    setup.delta = kronecker(n, 7) == 1 ? 0 : 1;
    setup.xi_initial = find_embedding(n);
    setup.xi = setup.xi_initial;
    setup.omega = embedding_omega(setup.xi);

    int target = setup.delta == 0 ? 0 : 3;
    if (orient && setup.omega != target) {
        bool found = false;
        for (int64_t p = 3; p < 2000 && !found; p += 2) {
            if (!is_prime(p) || kronecker(p, 7) != -1 || kronecker(n, p) != -1) continue;
            for (const auto& t : elements_of_norm(p)) {
                OrderElement conj;
                if (!divides_exactly(t * setup.xi_initial * t.conj(), p, conj)) continue;
                if (!half_one_plus_integral(conj) || embedding_omega(conj) != target) continue;
                setup.xi = conj;
                setup.switcher = t;
                setup.switched = true;
                found = true;
                break;
            }
        }
        if (!found) fail(ErrorCode::indeterminate, "gross_setup: no switching element for n = " + std::to_string(n));
        setup.omega = target;
    }

    int64_t D = -7 * n;
    for (const auto& f : reduced_forms(D)) {
        auto rep = prime_representative(f, 14 * n);
        IdealClassEntry entry;
        entry.form = f;
        entry.p = rep.p;
        entry.m = mod_floor(-rep.form.b, rep.p);
        entry.lambda = class_to_lambda(setup.xi, entry.p, entry.m, &entry.t);
        setup.classes.push_back(entry);
    }
    return setup;
}

bool is_admissible(int64_t n, int64_t d) { return chi7_of(d) == chi7_of(n); }

int64_t y_d(const GrossSetup& setup, int64_t d) {
    if (d < 1 || setup.n % d != 0) fail(ErrorCode::invalid_argument, "y_d: d must be a positive divisor of n");
    TestVector f = select_test_vector(setup, setup.n);
    int64_t D = -7 * setup.n;
    int64_t sum = 0;
    for (const auto& c : setup.classes) sum += f(c.lambda) * genus_character(D, d, c.p);
    return sum;
}

int64_t y_d(int64_t n, int64_t d) { return y_d(gross_setup(n), d); }

namespace {

double lalg_or_zero(int64_t M) {
    if (root_number(M) != 1) return 0.0;
    Rational r = lalg_ord2(M).value;
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace

WaldspurgerReport verify_waldspurger(const GrossSetup& setup, int64_t d) {
    WaldspurgerReport rep;
    rep.n = setup.n;
    rep.d = d;
    rep.d_star = signed_discriminant(d);
    rep.partner = -7 * setup.n / rep.d_star;
    rep.delta = setup.delta;
    rep.admissible = is_admissible(setup.n, d);
    rep.kind = select_test_vector(setup, setup.n).kind;
    rep.y = y_d(setup, d);
    rep.lalg_d = lalg_or_zero(rep.d_star);
    rep.lalg_partner = lalg_or_zero(rep.partner);
    rep.rhs = std::ldexp(1.0, 2 + setup.delta) * rep.lalg_d * rep.lalg_partner;
    double lhs = static_cast<double>(rep.y * rep.y);
    rep.residual = std::fabs(lhs - rep.rhs);
    rep.pass = rep.residual < 1e-6 * std::max(1.0, lhs);
    return rep;
}

WaldspurgerReport verify_waldspurger(int64_t n, int64_t d) { return verify_waldspurger(gross_setup(n), d); }

}  // namespace twist49
