#include "twist49/tamagawa.hpp"

namespace twist49 {

namespace {

int ord2_small(int c) {
    int v = 0;
    while (c % 2 == 0) {
        c /= 2;
        ++v;
    }
    return v;
}

}  // namespace

TamagawaData tamagawa(TwistCurve curve, const FactoredTwist& M) {
    TamagawaData t;
    t.curve = curve;
    t.M = M.M;
    int64_t disc = field_discriminant(M.M);
    bool disc_even = disc % 2 == 0;
    t.c_map[7] = 2;
    if (curve == TwistCurve::A_twist) {
        t.c_infinity = 1;
        if (disc_even) t.c_map[2] = 4;
        for (int64_t q : M.inert_primes) t.c_map[q] = 2;
        for (int64_t p : M.split_primes) t.c_map[p] = 4;
    } else {
        t.c_infinity = 2;
        if (disc_even) {
            if (disc % 8 != 0) {
                t.c_map[2] = 2;
            } else {
                int64_t half = mod_floor(M.M / 2, 4);
                t.c_map[2] = half == 3 ? 2 : 4;
            }
        }
        for (int64_t q : M.inert_primes) t.c_map[q] = q % 4 == 1 ? 2 : 4;
        for (int64_t p : M.split_primes) t.c_map[p] = p % 4 == 3 ? 2 : 4;
    }
    t.tam_product_ord2 = ord2_small(t.c_infinity);
    for (auto& [p, c] : t.c_map) t.tam_product_ord2 += ord2_small(c);
    return t;
}

int a_of(const FactoredTwist& M) {
    int64_t prod = mod_floor(M.N_minus * M.R_minus, 4);
    int64_t minus_sign = mod_floor(-M.epsilon, 4);
    return prod == minus_sign ? 1 : 0;
}

int sha_ratio_ord2(const ShaRatioInputs& in) {
    if (in.rho < 0 || in.g < in.rho) fail(ErrorCode::invalid_argument, "sha_ratio_ord2: need 0 <= rho <= g");
    return a_of(in.M) + in.M.k_minus - in.M.r_minus + 2 * in.rho - in.g;
}

int bsd_predicted_ord2(const FactoredTwist& M, int sha2_ord) {
    if (M.M <= 0 || mod_floor(M.M, 4) != 1 || M.delta != 0)
        fail(ErrorCode::invalid_argument, "bsd_predicted_ord2: need M > 0, M = 1 mod 4, M odd");
    auto t = tamagawa(TwistCurve::A_twist, M);
    // torsion of order 2 contributes 2^-2
    return t.tam_product_ord2 - 2 + sha2_ord;
}

}  // namespace twist49
