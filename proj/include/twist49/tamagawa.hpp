#pragma once

#include <cstdint>
#include <map>

#include "twist49/arith.hpp"

namespace twist49 {

enum class TwistCurve { A_twist, Aprime_twist };

struct TamagawaData {
    TwistCurve curve = TwistCurve::A_twist;
    int64_t M = 1;
    std::map<int64_t, int> c_map;  // bad prime -> c_p
    int c_infinity = 1;
    int tam_product_ord2 = 0;      // ord_2 of c_infinity * prod c_p
};

// M squarefree; 7 | M is not allowed.
TamagawaData tamagawa(TwistCurve curve, const FactoredTwist& M);

// 1 iff N_- R_- = -sign(M) mod 4.
int a_of(const FactoredTwist& M);

struct ShaRatioInputs {
    FactoredTwist M;
    int rho = 0;
    int g = 0;
};

int sha_ratio_ord2(const ShaRatioInputs& in);

// ord_2 of the BSD leading term for M > 0, M = 1 mod 4, gcd(M, 14) = 1.
int bsd_predicted_ord2(const FactoredTwist& M, int sha2_ord);

}  // namespace twist49
