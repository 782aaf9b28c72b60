#include "twist49/quaternion.hpp"

#include "twist49/arith.hpp"

namespace twist49 {

std::array<int64_t, 4> OrderElement::doubled() const {
    auto [a, b, c, d] = coords;
    return {2 * a + d, 2 * b + c, c, d};
}

bool OrderElement::doubled_in_order(const std::array<int64_t, 4>& X) {
    return mod_floor(X[0] - X[3], 2) == 0 && mod_floor(X[1] - X[2], 2) == 0;
}

OrderElement OrderElement::from_doubled(const std::array<int64_t, 4>& X) {
    if (!doubled_in_order(X)) fail(ErrorCode::invalid_argument, "from_doubled: not in the maximal order");
    return {{(X[0] - X[3]) / 2, (X[1] - X[2]) / 2, X[2], X[3]}};
}

int64_t OrderElement::nrd() const {
    auto X = doubled();
    return (X[0] * X[0] + X[1] * X[1] + 7 * X[2] * X[2] + 7 * X[3] * X[3]) / 4;
}

int64_t OrderElement::trd() const { return doubled()[0]; }

OrderElement OrderElement::conj() const {
    auto X = doubled();
    return from_doubled({X[0], -X[1], -X[2], -X[3]});
}

OrderElement operator*(const OrderElement& x, const OrderElement& y) {
    auto a = x.doubled();
    auto b = y.doubled();
    // i^2 = -1, j^2 = -7, ij = k
    std::array<int64_t, 4> p{
        a[0] * b[0] - a[1] * b[1] - 7 * a[2] * b[2] - 7 * a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + 7 * a[2] * b[3] - 7 * a[3] * b[2],
        a[0] * b[2] + a[2] * b[0] - a[1] * b[3] + a[3] * b[1],
        a[0] * b[3] + a[3] * b[0] + a[1] * b[2] - a[2] * b[1],
    };
    for (auto& v : p) v /= 2;
    return OrderElement::from_doubled(p);
}

OrderElement operator+(const OrderElement& x, const OrderElement& y) {
    OrderElement r;
    for (int s = 0; s < 4; ++s) r.coords[s] = x.coords[s] + y.coords[s];
    return r;
}

OrderElement operator-(const OrderElement& x, const OrderElement& y) {
    OrderElement r;
    for (int s = 0; s < 4; ++s) r.coords[s] = x.coords[s] - y.coords[s];
    return r;
}

OrderElement scalar(int64_t m) { return {{m, 0, 0, 0}}; }

bool divides_exactly(const OrderElement& x, int64_t m, OrderElement& out) {
    auto X = x.doubled();
    for (auto& v : X) {
        if (v % m != 0) return false;
        v /= m;
    }
    if (!OrderElement::doubled_in_order(X)) return false;
    out = OrderElement::from_doubled(X);
    return true;
}

std::vector<OrderElement> elements_of_norm(int64_t m) {
    std::vector<OrderElement> out;
    int64_t four_m = 4 * m;
    int64_t bound = isqrt(four_m / 7) + 1;
    for (int64_t X2 = -bound; X2 <= bound; ++X2) {
        for (int64_t X3 = -bound; X3 <= bound; ++X3) {
            int64_t rest = four_m - 7 * (X2 * X2 + X3 * X3);
            if (rest < 0) continue;
            int64_t b0 = isqrt(rest);
            for (int64_t X0 = -b0; X0 <= b0; ++X0) {
                if (mod_floor(X0 - X3, 2) != 0) continue;
                int64_t r1 = rest - X0 * X0;
                if (!is_square(r1)) continue;
                int64_t X1 = isqrt(r1);
                for (int64_t s : {X1, -X1}) {
                    if (mod_floor(s - X2, 2) != 0) continue;
                    out.push_back(OrderElement::from_doubled({X0, s, X2, X3}));
                    if (X1 == 0) break;
                }
            }
        }
    }
    return out;
}

F49 f49_mul(F49 u, F49 v) {
    return {static_cast<int>(mod_floor(u.x * v.x - u.y * v.y, 7)), static_cast<int>(mod_floor(u.x * v.y + u.y * v.x, 7))};
}

F49 f49_pow(F49 u, int e) {
    F49 r{1, 0};
    for (int s = 0; s < e; ++s) r = f49_mul(r, u);
    return r;
}

F49 reduce_mod_j(const OrderElement& t) {
    auto [a, b, c, d] = t.coords;
    return {static_cast<int>(mod_floor(a + 4 * d, 7)), static_cast<int>(mod_floor(b + 4 * c, 7))};
}

F49 f49_generator() {
    for (int x = 0; x < 7; ++x)
        for (int y = 0; y < 7; ++y) {
            if (x == 0 && y == 0) continue;
            // the sixth power lands in mu_8; a generator has order exactly 8
            F49 g6 = f49_pow({x, y}, 6);
            if (!(f49_pow(g6, 4) == F49{1, 0})) return {x, y};
        }
    fail(ErrorCode::indeterminate, "f49_generator: none found");
}

int f49_class_log(F49 u) {
    if (u.x == 0 && u.y == 0) fail(ErrorCode::invalid_argument, "f49_class_log: zero");
    static const F49 base = f49_pow(f49_generator(), 6);
    F49 target = f49_pow(u, 6);
    F49 cur{1, 0};
    for (int k = 0; k < 8; ++k) {
        if (cur == target) return k;
        cur = f49_mul(cur, base);
    }
    fail(ErrorCode::indeterminate, "f49_class_log: not in mu_8");
}

}  // namespace twist49
