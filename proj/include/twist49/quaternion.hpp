#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace twist49 {

// Element of the maximal order of B = (-1, -7 / Q), coordinates in the basis
// {1, i, (i+j)/2, (1+k)/2}.
struct OrderElement {
    std::array<int64_t, 4> coords{};

    static OrderElement one() { return {{1, 0, 0, 0}}; }
    static OrderElement unit_i() { return {{0, 1, 0, 0}}; }
    static OrderElement unit_j() { return {{0, -1, 2, 0}}; }
    static OrderElement unit_k() { return {{-1, 0, 0, 2}}; }

    // Doubled rational coordinates (2x0, 2x1, 2x2, 2x3) on {1, i, j, k}.
    std::array<int64_t, 4> doubled() const;
    static OrderElement from_doubled(const std::array<int64_t, 4>& X);  // throws if not in the order
    static bool doubled_in_order(const std::array<int64_t, 4>& X);

    int64_t nrd() const;
    int64_t trd() const;
    OrderElement conj() const;

    bool operator==(const OrderElement&) const = default;
};

OrderElement operator*(const OrderElement& x, const OrderElement& y);
OrderElement operator+(const OrderElement& x, const OrderElement& y);
OrderElement operator-(const OrderElement& x, const OrderElement& y);
OrderElement scalar(int64_t m);

// x / m if it lies in the order.
bool divides_exactly(const OrderElement& x, int64_t m, OrderElement& out);

// All elements of reduced norm m.
std::vector<OrderElement> elements_of_norm(int64_t m);

// F_49 = F_7[ibar], ibar^2 = -1.
struct F49 {
    int x = 0, y = 0;  // x + y ibar
    bool operator==(const F49&) const = default;
};

F49 f49_mul(F49 u, F49 v);
F49 f49_pow(F49 u, int e);

// Reduction modulo the two-sided ideal generated by j.
F49 reduce_mod_j(const OrderElement& t);

// First lexicographic x + y ibar whose class generates F49^x / F7^x.
F49 f49_generator();
// Discrete log in F49^x / F7^x (cyclic of order 8) w.r.t. f49_generator(); u != 0.
int f49_class_log(F49 u);

}  // namespace twist49
