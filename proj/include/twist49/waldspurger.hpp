#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "twist49/classgroup.hpp"
#include "twist49/quaternion.hpp"

namespace twist49 {

enum class TestVectorKind { f0, f1, f0_minus_f1, f0_plus_f1 };

struct TestVector {
    TestVectorKind kind = TestVectorKind::f0;
    std::array<int, 4> values{};  // indexed by the label of Lambda = Z/4
    int pairing_norm = 2;

    int operator()(int lambda) const { return values[((lambda % 4) + 4) % 4]; }
};

TestVector make_test_vector(TestVectorKind kind);
std::string to_string(TestVectorKind kind);

// Order of a label in Z/4.
int lambda_order(int lambda);

struct IdealClassEntry {
    QuadForm form;       // reduced form of discriminant -7n
    int64_t p = 0;       // prime norm of the representative ideal (p, m + sqrt(-7n))
    int64_t m = 0;
    OrderElement t;      // Nrd(t) = p with m + xi = u t
    int lambda = 0;
};

struct GrossSetup {
    int64_t n = 1;
    OrderElement xi;           // embedding used for the assignment
    OrderElement xi_initial;   // embedding found by the search
    bool switched = false;
    OrderElement switcher;     // xi = s xi_initial s^-1 when switched
    int delta = 0;
    int omega = 0;             // class of j^-1 xi in Lambda
    std::vector<IdealClassEntry> classes;
};

// Trace-zero xi with xi^2 = -7n and (1 + xi)/2 in the order.
OrderElement find_embedding(int64_t n);

// Lambda class of j^-1 xi; the involution lambda -> omega - lambda is induced by xi.
int embedding_omega(const OrderElement& xi);

// t of norm p dividing m + xi on the right; lambda = class of t.
int class_to_lambda(const OrderElement& xi, int64_t p, int64_t m, OrderElement* witness = nullptr);

// orient = false keeps the embedding found by the search.
GrossSetup gross_setup(int64_t n, bool orient = true);

// chi_7(varpi) for the genus character attached to d.
int chi7_of(int64_t d);
TestVector select_test_vector(int delta, int chi7);
TestVector select_test_vector(const GrossSetup& setup, int64_t d);

// kronecker(d*, 7) = kronecker(n*, 7).
bool is_admissible(int64_t n, int64_t d);

// Character sum with the vector selected for chi^(n).
int64_t y_d(const GrossSetup& setup, int64_t d);
int64_t y_d(int64_t n, int64_t d);

struct WaldspurgerReport {
    int64_t n = 0, d = 0;
    int64_t d_star = 0;
    int64_t partner = 0;  // -7n / d*
    int delta = 0;
    bool admissible = false;
    TestVectorKind kind = TestVectorKind::f0;
    int64_t y = 0;
    double lalg_d = 0, lalg_partner = 0;
    double rhs = 0;
    double residual = 0;
    bool pass = false;
};

WaldspurgerReport verify_waldspurger(const GrossSetup& setup, int64_t d);
WaldspurgerReport verify_waldspurger(int64_t n, int64_t d);

}  // namespace twist49
