#pragma once

#include <cmath>

namespace twist49::detail {

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DDouble {
    double hi = 0;
    double lo = 0;

    DDouble() = default;
    DDouble(double x) : hi(x) {}
    DDouble(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

inline DDouble quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DDouble two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DDouble two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DDouble operator+(DDouble a, DDouble b) {
    DDouble s = two_sum(a.hi, b.hi);
    DDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DDouble operator-(DDouble a) { return {-a.hi, -a.lo}; }
inline DDouble operator-(DDouble a, DDouble b) { return a + (-b); }

inline DDouble operator*(DDouble a, DDouble b) {
    DDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DDouble operator/(DDouble a, DDouble b) {
    double q1 = a.hi / b.hi;
    DDouble r = a - b * DDouble(q1);
    double q2 = r.hi / b.hi;
    r = r - b * DDouble(q2);
    double q3 = r.hi / b.hi;
    return DDouble(quick_two_sum(q1, q2)) + DDouble(q3);
}

inline DDouble dd_sqrt(DDouble a) {
    if (a.hi <= 0) return {};
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    DDouble diff = a - two_prod(ax, ax);
    return two_sum(ax, diff.hi * (x * 0.5));
}

inline const DDouble dd_pi{3.141592653589793116e+00, 1.224646799147353207e-16};

// exp(x) for |x| <= 1 by Taylor series.
inline DDouble dd_exp_small(DDouble x) {
    DDouble sum(1.0), term(1.0);
    for (int k = 1; k < 40; ++k) {
        term = term * x / DDouble(static_cast<double>(k));
        sum = sum + term;
        if (std::fabs(term.hi) < 1e-34) break;
    }
    return sum;
}

}  // namespace twist49::detail
