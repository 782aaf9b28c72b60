#include "twist49/heegner.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "twist49/arith.hpp"
#include "twist49/lseries.hpp"

namespace twist49 {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0, 1);

// sum_{n >= 1} n^(k-1) q^n / (1 - q^n)
cplx lambert(cplx q, int k) {
    cplx sum = 0, qn = 1;
    for (int n = 1; n < 10000; ++n) {
        qn *= q;
        cplx term = std::pow(static_cast<double>(n), k - 1) * qn / (1.0 - qn);
        sum += term;
        if (std::abs(qn) * std::pow(static_cast<double>(n), k) < 1e-20) break;
    }
    return sum;
}

cplx nome(cplx tau) { return std::exp(2.0 * pi * I * tau); }

}  // namespace

cplx agm(cplx a, cplx b) {
    for (int iter = 0; iter < 100; ++iter) {
        cplx mean = (a + b) / 2.0;
        cplx root = std::sqrt(a * b);
        if (std::abs(mean - root) > std::abs(mean + root)) root = -root;
        a = mean;
        b = root;
        if (std::abs(a - b) <= 4e-15 * std::abs(a)) return (a + b) / 2.0;
    }
    fail(ErrorCode::indeterminate, "agm: no convergence");
}

LatticePeriods lattice_invariants(int64_t M) {
    if (M == 0 || !is_squarefree(M)) fail(ErrorCode::not_squarefree, "lattice_invariants: M must be squarefree");
    LatticePeriods L;
    L.M = M;
    double m = static_cast<double>(M);
    double c4 = 105.0 * m * m, c6 = 1323.0 * m * m * m;
    L.g2 = c4 / 12.0;
    L.g3 = c6 / 216.0;

    // 4x^3 - g2 x - g3 has one real root since the discriminant is negative
    double p = -L.g2 / 4.0, q = -L.g3 / 4.0;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc <= 0) fail(ErrorCode::indeterminate, "lattice_invariants: expected one real root");
    double sq = std::sqrt(disc);
    double real_root = std::cbrt(-q / 2.0 + sq) + std::cbrt(-q / 2.0 - sq);
    cplx rest = std::sqrt(cplx(real_root * real_root - 4.0 * (real_root * real_root + p)));
    L.e1 = real_root;
    L.e2 = (-real_root + rest) / 2.0;
    L.e3 = (-real_root - rest) / 2.0;

    L.omega1 = pi / agm(std::sqrt(L.e1 - L.e2), std::sqrt(L.e1 - L.e3));
    L.omega1 = std::abs(L.omega1.real());
    cplx cand_a = pi / agm(std::sqrt(L.e2 - L.e1), std::sqrt(L.e2 - L.e3));
    cplx cand_b = pi / agm(std::sqrt(L.e3 - L.e1), std::sqrt(L.e3 - L.e2));
    L.omega2 = (cand_a / L.omega1).imag() > 0 ? cand_a : cand_b;
    L.tau = L.omega2 / L.omega1;
    if (L.tau.imag() <= 0) fail(ErrorCode::indeterminate, "lattice_invariants: no period in the upper half-plane");
    // keep Re(tau) in [0, 1)
    double shift = std::floor(L.tau.real());
    L.omega2 -= shift * L.omega1;
    L.tau = L.omega2 / L.omega1;

    cplx qn = nome(L.tau);
    cplx E2 = 1.0 - 24.0 * lambert(qn, 2);
    L.eta1 = pi * pi / (3.0 * L.omega1) * E2;
    L.eta2 = (L.eta1 * L.omega2 - 2.0 * pi * I) / L.omega1;

    L.area = (std::conj(L.omega1) * L.omega2).imag();
    cplx det = L.omega1 * std::conj(L.omega2) - L.omega2 * std::conj(L.omega1);
    cplx inv_area = (L.omega1 * L.eta2 - L.omega2 * L.eta1) / det;
    L.areaA = 1.0 / inv_area;
    L.s2 = (L.eta1 - std::conj(L.omega1) * inv_area) / L.omega1;
    return L;
}

std::pair<cplx, cplx> lattice_g2_g3(const LatticePeriods& L) {
    cplx q = nome(L.tau);
    cplx E4 = 1.0 + 240.0 * lambert(q, 4);
    cplx E6 = 1.0 - 504.0 * lambert(q, 6);
    cplx scale = 2.0 * pi / L.omega1;
    return {std::pow(scale, 4) * E4 / 12.0, std::pow(scale, 6) * E6 / 216.0};
}

namespace {

struct CellSplit {
    cplx z0;
    double m = 0, n = 0;  // z = z0 + m omega1 + n omega2
};

CellSplit split(cplx z, const LatticePeriods& L) {
    cplx u = z / L.omega1;
    double t = u.imag() / L.tau.imag();
    double s = u.real() - t * L.tau.real();
    double n = std::round(t), m = std::round(s);
    return {z - m * L.omega1 - n * L.omega2, m, n};
}

void check_pole(cplx z0, const LatticePeriods& L) {
    if (std::abs(z0) < 1e-12 * std::abs(L.omega1)) fail(ErrorCode::pole, "lattice point");
}

template <typename F>
void over_series(cplx q, F&& body) {
    cplx qn = 1;
    for (int n = 1; n < 10000; ++n) {
        qn *= q;
        body(qn);
        if (std::abs(qn) < 1e-20) break;
    }
}

}  // namespace

cplx reduce_mod_lattice(cplx z, const LatticePeriods& L) { return split(z, L).z0; }

double distance_to_lattice(cplx z, const LatticePeriods& L) {
    cplx z0 = reduce_mod_lattice(z, L);
    double best = std::abs(z0);
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b) best = std::min(best, std::abs(z0 + double(a) * L.omega1 + double(b) * L.omega2));
    return best;
}

namespace {

// valid for |Im(z / omega1)| < Im(tau)
cplx zeta_series(cplx z, const LatticePeriods& L) {
    cplx w = std::exp(2.0 * pi * I * z / L.omega1);
    cplx inner = 0.5 * (w + 1.0) / (w - 1.0);
    over_series(nome(L.tau), [&](cplx qn) { inner += -qn * w / (1.0 - qn * w) + qn / w / (1.0 - qn / w); });
    return L.eta1 * z / L.omega1 + 2.0 * pi * I / L.omega1 * inner;
}

}  // namespace

std::pair<cplx, cplx> quasi_periods_by_series(const LatticePeriods& L) {
    cplx z = 0.1 * L.omega1 - 0.45 * L.omega2;
    cplx e1 = zeta_series(z + L.omega1, L) - zeta_series(z, L);
    cplx e2 = zeta_series(z + L.omega2, L) - zeta_series(z, L);
    return {e1, e2};
}

cplx weierstrass_zeta(cplx z, const LatticePeriods& L) {
    auto parts = split(z, L);
    check_pole(parts.z0, L);
    return zeta_series(parts.z0, L) + parts.m * L.eta1 + parts.n * L.eta2;
}

cplx weierstrass_p(cplx z, const LatticePeriods& L) {
    cplx z0 = split(z, L).z0;
    check_pole(z0, L);
    cplx w = std::exp(2.0 * pi * I * z0 / L.omega1);
    cplx inner = w / ((w - 1.0) * (w - 1.0));
    over_series(nome(L.tau), [&](cplx qn) {
        cplx x = qn * w, y = qn / w;
        inner += x / ((1.0 - x) * (1.0 - x)) + y / ((1.0 - y) * (1.0 - y));
    });
    cplx K = std::pow(2.0 * pi * I / L.omega1, 2);
    return -L.eta1 / L.omega1 + K * inner;
}

cplx weierstrass_p_prime(cplx z, const LatticePeriods& L) {
    cplx z0 = split(z, L).z0;
    check_pole(z0, L);
    cplx w = std::exp(2.0 * pi * I * z0 / L.omega1);
    cplx inner = -w * (w + 1.0) / std::pow(w - 1.0, 3);
    over_series(nome(L.tau), [&](cplx qn) {
        cplx x = qn * w, y = qn / w;
        inner += x * (1.0 + x) / std::pow(1.0 - x, 3) - y * (1.0 + y) / std::pow(1.0 - y, 3);
    });
    return std::pow(2.0 * pi * I / L.omega1, 3) * inner;
}

cplx e1star(cplx z, const LatticePeriods& L) {
    return weierstrass_zeta(z, L) - z * L.s2 - std::conj(z) / L.areaA;
}

double lemma_m3_residual(cplx z1, cplx z2, const LatticePeriods& L) {
    double tol = 1e-9 * std::abs(L.omega1);
    if (distance_to_lattice(z1 - z2, L) < tol || distance_to_lattice(z1 + z2, L) < tol)
        fail(ErrorCode::pole, "lemma_m3: z1 = +-z2 mod lattice");
    cplx lhs = e1star(z1 + z2, L) + e1star(z1 - z2, L) - 2.0 * e1star(z1, L);
    cplx rhs = weierstrass_p_prime(z1, L) / (weierstrass_p(z1, L) - weierstrass_p(z2, L));
    return std::abs(lhs - rhs);
}

CMPointOrbit cm_points(int64_t K_disc, int64_t c) {
    if (K_disc >= 0 || !is_fundamental(K_disc)) fail(ErrorCode::invalid_argument, "cm_points: need a negative fundamental discriminant");
    if (kronecker(K_disc, 7) != 1) fail(ErrorCode::invalid_argument, "cm_points: 7 is not split in K");
    if (c < 1 || gcd(c, 7 * K_disc) != 1) fail(ErrorCode::invalid_argument, "cm_points: conductor must be prime to 7 disc(K)");
    int64_t D = c * c * K_disc;
    CMPointOrbit orbit;
    orbit.K_disc = K_disc;
    orbit.conductor = c;
    orbit.beta = -1;
    for (int64_t b = 0; b < 98; ++b)
        if (mod_floor(b * b - D, 196) == 0) {
            orbit.beta = b;
            break;
        }
    if (orbit.beta < 0) fail(ErrorCode::indeterminate, "cm_points: D is not a square mod 196");

    auto classes = reduced_forms(D);
    orbit.ring_class_order = static_cast<int64_t>(classes.size());
    if (orbit.ring_class_order > 200) fail(ErrorCode::out_of_range, "cm_points: ring class number above 200");
    std::map<QuadForm, CMPoint> found;
    for (int64_t a = 1; found.size() < classes.size(); ++a) {
        if (a > 100000) fail(ErrorCode::indeterminate, "cm_points: class search exhausted");
        int64_t A = 49 * a;
        for (int64_t t = 0; t < a; ++t) {
            int64_t b = orbit.beta + 98 * t;
            if (b > A) b -= 2 * A;
            if (mod_floor(b * b - D, 4 * A) != 0) continue;
            int64_t C = (b * b - D) / (4 * A);
            if (gcd(gcd(A, b), C) != 1 || gcd(gcd(a, b), 49 * C) != 1) continue;
            QuadForm f{A, b, C};
            QuadForm key = reduce(f);
            if (found.count(key)) continue;
            cplx tau = (cplx(-static_cast<double>(b), 0) + I * std::sqrt(static_cast<double>(-D))) / (2.0 * A);
            found.emplace(key, CMPoint{f, tau});
        }
    }
    for (const auto& cls : classes) orbit.points.push_back(found.at(cls));
    return orbit;
}

namespace {

const LatticePeriods& lattice_A() {
    static const LatticePeriods L = lattice_invariants(1);
    return L;
}

}  // namespace

cplx param_series(cplx tau) {
    if (tau.imag() < 1e-3) fail(ErrorCode::out_of_range, "param_eval: Im(tau) below 1e-3");
    double absq = std::exp(-2.0 * pi * tau.imag());
    // tail <= 2 |q|^(T+1) / (1 - |q|)
    int64_t T = static_cast<int64_t>(std::ceil(std::log(1e-13 * (1 - absq) / 2.0) / std::log(absq)));
    if (T > 20000000) fail(ErrorCode::out_of_range, "param_eval: tau too close to the real axis");
    auto table = an_table(T);
    const auto& a = *table;
    cplx q = nome(tau), qn = 1, sum = 0;
    for (int64_t n = 1; n <= T; ++n) {
        qn *= q;
        if (a[n] != 0) sum += static_cast<double>(a[n]) / static_cast<double>(n) * qn;
    }
    return sum;
}

cplx param_eval(cplx tau) { return reduce_mod_lattice(param_series(tau), lattice_A()); }

double torsion_distance(cplx z, const LatticePeriods& L) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 8; ++s)
        for (int t = 0; t < 8; ++t) {
            cplx grid = (s / 8.0) * L.omega1 + (t / 8.0) * L.omega2;
            best = std::min(best, distance_to_lattice(z - grid, L));
        }
    return best / std::abs(L.omega1);
}

bool is_torsion_numeric(cplx z, const LatticePeriods& L) { return torsion_distance(z, L) < 1e-6; }

TracePoint heegner_trace(int64_t l0, int64_t R, int64_t N, bool twisted) {
    if (l0 < 3 || !is_prime(l0) || l0 % 4 != 3) fail(ErrorCode::invalid_argument, "heegner_trace: l0 must be a prime = 3 mod 4");
    for (int64_t q : prime_factors(R))
        if (kronecker(-l0, q) != -1) fail(ErrorCode::invalid_argument, "heegner_trace: primes of R must be inert in Q(sqrt(-l0))");
    // the points live over K = Q(sqrt(-l0 N)) with conductor R
    int64_t K_disc = -l0 * N;
    const auto& L = lattice_A();
    auto orbit = cm_points(K_disc, R);
    int64_t D = K_disc * R * R;

    TracePoint out;
    out.l0 = l0;
    out.R = R;
    out.N = N;
    out.twisted = twisted;
    cplx sum = 0;
    for (const auto& pt : orbit.points) {
        int chi = 1;
        if (twisted) {
            auto rep = prime_representative(reduce(pt.form), D);
            for (int64_t q : prime_factors(R)) chi *= kronecker(signed_discriminant(q), rep.p);
        }
        sum += static_cast<double>(chi) * param_series(pt.tau);
    }
    out.z = reduce_mod_lattice(sum, L);
    out.torsion_distance = torsion_distance(out.z, L);
    out.torsion_flag = out.torsion_distance < 1e-6;
    out.conj_sum = reduce_mod_lattice(std::conj(out.z) + out.z, L);
    out.minus_eigen_flag = is_torsion_numeric(out.conj_sum, L);
    if (!out.torsion_flag) {
        cplx x = weierstrass_p(out.z, L) + 0.25;
        cplx y = (weierstrass_p_prime(out.z, L) - x) / 2.0;
        out.xy = std::make_pair(x, y);
    }
    return out;
}

cplx full_trace(int64_t K_disc, int64_t c) {
    auto orbit = cm_points(K_disc, c);
    cplx sum = 0;
    for (const auto& pt : orbit.points) sum += param_series(pt.tau);
    return reduce_mod_lattice(sum, lattice_A());
}

}  // namespace twist49
