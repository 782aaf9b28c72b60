#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "twist49/classgroup.hpp"

namespace twist49 {

using cplx = std::complex<double>;

struct LatticePeriods {
    int64_t M = 1;        // twist label; 1 is A itself
    double g2 = 0, g3 = 0;
    cplx e1, e2, e3;      // e1 real
    cplx omega1, omega2;  // omega1 real, Im(omega2 / omega1) > 0
    cplx tau;
    cplx eta1, eta2;
    cplx s2;
    cplx areaA;
    double area = 0;
};

cplx agm(cplx a, cplx b);

// Weierstrass data of y^2 + xy = x^3 - x^2 - 2x - 1 twisted by M, from c4 = 105 M^2, c6 = 1323 M^3.
LatticePeriods lattice_invariants(int64_t M = 1);

// eta_k as zeta(z + omega_k) - zeta(z) from the unreduced series.
std::pair<cplx, cplx> quasi_periods_by_series(const LatticePeriods& L);

// g2, g3 recomputed from the lattice by Eisenstein q-series.
std::pair<cplx, cplx> lattice_g2_g3(const LatticePeriods& L);

// z reduced into the cell {s omega1 + t omega2 : s, t in [-1/2, 1/2)}.
cplx reduce_mod_lattice(cplx z, const LatticePeriods& L);
double distance_to_lattice(cplx z, const LatticePeriods& L);

cplx weierstrass_zeta(cplx z, const LatticePeriods& L);
cplx weierstrass_p(cplx z, const LatticePeriods& L);
cplx weierstrass_p_prime(cplx z, const LatticePeriods& L);

// zeta(z) - z s2 - conj(z) / areaA.
cplx e1star(cplx z, const LatticePeriods& L);

// |E1*(z1+z2) + E1*(z1-z2) - 2E1*(z1) - p'(z1)/(p(z1) - p(z2))|.
double lemma_m3_residual(cplx z1, cplx z2, const LatticePeriods& L);

struct CMPoint {
    QuadForm form;  // [A, B, C] with 49 | A
    cplx tau;
};

struct CMPointOrbit {
    int64_t K_disc = 0;
    int64_t conductor = 1;
    int64_t beta = 0;  // B = beta mod 98
    std::vector<CMPoint> points;
    int64_t ring_class_order = 0;
};

CMPointOrbit cm_points(int64_t K_disc, int64_t c);

// sum a_n / n q^n, reduced mod the lattice of A.
cplx param_eval(cplx tau);
// Same without reduction.
cplx param_series(cplx tau);

bool is_torsion_numeric(cplx z, const LatticePeriods& L);
// Distance from z to the denominator-8 grid, in units of |omega1|.
double torsion_distance(cplx z, const LatticePeriods& L);

struct TracePoint {
    int64_t l0 = 0, R = 1, N = 1;
    bool twisted = false;  // character chi_R applied
    cplx z;
    bool torsion_flag = false;
    bool minus_eigen_flag = false;
    double torsion_distance = 0;
    cplx conj_sum;         // conj(z) + z mod lattice
    std::optional<std::pair<cplx, cplx>> xy;  // point on the minimal model when non-torsion
};

TracePoint heegner_trace(int64_t l0, int64_t R, int64_t N, bool twisted);

// Sum of every point of the conductor-c orbit.
cplx full_trace(int64_t K_disc, int64_t c);

}  // namespace twist49
