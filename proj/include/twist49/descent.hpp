#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twist49/arith.hpp"

namespace twist49 {

enum class IsogenySide { phi, phihat };

struct SelmerSet {
    IsogenySide kind = IsogenySide::phi;
    std::vector<int64_t> members;  // canonical squarefree representatives, ascending
    int dim = 0;
    int quotient_dim = 0;
    bool from_oracle = false;

    bool contains(int64_t d) const;
};

// Signed squarefree products of primes dividing 14M, ascending.
std::vector<int64_t> q2m(const FactoredTwist& M);

bool is_confucian(int64_t d, const FactoredTwist& M);

SelmerSet selmer_phi(const FactoredTwist& M);
SelmerSet selmer_phihat(const FactoredTwist& M);

// Place encoding: 0 is the real place, otherwise a prime.
constexpr int64_t real_place = 0;

// Quartic model Y^2 = c4 u^4 + c2 u^2 + c0 of the torsor (z = d u, Y = d w).
std::array<int64_t, 3> torsor_quartic(IsogenySide kind, int64_t d, int64_t M);

bool local_oracle(IsogenySide kind, int64_t d, const FactoredTwist& M, int64_t place);
// Conjunction over the real place and every prime dividing 14M.
bool everywhere_locally_soluble(IsogenySide kind, int64_t d, const FactoredTwist& M);
SelmerSet selmer_by_oracle(IsogenySide kind, const FactoredTwist& M);

struct ConsistencyCheck {
    std::string name;
    bool consistent = true;
    std::string detail;
};

struct Selmer2Report {
    int dim_phi_quot = 0;
    int dim_phihat = 0;
    bool even = true;
    int lo = 0, hi = 0;
    std::optional<int> dim2;
    std::vector<ConsistencyCheck> consistency;
};

Selmer2Report selmer2_report(const FactoredTwist& M);

}  // namespace twist49
