#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace twist49 {

struct QuadForm {
    int64_t a = 1, b = 1, c = 1;

    int64_t disc() const { return b * b - 4 * a * c; }
    int64_t eval(int64_t x, int64_t y) const { return a * x * x + b * x * y + c * y * y; }
    bool is_reduced() const;
    auto operator<=>(const QuadForm&) const = default;
};

QuadForm reduce(QuadForm f);
QuadForm identity_form(int64_t D);
QuadForm inverse(const QuadForm& f);
QuadForm compose(const QuadForm& f, const QuadForm& g);
QuadForm power(const QuadForm& f, int64_t e);

// Primitive reduced forms of discriminant D, sorted by (a, b).
std::vector<QuadForm> reduced_forms(int64_t D);

void check_discriminant(int64_t D);
bool is_fundamental(int64_t D);

struct ClassGroupData {
    int64_t disc = 0;
    int64_t h = 0;
    std::vector<QuadForm> elements;     // reduced forms; elements[0] is the identity
    std::vector<int64_t> orders;        // order of each element
    std::vector<int64_t> cycle_structure;  // invariant factors d1 | d2 | ...
    std::vector<int64_t> two_sylow;     // 2-power invariant factors
    int h2 = 0, h4 = 0, h8 = 0;

    int index_of(const QuadForm& f) const;  // position of reduce(f) in elements
    bool has_order_four() const;

private:
    std::map<QuadForm, int> index_;
    friend ClassGroupData class_group(int64_t D);
};

ClassGroupData class_group(int64_t D);

struct RedeiMatrix {
    std::vector<int64_t> primes;        // prime discriminants p_i*, 2-part last
    std::vector<std::vector<int>> entries;  // [i][j] = [(p_j* / p_i)] off the diagonal; rows sum to 0
    int rank() const;
};

struct RedeiRanks {
    int h2 = 0;
    int h4 = 0;
    RedeiMatrix matrix;
};

// Prime discriminant factorisation D = p_1* ... p_t* of a fundamental D.
std::vector<int64_t> prime_discriminants(int64_t D);
RedeiRanks redei_ranks(int64_t D);

struct EightRankCertificate {
    int64_t p = 0;
    int value = 0;
    bool from_triple = false;
    int64_t x = 0, y = 0, z = 0;  // z^2 = p x^2 + 7 y^2 when from_triple
};

// Criterion route; cross-checked against the triple search (mismatch throws).
EightRankCertificate h8_for_7p(int64_t p);
// Triple-search route alone.
EightRankCertificate h8_for_7p_by_triples(int64_t p);

bool has_order_four(int64_t D);

struct PrimeRepresentative {
    int64_t p = 0;
    QuadForm form;  // equivalent form (p, b, c)
};

// Smallest prime represented by f and coprime to `avoid`, with the
// equivalent form having leading coefficient p.
PrimeRepresentative prime_representative(const QuadForm& f, int64_t avoid, int64_t skip_below = 0);

// d*: (-1)^((d-1)/2) d for odd d > 0.
int64_t signed_discriminant(int64_t d);

// Genus character of K(sqrt(d*))/K on the class of a form of prime norm q.
int genus_character(int64_t D, int64_t d, int64_t q);
// Same, on an arbitrary class (a prime representative is drawn).
int genus_character(int64_t D, int64_t d, const QuadForm& f);

}  // namespace twist49
