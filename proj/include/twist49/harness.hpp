#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twist49 {

enum class Family { main3, bw, main2, s0, descent_oracle, waldspurger, heegner };

std::optional<Family> parse_family(const std::string& tag);
std::string to_string(Family family);

struct Instance {
    Family family = Family::main3;
    int64_t M = 1;
    int64_t l0 = 0;             // main2 only
    std::vector<int64_t> q;     // primes of R (inert in F, = 1 mod 4)
    std::vector<int64_t> p;     // primes of N
    std::string label;
};

// Products up to `bound` in absolute value; every instance satisfies its family predicate.
std::vector<Instance> scan(Family family, int64_t bound);

// Independent recheck of the family predicate.
bool eligible(const Instance& inst);

struct CheckRecord {
    std::string family;
    std::string label;
    std::string claim;
    std::string measured;
    std::string expected;
    double tol = 0;
    bool pass = false;
};

struct VerifyOptions {
    int64_t bound = 0;
    int jobs = 1;
    std::vector<int64_t> labels;  // explicit instances (waldspurger n values)
};

// Records follow the canonical scan order, whatever the number of jobs.
std::vector<CheckRecord> verify(Family family, const VerifyOptions& options);

}  // namespace twist49
