#include "twist49/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "twist49/arith.hpp"
#include "twist49/classgroup.hpp"
#include "twist49/descent.hpp"
#include "twist49/heegner.hpp"
#include "twist49/lseries.hpp"
#include "twist49/tamagawa.hpp"
#include "twist49/waldspurger.hpp"

namespace twist49 {

namespace {

const std::map<std::string, Family>& family_names() {
    static const std::map<std::string, Family> names{
        {"main3", Family::main3},   {"ii", Family::main3},
        {"bw", Family::bw},         {"main4", Family::bw},         {"main4/bw", Family::bw},
        {"main2", Family::main2},   {"mainf", Family::main2},      {"main2/mainf", Family::main2},
        {"s0", Family::s0},         {"descent_oracle", Family::descent_oracle},
        {"waldspurger", Family::waldspurger}, {"heegner", Family::heegner},
    };
    return names;
}

std::string join(const std::vector<int64_t>& xs) {
    std::ostringstream out;
    out << '[';
    for (size_t s = 0; s < xs.size(); ++s) out << (s ? "," : "") << xs[s];
    out << ']';
    return out.str();
}

int64_t product(const std::vector<int64_t>& xs) {
    int64_t r = 1;
    for (int64_t x : xs) r *= x;
    return r;
}

bool is_eligible_q(int64_t q) { return classify_prime(q).eligible_q; }
bool is_eligible_p(int64_t p) { return classify_prime(p).eligible_p4; }

// All subsets (ascending) of `pool` whose product is <= bound and which satisfy `ok` elementwise
// against the members already chosen.
void subsets(const std::vector<int64_t>& pool, int64_t bound, size_t start, std::vector<int64_t>& chosen,
             int64_t prod, const std::function<bool(int64_t, const std::vector<int64_t>&)>& ok,
             const std::function<void(const std::vector<int64_t>&, int64_t)>& emit) {
    emit(chosen, prod);
    for (size_t s = start; s < pool.size(); ++s) {
        if (prod > bound / pool[s]) break;
        if (!ok(pool[s], chosen)) continue;
        chosen.push_back(pool[s]);
        subsets(pool, bound, s + 1, chosen, prod * pool[s], ok, emit);
        chosen.pop_back();
    }
}

bool compatible(const std::vector<int64_t>& qs, const std::vector<int64_t>& ps) {
    for (int64_t q : qs)
        for (int64_t p : ps)
            if (kronecker(q, p) != 1) return false;
    return true;
}

std::string twist_label(int64_t M) { return "M=" + std::to_string(M); }

}  // namespace

std::optional<Family> parse_family(const std::string& tag) {
    auto it = family_names().find(tag);
    if (it == family_names().end()) return std::nullopt;
    return it->second;
}

std::string to_string(Family family) {
    switch (family) {
        case Family::main3: return "main3";
        case Family::bw: return "main4/bw";
        case Family::main2: return "main2/mainf";
        case Family::s0: return "s0";
        case Family::descent_oracle: return "descent_oracle";
        case Family::waldspurger: return "waldspurger";
        case Family::heegner: return "heegner";
    }
    return "?";
}

std::vector<Instance> scan(Family family, int64_t bound) {
    std::vector<Instance> out;
    if (bound < 1) return out;
    auto primes = primes_up_to(bound);
    std::vector<int64_t> qpool, ppool;
    for (int64_t p : primes) {
        if (is_eligible_q(p)) qpool.push_back(p);
        if (is_eligible_p(p)) ppool.push_back(p);
    }
    auto any = [](int64_t, const std::vector<int64_t>&) { return true; };
    std::vector<int64_t> chosen;

    switch (family) {
        case Family::main3:
            subsets(qpool, bound, 0, chosen, 1, any, [&](const std::vector<int64_t>& qs, int64_t R) {
                out.push_back({family, R, 0, qs, {}, twist_label(R)});
            });
            break;
        case Family::bw:
            subsets(ppool, bound, 0, chosen, 1, any, [&](const std::vector<int64_t>& ps, int64_t N) {
                if (ps.empty()) return;
                std::vector<int64_t> qchosen;
                auto ok = [&](int64_t q, const std::vector<int64_t>&) { return compatible({q}, ps); };
                subsets(qpool, bound / N, 0, qchosen, 1, ok, [&](const std::vector<int64_t>& qs, int64_t R) {
                    out.push_back({family, R * N, 0, qs, ps, twist_label(R * N)});
                });
            });
            break;
        case Family::main2:
        case Family::heegner:
            for (int64_t l0 : primes) {
                if (l0 <= 3 || l0 % 4 != 3 || kronecker(-7, l0) != -1) continue;
                std::vector<int64_t> qs_l0;
                for (int64_t q : qpool)
                    if (kronecker(-l0, q) == -1) qs_l0.push_back(q);
                int64_t room = bound / l0;
                subsets(qs_l0, room, 0, chosen, 1, any, [&](const std::vector<int64_t>& qs, int64_t R) {
                    std::vector<int64_t> pchosen;
                    auto ok = [&](int64_t p, const std::vector<int64_t>&) { return compatible(qs, {p}); };
                    subsets(ppool, room / R, 0, pchosen, 1, ok, [&](const std::vector<int64_t>& ps, int64_t N) {
                        if (family == Family::heegner && N != 1) return;
                        if (has_order_four(-l0 * N)) return;
                        if (family == Family::heegner && (R + 1) * class_group(-l0).h > 200) return;
                        std::string label = "l0=" + std::to_string(l0) + ",R=" + std::to_string(R) + ",N=" + std::to_string(N);
                        out.push_back({family, -l0 * R * N, l0, qs, ps, label});
                    });
                });
            }
            break;
        case Family::s0:
            for (int64_t p : primes)
                if (p % 4 == 1 && kronecker(p, 7) == 1) out.push_back({family, p, 0, {}, {p}, twist_label(p)});
            break;
        case Family::descent_oracle:
            for (int64_t M = -bound; M <= bound; ++M)
                if (M != 0 && M % 7 != 0 && is_squarefree(M)) out.push_back({family, M, 0, {}, {}, twist_label(M)});
            break;
        case Family::waldspurger:
            for (int64_t n = 1; n <= bound; n += 4)
                if (n % 7 != 0 && is_squarefree(n)) out.push_back({family, n, 0, {}, {}, "n=" + std::to_string(n)});
            break;
    }
    std::sort(out.begin(), out.end(), [](const Instance& a, const Instance& b) {
        return std::make_pair(std::llabs(a.M), a.label) < std::make_pair(std::llabs(b.M), b.label);
    });
    return out;
}

bool eligible(const Instance& inst) {
    auto q_ok = [](int64_t q) { return is_prime(q) && q % 4 == 1 && kronecker(-7, q) == -1; };
    auto p_ok = [](int64_t p) { return is_prime(p) && p % 4 == 1 && kronecker(-7, p) == 1 && quartic_is_one(-7, p); };
    switch (inst.family) {
        case Family::main3:
            return std::all_of(inst.q.begin(), inst.q.end(), q_ok) && product(inst.q) == inst.M && is_squarefree(inst.M);
        case Family::bw:
            return !inst.p.empty() && std::all_of(inst.q.begin(), inst.q.end(), q_ok) &&
                   std::all_of(inst.p.begin(), inst.p.end(), p_ok) && compatible(inst.q, inst.p) &&
                   product(inst.q) * product(inst.p) == inst.M && is_squarefree(inst.M);
        case Family::main2:
        case Family::heegner: {
            int64_t l0 = inst.l0;
            if (!is_prime(l0) || l0 <= 3 || l0 % 4 != 3 || kronecker(-7, l0) != -1) return false;
            for (int64_t q : inst.q)
                if (!q_ok(q) || kronecker(-l0, q) != -1) return false;
            if (!std::all_of(inst.p.begin(), inst.p.end(), p_ok) || !compatible(inst.q, inst.p)) return false;
            int64_t N = product(inst.p);
            return !has_order_four(-l0 * N) && -l0 * product(inst.q) * N == inst.M && is_squarefree(inst.M);
        }
        case Family::s0:
            return is_prime(inst.M) && inst.M % 4 == 1 && kronecker(inst.M, 7) == 1;
        case Family::descent_oracle:
            return inst.M != 0 && inst.M % 7 != 0 && is_squarefree(inst.M);
        case Family::waldspurger:
            return inst.M >= 1 && inst.M % 4 == 1 && inst.M % 7 != 0 && is_squarefree(inst.M);
    }
    return false;
}

namespace {

CheckRecord record(Family family, const std::string& label, std::string claim, std::string measured,
                   std::string expected, double tol, bool pass) {
    return {to_string(family), label, std::move(claim), std::move(measured), std::move(expected), tol, pass};
}

std::string ord2_text(const LalgValue& v) {
    if (!v.ord2) return "inf";
    return std::to_string(*v.ord2);
}

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(10);
    out << x;
    return out.str();
}

std::string rational_text(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::vector<CheckRecord> check_main3(const Instance& inst) {
    std::vector<CheckRecord> out;
    int r = static_cast<int>(inst.q.size());
    auto v = lalg_ord2(inst.M);
    bool ok = v.ord2 && *v.ord2 == r - 1;
    out.push_back(record(inst.family, inst.label, "ord2(Lalg) = r - 1", ord2_text(v) + " (" + rational_text(v.value) + ")",
                         std::to_string(r - 1), 1e-6, ok));
    int predicted = bsd_predicted_ord2(factor_twist(inst.M), 0);
    out.push_back(record(inst.family, inst.label, "ord2(Lalg) = BSD prediction with trivial Sha[2]", ord2_text(v),
                         std::to_string(predicted), 0, v.ord2 && *v.ord2 == predicted));
    return out;
}

std::vector<CheckRecord> check_bw(const Instance& inst) {
    int r = static_cast<int>(inst.q.size()), k = static_cast<int>(inst.p.size());
    auto v = lalg_ord2(inst.M);
    int need = 2 * k + r + 1;
    bool ok = !v.ord2 || *v.ord2 >= need;
    return {record(inst.family, inst.label, "ord2(Lalg) >= 2k + r + 1", ord2_text(v), ">=" + std::to_string(need), 1e-6, ok)};
}

std::vector<CheckRecord> check_main2(const Instance& inst) {
    if (std::llabs(inst.M) > 5000)
        return {record(inst.family, inst.label, "L'(1) != 0", "skipped: |M| > 5000", "nonzero", 0, false)};
    auto rec = l_derivative(inst.M);
    double ratio = std::fabs(*rec.L_prime_numeric) / rec.error_bound;
    return {record(inst.family, inst.label, "L'(1) != 0", fmt(*rec.L_prime_numeric) + " (ratio " + fmt(ratio) + ")",
                   "|L'| > 1e3 * error bound", 1e3 * rec.error_bound, ratio > 1e3)};
}

std::vector<CheckRecord> check_s0(const Instance& inst) {
    int64_t p = inst.M;
    bool quartic = quartic_is_one(-7, p);
    std::vector<CheckRecord> out;
    auto yes_no = [](bool b) { return std::string(b ? "1" : "0"); };
    auto crit = h8_for_7p(p);
    out.push_back(record(inst.family, inst.label, "h8(-7p) criterion matches quartic symbol", yes_no(crit.value == 1), yes_no(quartic), 0,
                         (crit.value == 1) == quartic));
    auto triples = h8_for_7p_by_triples(p);
    out.push_back(record(inst.family, inst.label, "h8(-7p) torsor search matches quartic symbol", yes_no(triples.value == 1),
                         yes_no(quartic), 0, (triples.value == 1) == quartic));
    auto sel = selmer2_report(factor_twist(p));
    std::string dim = sel.dim2 ? std::to_string(*sel.dim2) : "[" + std::to_string(sel.lo) + "," + std::to_string(sel.hi) + "]";
    out.push_back(record(inst.family, inst.label, "dim Selmer2 quotient", dim, quartic ? "2" : "0", 0,
                         sel.dim2 && *sel.dim2 == (quartic ? 2 : 0)));
    auto v = lalg_ord2(p);
    bool ok = quartic ? (!v.ord2 || *v.ord2 >= 3) : (v.ord2 && *v.ord2 == 1);
    out.push_back(record(inst.family, inst.label, "ord2(Lalg)", ord2_text(v), quartic ? ">=3" : "1", 1e-6, ok));
    return out;
}

std::vector<CheckRecord> check_descent(const Instance& inst) {
    auto M = factor_twist(inst.M);
    std::vector<CheckRecord> out;
    for (IsogenySide side : {IsogenySide::phi, IsogenySide::phihat}) {
        auto stated = side == IsogenySide::phi ? selmer_phi(M) : selmer_phihat(M);
        auto oracle = selmer_by_oracle(side, M);
        std::string name = side == IsogenySide::phi ? "S(phi) membership" : "S(phihat) membership";
        out.push_back(record(inst.family, inst.label, name, join(oracle.members), join(stated.members), 0,
                             stated.members == oracle.members));
    }
    return out;
}

std::vector<CheckRecord> check_waldspurger(const Instance& inst) {
    int64_t n = inst.M;
    auto setup = gross_setup(n);
    std::vector<CheckRecord> out;
    std::map<int64_t, int64_t> ys;
    for (int64_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        auto rep = verify_waldspurger(setup, d);
        ys[d] = rep.y;
        std::string label = inst.label + ",d=" + std::to_string(d);
        if (rep.admissible) {
            out.push_back(record(inst.family, label, "y_d^2 = 2^(2+delta) Lalg(d*) Lalg(-7n/d*)",
                                 std::to_string(rep.y * rep.y), fmt(rep.rhs), 1e-6, rep.pass));
        } else {
            out.push_back(record(inst.family, label, "y_d = 0 off the admissible genus", std::to_string(rep.y), "0", 0, rep.y == 0));
        }
    }
    if (setup.delta == 0) {
        for (auto [d, y] : ys) {
            if (d > n / d) continue;
            std::string label = inst.label + ",d=" + std::to_string(d);
            out.push_back(record(inst.family, label, "y_d = y_(n/d)", std::to_string(y), std::to_string(ys[n / d]), 0, y == ys[n / d]));
        }
    }
    return out;
}

std::vector<CheckRecord> check_heegner(const Instance& inst) {
    std::vector<CheckRecord> out;
    int64_t R = product(inst.q);
    bool twisted = R > 1;
    auto trace = heegner_trace(inst.l0, R, product(inst.p), twisted);
    out.push_back(record(inst.family, inst.label, "trace is non-torsion", fmt(trace.torsion_distance), "> 1e-6", 1e-6,
                         !trace.torsion_flag));
    const auto L = lattice_invariants(1);
    if (!twisted) {
        double dist = distance_to_lattice(trace.conj_sum - L.omega1 / 2.0, L) / std::abs(L.omega1);
        out.push_back(record(inst.family, inst.label, "conj(y) + y = T", fmt(dist), "0", 1e-6, dist < 1e-6));
    } else {
        out.push_back(record(inst.family, inst.label, "trace lies in the minus eigenspace",
                             trace.minus_eigen_flag ? "1" : "0", "1", 1e-6, trace.minus_eigen_flag));
        if (inst.q.size() == 1) {
            cplx full = full_trace(-inst.l0 * product(inst.p), R);
            double dist = distance_to_lattice(full, L) / std::abs(L.omega1);
            out.push_back(record(inst.family, inst.label, "full conductor-q trace = a_q P = O", fmt(dist), "0", 1e-8, dist < 1e-8));
        }
    }
    if (std::llabs(inst.M) <= 5000) {
        auto rec = l_derivative(inst.M);
        bool nonzero = std::fabs(*rec.L_prime_numeric) > 1e3 * rec.error_bound;
        out.push_back(record(inst.family, inst.label, "non-torsion trace implies L'(1) != 0", fmt(*rec.L_prime_numeric),
                             "nonzero", 1e3 * rec.error_bound, trace.torsion_flag || nonzero));
    }
    return out;
}

std::vector<CheckRecord> check_instance(const Instance& inst) {
    try {
        if (!eligible(inst)) return {record(inst.family, inst.label, "eligibility", "ineligible", "eligible", 0, false)};
        switch (inst.family) {
            case Family::main3: return check_main3(inst);
            case Family::bw: return check_bw(inst);
            case Family::main2: return check_main2(inst);
            case Family::s0: return check_s0(inst);
            case Family::descent_oracle: return check_descent(inst);
            case Family::waldspurger: return check_waldspurger(inst);
            case Family::heegner: return check_heegner(inst);
        }
    } catch (const std::exception& e) {
        return {record(inst.family, inst.label, "evaluation", std::string("error: ") + e.what(), "no error", 0, false)};
    }
    return {};
}

}  // namespace

std::vector<CheckRecord> verify(Family family, const VerifyOptions& options) {
    std::vector<Instance> instances;
    if (family == Family::waldspurger && !options.labels.empty()) {
        for (int64_t n : options.labels) instances.push_back({family, n, 0, {}, {}, "n=" + std::to_string(n)});
    } else {
        instances = scan(family, options.bound);
    }

    std::vector<std::vector<CheckRecord>> results(instances.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t s = next++; s < instances.size(); s = next++) results[s] = check_instance(instances[s]);
    };
    int jobs = std::max(1, options.jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<CheckRecord> out;
    for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
    return out;
}

}  // namespace twist49
