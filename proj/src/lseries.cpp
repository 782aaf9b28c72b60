#include "twist49/lseries.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "ddouble.hpp"
#include "twist49/arith.hpp"

namespace twist49 {

using detail::DDouble;

HeckeApTable::HeckeApTable(HeckeApTable&& other) noexcept {
    std::unique_lock lock(other.mutex_);
    entries_ = std::move(other.entries_);
}

int64_t HeckeApTable::ap(int64_t p) {
    {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(p);
        if (it != entries_.end()) return it->second.ap;
    }
    int64_t value = twist49::ap(p);
    insert(p, value, ApSource::character);
    return value;
}

void HeckeApTable::insert(int64_t p, int64_t value, ApSource source) {
    std::unique_lock lock(mutex_);
    auto [it, fresh] = entries_.try_emplace(p, ApEntry{value, source});
    if (!fresh && it->second.ap != value)
        fail(ErrorCode::oracle_disagreement, "a_p cache conflict at p = " + std::to_string(p));
}

std::map<int64_t, ApEntry> HeckeApTable::snapshot() const {
    std::shared_lock lock(mutex_);
    return entries_;
}

size_t HeckeApTable::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

void HeckeApTable::save(const std::filesystem::path& path) const {
    auto entries = snapshot();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::invalid_argument, "cannot write " + path.string());
    for (auto& [p, e] : entries) out << p << '\t' << e.ap << '\n';
}

namespace {

bool parse_canonical(std::string_view text, int64_t& value) {
    if (text.empty()) return false;
    size_t digits = text[0] == '-' ? 1 : 0;
    if (digits == text.size()) return false;
    if (text[digits] == '0' && text.size() > digits + 1) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

HeckeApTable HeckeApTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::parse_error, "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();

    HeckeApTable table;
    size_t pos = 0;
    int line_no = 0;
    int64_t last_p = 0;
    while (pos < text.size()) {
        ++line_no;
        size_t eol = text.find('\n', pos);
        auto bad = [&] { fail(ErrorCode::parse_error, "a_p cache: malformed line " + std::to_string(line_no)); };
        if (eol == std::string::npos) bad();
        std::string_view line(text.data() + pos, eol - pos);
        size_t tab = line.find('\t');
        if (tab == std::string_view::npos) bad();
        int64_t p = 0, value = 0;
        if (!parse_canonical(line.substr(0, tab), p) || !parse_canonical(line.substr(tab + 1), value)) bad();
        if (p <= last_p || !is_prime(p)) bad();
        table.entries_.emplace(p, ApEntry{value, ApSource::character});
        last_p = p;
        pos = eol + 1;
    }
    return table;
}

int64_t ap_oracle(int64_t p) {
    if (p == 7) fail(ErrorCode::invalid_argument, "ap_oracle: bad reduction at 7");
    if (p < 2 || !is_prime(p)) fail(ErrorCode::invalid_argument, "ap_oracle: p must be prime");
    if (p > 10000) fail(ErrorCode::out_of_range, "ap_oracle: p > 10^4");
    int64_t count = 1;  // point at infinity
    for (int64_t x = 0; x < p; ++x) {
        int64_t fx = mod_floor(((x * x % p) * x - x * x - 2 * x - 1), p);
        if (p == 2) {
            for (int64_t y = 0; y < 2; ++y)
                if (mod_floor(y * y + x * y - fx, 2) == 0) ++count;
        } else {
            // y^2 + xy - f(x) = 0 has 1 + (disc/p) roots
            int64_t disc = mod_floor(x * x + 4 * fx, p);
            count += 1 + kronecker(disc, p);
        }
    }
    return p + 1 - count;
}

int64_t ap(int64_t p) {
    if (p < 2 || !is_prime(p)) fail(ErrorCode::invalid_argument, "ap: p must be prime");
    if (p == 7) return 0;
    auto ab = norm_form_4p(p);
    if (!ab) return 0;
    int64_t a = ab->first;
    return kronecker(a, 7) == 1 ? a : -a;
}

void calibrate_ap(int64_t bound) {
    for (int64_t p : primes_up_to(bound - 1)) {
        if (p == 7) continue;
        int64_t by_char = ap(p), by_count = ap_oracle(p);
        if (by_char != by_count)
            fail(ErrorCode::oracle_disagreement, "a_" + std::to_string(p) + ": character " + std::to_string(by_char) +
                                                     " vs point count " + std::to_string(by_count));
    }
}

HeckeApTable& default_ap_table() {
    static HeckeApTable table;
    return table;
}

namespace {

std::once_flag calibration_flag;
std::shared_mutex an_mutex;
std::shared_ptr<const std::vector<int64_t>> an_cache;

std::shared_ptr<const std::vector<int64_t>> build_an(int64_t n) {
    std::call_once(calibration_flag, [] { calibrate_ap(200); });
    std::vector<int32_t> spf(n + 1, 0);
    for (int64_t i = 2; i <= n; ++i) {
        if (spf[i] != 0) continue;
        for (int64_t j = i; j <= n; j += i)
            if (spf[j] == 0) spf[j] = static_cast<int32_t>(i);
    }
    auto table = std::make_shared<std::vector<int64_t>>(n + 1, 0);
    auto& a = *table;
    if (n >= 1) a[1] = 1;
    auto& cache = default_ap_table();
    for (int64_t m = 2; m <= n; ++m) {
        int64_t p = spf[m];
        int64_t rest = m, pk = 1;
        while (rest % p == 0) {
            rest /= p;
            pk *= p;
        }
        if (rest > 1) {
            a[m] = a[pk] * a[rest];
        } else if (pk == p) {
            a[m] = cache.ap(p);
        } else {
            int64_t bad = p == 7 ? 0 : p;
            a[m] = a[p] * a[m / p] - bad * a[m / p / p];
        }
    }
    return table;
}

}  // namespace

std::shared_ptr<const std::vector<int64_t>> an_table(int64_t n) {
    {
        std::shared_lock lock(an_mutex);
        if (an_cache && static_cast<int64_t>(an_cache->size()) > n) return an_cache;
    }
    std::unique_lock lock(an_mutex);
    if (an_cache && static_cast<int64_t>(an_cache->size()) > n) return an_cache;
    int64_t target = std::max<int64_t>(n, an_cache ? 2 * static_cast<int64_t>(an_cache->size()) : 1 << 16);
    an_cache = build_an(target);
    return an_cache;
}

int root_number(int64_t M) {
    if (M == 0 || !is_squarefree(M)) fail(ErrorCode::not_squarefree, "root_number: M must be squarefree");
    bool seven = M % 7 == 0;
    return ((M > 0 && !seven) || (M < 0 && seven)) ? 1 : -1;
}

double omega_A() {
    static const double value = std::tgamma(1.0 / 7) * std::tgamma(2.0 / 7) * std::tgamma(4.0 / 7) /
                                (2 * std::numbers::pi * std::sqrt(7.0));
    return value;
}

double omega_minus() { return omega_A() * std::sqrt(7.0); }

double omega_twist(int64_t M) {
    if (M == 0) fail(ErrorCode::invalid_argument, "omega_twist: M = 0");
    double u = mod_floor(M, 4) == 1 ? 1.0 : 0.5;
    double absM = std::fabs(static_cast<double>(M));
    return M > 0 ? u * omega_A() / std::sqrt(absM) : u * omega_minus() / std::sqrt(absM);
}

namespace {

constexpr double central_tail_target = 1e-12;
constexpr double derivative_tail_target = 1e-10;

struct TwistSeries {
    int64_t M = 1;
    int64_t label = 1;
    int64_t disc = 1;
    int64_t conductor = 49;
    double sqrtN = 7;
    double c = 0;  // 2 pi / sqrt(N)
    std::vector<int8_t> chi;  // kronecker(disc, r) for r mod |disc|
};

TwistSeries prepare(int64_t M) {
    if (M == 0 || !is_squarefree(M)) fail(ErrorCode::not_squarefree, "L-series: M must be squarefree");
    if (M > 5000 || M < -5000) fail(ErrorCode::out_of_range, "L-series: |M| > 5000");
    TwistSeries s;
    s.M = M;
    s.label = M % 7 == 0 ? -M / 7 : M;
    s.disc = field_discriminant(s.label);
    int64_t absD = std::abs(s.disc);
    s.conductor = 49 * s.disc * s.disc;
    s.sqrtN = 7.0 * static_cast<double>(absD);
    s.c = 2 * std::numbers::pi / s.sqrtN;
    s.chi.resize(absD);
    for (int64_t r = 0; r < absD; ++r) s.chi[r] = static_cast<int8_t>(kronecker(s.disc, r));
    return s;
}

int64_t central_terms(double c) {
    double ratio = 1 - std::exp(-c);
    return static_cast<int64_t>(std::ceil(std::log(4.0 / (central_tail_target * ratio)) / c));
}

double central_tail(double c, int64_t T) { return 4 * std::exp(-c * (T + 1)) / (1 - std::exp(-c)); }

struct SeriesSum {
    double value = 0;
    double abs_sum = 0;
};

SeriesSum central_sum_binary64(const TwistSeries& s, int64_t T) {
    auto table = an_table(T);
    const auto& a = *table;
    int64_t absD = static_cast<int64_t>(s.chi.size());
    double sum = 0, comp = 0, abs_sum = 0;
    for (int64_t n = 1; n <= T; ++n) {
        if (a[n] == 0) continue;
        int chi = s.chi[n % absD];
        if (chi == 0) continue;
        double term = static_cast<double>(a[n] * chi) / static_cast<double>(n) * std::exp(-s.c * static_cast<double>(n));
        double t = sum + term;
        comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        abs_sum += std::fabs(term);
    }
    return {2 * (sum + comp), 2 * abs_sum};
}

SeriesSum central_sum_dd(const TwistSeries& s, int64_t T) {
    auto table = an_table(T);
    const auto& a = *table;
    int64_t absD = static_cast<int64_t>(s.chi.size());
    DDouble sqrtN = detail::dd_sqrt(DDouble(49.0 * static_cast<double>(s.disc) * static_cast<double>(s.disc)));
    DDouble c = DDouble(2.0) * detail::dd_pi / sqrtN;
    DDouble step = detail::dd_exp_small(-c);
    DDouble weight(1.0), sum(0.0);
    double abs_sum = 0;
    for (int64_t n = 1; n <= T; ++n) {
        weight = weight * step;
        if (a[n] == 0) continue;
        int chi = s.chi[n % absD];
        if (chi == 0) continue;
        DDouble term = DDouble(static_cast<double>(a[n] * chi)) * weight / DDouble(static_cast<double>(n));
        sum = sum + term;
        abs_sum += std::fabs(term.hi);
    }
    return {2 * sum.to_double(), 2 * abs_sum};
}

}  // namespace

std::optional<Rational> snap_rational(double x, int64_t max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    if (std::fabs(x) < tol) return Rational(0);
    double rest = x;
    int64_t p0 = 1, q0 = 0, p1 = static_cast<int64_t>(std::floor(rest)), q1 = 1;
    for (int iter = 0; iter < 64; ++iter) {
        if (std::fabs(x - static_cast<double>(p1) / static_cast<double>(q1)) < tol) return Rational(p1, q1);
        double frac = rest - std::floor(rest);
        if (frac < 1e-15) break;
        rest = 1.0 / frac;
        int64_t a = static_cast<int64_t>(std::floor(rest));
        int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return std::nullopt;
}

int ord2_rational(const Rational& r) {
    if (r.numerator() == 0) fail(ErrorCode::invalid_argument, "ord2 of zero");
    return ord_p(std::abs(r.numerator()), 2) - ord_p(r.denominator(), 2);
}

namespace {

struct SnapAttempt {
    std::optional<Rational> value;
    double L = 0;
    double error = 0;
};

SnapAttempt attempt(const TwistSeries& s, int64_t T, double omega, Precision precision) {
    auto sum = precision == Precision::double_double ? central_sum_dd(s, T) : central_sum_binary64(s, T);
    auto doubled = precision == Precision::double_double ? central_sum_dd(s, 2 * T) : central_sum_binary64(s, 2 * T);
    double eps = precision == Precision::double_double ? 1e-30 * static_cast<double>(T) : 8e-16;
    SnapAttempt out;
    out.L = sum.value;
    out.error = central_tail(s.c, T) + eps * sum.abs_sum;
    auto first = snap_rational(sum.value / omega);
    auto second = snap_rational(doubled.value / omega);
    if (first && second && *first == *second) out.value = first;
    return out;
}

}  // namespace

LValueRecord l_central(int64_t M, Precision precision) {
    if (M == 0 || !is_squarefree(M)) fail(ErrorCode::not_squarefree, "l_central: M must be squarefree");
    if (root_number(M) != 1) fail(ErrorCode::wrong_root_number, "l_central: root number is -1");
    TwistSeries s = prepare(M);
    LValueRecord rec;
    rec.M = M;
    rec.label = s.label;
    rec.conductor = s.conductor;
    rec.root = 1;
    rec.omega = omega_twist(M);
    rec.terms_used = central_terms(s.c);

    Precision first = precision;
    if (first == Precision::automatic) first = std::abs(M) > 1500 ? Precision::double_double : Precision::binary64;
    SnapAttempt result = attempt(s, rec.terms_used, rec.omega, first);
    rec.precision_used = first;
    if (!result.value && precision == Precision::automatic && first == Precision::binary64) {
        result = attempt(s, rec.terms_used, rec.omega, Precision::double_double);
        rec.precision_used = Precision::double_double;
    }
    rec.L_numeric = result.L;
    rec.error_bound = result.error;
    if (!result.value)
        fail(ErrorCode::snap_failure, "l_central: L/omega = " + std::to_string(result.L / rec.omega) +
                                          " does not snap stably for M = " + std::to_string(M));
    rec.lalg = result.value;
    if (rec.lalg->numerator() != 0) rec.ord2 = ord2_rational(*rec.lalg);
    return rec;
}

LValueRecord l_derivative(int64_t M) {
    if (M == 0 || !is_squarefree(M)) fail(ErrorCode::not_squarefree, "l_derivative: M must be squarefree");
    if (root_number(M) != -1) fail(ErrorCode::wrong_root_number, "l_derivative: root number is +1");
    TwistSeries s = prepare(M);
    LValueRecord rec;
    rec.M = M;
    rec.label = s.label;
    rec.conductor = s.conductor;
    rec.root = -1;
    rec.omega = omega_twist(M);

    // |a_n|/n <= 2/sqrt(n) and E1(x) <= exp(-x)/x
    double ratio = 1 - std::exp(-s.c);
    int64_t T = 1;
    auto tail = [&](int64_t t) { return 4 * std::exp(-s.c * (t + 1)) / (ratio * s.c * (t + 1)); };
    while (tail(T) >= derivative_tail_target) T = T * 2;
    int64_t lo = T / 2;
    while (lo + 1 < T) {
        int64_t mid = (lo + T) / 2;
        (tail(mid) < derivative_tail_target ? T : lo) = mid;
    }
    auto table = an_table(T);
    const auto& a = *table;
    int64_t absD = static_cast<int64_t>(s.chi.size());
    double sum = 0, comp = 0, abs_sum = 0;
    for (int64_t n = 1; n <= T; ++n) {
        if (a[n] == 0) continue;
        int chi = s.chi[n % absD];
        if (chi == 0) continue;
        double x = s.c * static_cast<double>(n);
        double term = static_cast<double>(a[n] * chi) / static_cast<double>(n) * -std::expint(-x);
        double t = sum + term;
        comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        abs_sum += std::fabs(term);
    }
    rec.L_numeric = 0;
    rec.L_prime_numeric = 2 * (sum + comp);
    rec.terms_used = T;
    rec.error_bound = tail(T) + 1e-14 * 2 * abs_sum;
    rec.precision_used = Precision::binary64;
    return rec;
}

LalgValue lalg_ord2(int64_t M, Precision precision) {
    auto rec = l_central(M, precision);
    return {*rec.lalg, rec.ord2};
}

}  // namespace twist49
