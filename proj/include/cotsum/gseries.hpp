#pragma once

// The sawtooth series g(x) = sum_l B(l x)/l, its truncations f(x; m1), Fourier
// data, continued-fraction convergence diagnostics, the distribution function
// of g and the even moments H_k, D_2k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "numeric.hpp"
#include "parallel.hpp"

namespace cotsum {

// B(u) = 1 - 2{u}, with B = 0 at integers.
inline double sawtooth(double u) {
    const double fr = u - std::floor(u);
    return fr == 0.0 ? 0.0 : 1.0 - 2.0 * fr;
}

struct TruncatedGSeries {
    int m1;

    explicit TruncatedGSeries(int m) : m1(m) {
        if (m1 < 1 || m1 > 40) throw std::domain_error("TruncatedGSeries: m1 must lie in [1, 40]");
    }
    std::int64_t length() const { return std::int64_t{1} << m1; }
};

// Holds the 1/l table for one truncation so repeated evaluations stay cheap.
class SawtoothSum {
public:
    explicit SawtoothSum(TruncatedGSeries t) : t_(t), l_(static_cast<std::size_t>(t.length())),
                                               inv_(static_cast<std::size_t>(t.length())) {
        for (std::size_t i = 0; i < l_.size(); ++i) {
            l_[i] = static_cast<double>(i + 1);
            inv_[i] = 1.0 / l_[i];
        }
    }

    const TruncatedGSeries& series() const { return t_; }

    double operator()(double alpha) const { return partial(alpha, l_.size()); }

    // Sum over l <= terms.
    double partial(double alpha, std::size_t terms) const {
        double acc[4] = {0.0, 0.0, 0.0, 0.0};
        const double* l = l_.data();
        const double* inv = inv_.data();
        std::size_t i = 0;
        for (; i + 4 <= terms; i += 4)
            for (int j = 0; j < 4; ++j) acc[j] += term(l[i + j] * alpha) * inv[i + j];
        for (; i < terms; ++i) acc[0] += term(l[i] * alpha) * inv[i];
        return (acc[0] + acc[1]) + (acc[2] + acc[3]);
    }

    // Evaluates at the prefix lengths given by `cuts` (ascending) in one pass.
    void prefixes(double alpha, std::span<const std::size_t> cuts, std::span<double> out) const {
        double acc[4] = {0.0, 0.0, 0.0, 0.0};
        const double* l = l_.data();
        const double* inv = inv_.data();
        std::size_t i = 0;
        for (std::size_t c = 0; c < cuts.size(); ++c) {
            const std::size_t end = cuts[c];
            for (; i + 4 <= end; i += 4)
                for (int j = 0; j < 4; ++j) acc[j] += term(l[i + j] * alpha) * inv[i + j];
            for (; i < end; ++i) acc[0] += term(l[i] * alpha) * inv[i];
            out[c] = (acc[0] + acc[1]) + (acc[2] + acc[3]);
        }
    }

private:
    static double term(double x) {
        const double fr = x - std::floor(x);
        return fr == 0.0 ? 0.0 : 1.0 - 2.0 * fr;
    }

    TruncatedGSeries t_;
    std::vector<double> l_;
    std::vector<double> inv_;
};

inline double f_eval(double alpha, TruncatedGSeries t) {
    if (!std::isfinite(alpha)) throw std::domain_error("f_eval: alpha must be finite");
    thread_local std::unique_ptr<SawtoothSum> cache;
    if (!cache || cache->series().m1 != t.m1) cache = std::make_unique<SawtoothSum>(t);
    return (*cache)(alpha);
}

// f(p/q; m1) with exact integer residues: B(l p/q) = 1 - 2 ((l p) mod q)/q.
inline double f_eval_rational(std::int64_t p, std::int64_t q, TruncatedGSeries t) {
    if (q < 1) throw std::domain_error("f_eval_rational: q must be >= 1");
    p %= q;
    if (p < 0) p += q;
    const double qd = static_cast<double>(q);
    const std::int64_t L = t.length();
    double acc = 0.0;
    std::int64_t k = 0;
    for (std::int64_t l = 1; l <= L; ++l) {
        k += p;
        if (k >= q) k -= q;
        if (k != 0) acc += (1.0 - 2.0 * static_cast<double>(k) / qd) / static_cast<double>(l);
    }
    return acc;
}

// Number of divisors tau(n) for n <= M by a linear sieve.
inline std::vector<std::uint32_t> divisor_counts(std::int64_t M) {
    if (M < 1) throw std::domain_error("divisor_counts: M must be >= 1");
    const std::size_t n = static_cast<std::size_t>(M) + 1;
    std::vector<std::uint32_t> tau(n, 0), min_exp(n, 0);
    std::vector<std::uint32_t> primes;
    if (n > 1) tau[1] = 1;
    for (std::size_t i = 2; i < n; ++i) {
        if (tau[i] == 0) {
            primes.push_back(static_cast<std::uint32_t>(i));
            tau[i] = 2;
            min_exp[i] = 1;
        }
        for (std::uint32_t p : primes) {
            const std::size_t ip = i * p;
            if (ip >= n) break;
            if (i % p == 0) {
                min_exp[ip] = min_exp[i] + 1;
                tau[ip] = tau[i] / (min_exp[i] + 1) * (min_exp[ip] + 1);
                break;
            }
            min_exp[ip] = 1;
            tau[ip] = tau[i] * 2;
        }
    }
    return tau;
}

// g(x) = (2/pi) sum_l tau(l)/l sin(2 pi l x), from B(u) = (2/pi) sum_n sin(2 pi n u)/n.
inline constexpr double kFourierScale = 2.0 / M_PI;

class DivisorSineSeries {
public:
    explicit DivisorSineSeries(std::int64_t M, double scale = kFourierScale) : scale_(scale) {
        const auto tau = divisor_counts(M);
        coef_.resize(static_cast<std::size_t>(M));
        for (std::int64_t l = 1; l <= M; ++l)
            coef_[static_cast<std::size_t>(l - 1)] = tau[static_cast<std::size_t>(l)] / static_cast<double>(l);
    }

    double operator()(double alpha) const {
        const double fr = alpha - std::floor(alpha);
        if (fr == 0.0) return 0.0;
        // sin(2 pi l x) by rotation, re-anchored every 256 steps
        const double th = 2.0 * M_PI * fr;
        const double cr = std::cos(th), sr = std::sin(th);
        double acc = 0.0;
        double c = 1.0, s = 0.0;
        const std::size_t M = coef_.size();
        for (std::size_t l = 1; l <= M; ++l) {
            if ((l & 255) == 0) {
                const double x = static_cast<double>(l) * fr;
                const double ph = 2.0 * M_PI * (x - std::floor(x));
                c = std::cos(ph);
                s = std::sin(ph);
            } else {
                const double cn = c * cr - s * sr;
                s = s * cr + c * sr;
                c = cn;
            }
            acc += coef_[l - 1] * s;
        }
        return scale_ * acc;
    }

private:
    double scale_;
    std::vector<double> coef_;
};

inline double g_fourier_eval(double alpha, std::int64_t M) {
    if (M < 1) throw std::domain_error("g_fourier_eval: M must be >= 1");
    return DivisorSineSeries(M)(alpha);
}

// Im a(k, 1) for k = 1..K, where f(x; m1) = sum_{k != 0} a(k,1) e(kx),
// a(k,1) = -i tau_L(k)/(pi k) and tau_L counts divisors of k not exceeding 2^m1.
// a(-k,1) is the complex conjugate.
inline std::vector<double> fourier_coeffs_f(TruncatedGSeries t, std::int64_t K) {
    if (K < 1) throw std::domain_error("fourier_coeffs_f: K must be >= 1");
    std::vector<std::uint32_t> count(static_cast<std::size_t>(K) + 1, 0);
    const std::int64_t L = std::min<std::int64_t>(t.length(), K);
    for (std::int64_t l = 1; l <= L; ++l)
        for (std::int64_t k = l; k <= K; k += l) ++count[static_cast<std::size_t>(k)];
    std::vector<double> a(static_cast<std::size_t>(K));
    for (std::int64_t k = 1; k <= K; ++k)
        a[static_cast<std::size_t>(k - 1)] = -static_cast<double>(count[static_cast<std::size_t>(k)]) /
                                             (M_PI * static_cast<double>(k));
    return a;
}

// sum_{k != 0} |a(k,1)|^2 = 2 sum_{k>0} (Im a)^2
inline double parseval_sum(const std::vector<double>& im) {
    NeumaierSum s;
    for (double v : im) s.add(2.0 * v * v);
    return s.value();
}

// ---------------------------------------------------------------- continued fractions

struct Convergent {
    std::int64_t p;
    std::int64_t q;
};

struct ContinuedFraction {
    double alpha = 0.0;
    std::vector<std::int64_t> partial_quotients;  // a_1..a_n
    std::vector<Convergent> convergents;          // p_0/q_0 = 0/1, then p_i/q_i
    bool terminated = false;                      // expansion exhausted alpha to double precision
    bool rational = false;                        // alpha identified with a small-denominator rational
};

namespace detail {

inline bool push_quotient(ContinuedFraction& cf, std::int64_t a) {
    const auto& c = cf.convergents;
    const Convergent prev = c.back();
    const Convergent prev2 = c.size() >= 2 ? c[c.size() - 2] : Convergent{1, 0};
    __int128 p = static_cast<__int128>(a) * prev.p + prev2.p;
    __int128 q = static_cast<__int128>(a) * prev.q + prev2.q;
    if (q > (static_cast<__int128>(1) << 62)) return false;
    cf.partial_quotients.push_back(a);
    cf.convergents.push_back({static_cast<std::int64_t>(p), static_cast<std::int64_t>(q)});
    return true;
}

}  // namespace detail

// Build from known partial quotients (exact convergents).
inline ContinuedFraction cf_from_quotients(std::span<const std::int64_t> quotients) {
    ContinuedFraction cf;
    cf.convergents.push_back({0, 1});
    for (std::int64_t a : quotients) {
        if (a < 1) throw std::domain_error("cf_from_quotients: partial quotients must be >= 1");
        if (!detail::push_quotient(cf, a)) break;
    }
    const auto& last = cf.convergents.back();
    cf.alpha = static_cast<double>(last.p) / static_cast<double>(last.q);
    cf.terminated = cf.rational = cf.partial_quotients.size() == quotients.size();
    return cf;
}

// Gauss map x -> {1/x}. Stops after max_terms quotients, on integer overflow,
// or once p_n/q_n reproduces alpha to double precision.
inline ContinuedFraction cf_expand(double alpha, int max_terms) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("cf_expand: alpha must lie in [0, 1)");
    ContinuedFraction cf;
    cf.alpha = alpha;
    cf.convergents.push_back({0, 1});
    if (alpha == 0.0) {
        cf.terminated = cf.rational = true;
        return cf;
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    long double x = alpha;
    for (int n = 0; n < max_terms; ++n) {
        if (x == 0.0L) {
            cf.terminated = true;
            break;
        }
        const long double inv = 1.0L / x;
        if (inv > 4.0e18L) {
            cf.terminated = true;
            break;
        }
        const auto a = static_cast<std::int64_t>(std::floor(inv));
        if (a < 1 || !detail::push_quotient(cf, a)) {
            cf.terminated = true;
            break;
        }
        x = inv - static_cast<long double>(a);
        const auto& c = cf.convergents.back();
        const double miss = std::fabs(std::fma(alpha, static_cast<double>(c.q), -static_cast<double>(c.p)));
        if (miss <= 2.0 * eps * alpha * static_cast<double>(c.q)) {
            cf.terminated = true;
            break;
        }
    }
    if (cf.terminated) {
        const auto& c = cf.convergents.back();
        cf.rational = c.q <= (std::int64_t{1} << 24) &&
                      static_cast<double>(c.p) / static_cast<double>(c.q) == alpha;
    }
    return cf;
}

enum class Verdict { converges, diverges, undecided };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::converges: return "converges";
        case Verdict::diverges: return "diverges";
        default: return "undecided";
    }
}

struct ClassifierOptions {
    int window = 3;                // trailing terms inspected
    double ratio_max = 0.9;        // geometric domination threshold
    double tail_tolerance = 1e-4;  // geometric tail estimate must be below this
    double divergence_floor = 0.25;
};

struct ConvergenceReport {
    double alternating_sum = 0.0;  // sum_{m>=1} (-1)^m log(q_{m+1})/q_m
    double brjuno_sum = 0.0;       // sum_{m>=1} log(q_{m+1})/q_m
    Verdict verdict = Verdict::undecided;
    std::vector<double> terms;
    double tail_estimate = std::numeric_limits<double>::infinity();
};

// log_q[m] = log q_m for m = 0, 1, ...; allows denominators far beyond 64 bits.
inline ConvergenceReport convergence_classifier(std::span<const double> log_q, bool rational,
                                                const ClassifierOptions& opt = {}) {
    if (log_q.size() < 2) throw std::domain_error("convergence_classifier: need at least 2 convergents");
    ConvergenceReport rep;
    NeumaierSum alt, brj;
    for (std::size_t m = 1; m + 1 < log_q.size(); ++m) {
        const double t = log_q[m + 1] / std::exp(log_q[m]);
        rep.terms.push_back(t);
        brj.add(t);
        alt.add(m % 2 == 0 ? t : -t);
    }
    rep.alternating_sum = alt.value();
    rep.brjuno_sum = brj.value();
    if (rational) {
        rep.verdict = Verdict::converges;
        rep.tail_estimate = 0.0;
        return rep;
    }
    const auto& t = rep.terms;
    const std::size_t w = static_cast<std::size_t>(opt.window);
    if (t.size() >= w && std::all_of(t.end() - static_cast<std::ptrdiff_t>(w), t.end(),
                                     [&](double v) { return v >= opt.divergence_floor; })) {
        rep.verdict = Verdict::diverges;
        return rep;
    }
    if (t.size() >= w + 1) {
        double rho = 0.0;
        for (std::size_t i = t.size() - w; i < t.size(); ++i)
            rho = std::max(rho, t[i - 1] > 0.0 ? t[i] / t[i - 1] : 0.0);
        if (rho <= opt.ratio_max) {
            rep.tail_estimate = t.back() * rho / (1.0 - rho);
            if (rep.tail_estimate <= opt.tail_tolerance) rep.verdict = Verdict::converges;
        }
    }
    return rep;
}

inline ConvergenceReport convergence_classifier(const ContinuedFraction& cf, const ClassifierOptions& opt = {}) {
    std::vector<double> log_q;
    for (const auto& c : cf.convergents) log_q.push_back(std::log(static_cast<double>(c.q)));
    return convergence_classifier(log_q, cf.rational, opt);
}

// ---------------------------------------------------------------- moments

struct MomentRow {
    int k = 0;
    double hk = 0.0;     // int (f/pi)^{2k}
    double d2k = 0.0;    // int f^{2k}
    double error = 0.0;  // estimated quadrature + truncation error of hk
};

struct MomentTable {
    int m1 = 0;
    std::int64_t grid = 0;
    std::vector<MomentRow> rows;      // k = 0..k_max
    std::vector<double> odd_moments;  // int f^{2k-1}, k = 1..k_max

    const MomentRow& at(int k) const { return rows.at(static_cast<std::size_t>(k)); }
};

// Nodes x_i = (i + theta)/grid for i < grid/2, rounded to multiples of 2^-32,
// together with their mirrors 1 - x_i. theta = frac(golden ratio) keeps nodes
// off the jumps of f(.; m1); the dyadic rounding makes l x exact for
// l <= 2^20, so f(1 - x) = -f(x) holds exactly and odd moments cancel exactly.
inline MomentTable hk_table(int k_max, TruncatedGSeries t, std::int64_t grid, unsigned threads = 1) {
    if (k_max < 1) throw std::domain_error("hk_table: k_max must be >= 1");
    if (grid < 1000) throw std::domain_error("hk_table: grid must be >= 1000");
    if (grid % 4 != 0) grid += 4 - grid % 4;
    const SawtoothSum eval(t);
    const std::size_t full = static_cast<std::size_t>(t.length());
    const std::size_t coarse = t.m1 >= 3 ? full / 4 : full;
    const std::size_t cuts_arr[2] = {coarse, full};
    const double theta = 0.6180339887498949;
    const std::int64_t half = grid / 2;
    const int P = 2 * k_max;

    // sums[(level * 2 + parity) * P + power - 1]: level 0 = full truncation,
    // 1 = truncation 2^{m1-2}; parity 0 = all nodes, 1 = even-index pairs (half grid).
    constexpr std::size_t chunk = 256;
    const std::size_t nchunks = (static_cast<std::size_t>(half) + chunk - 1) / chunk;
    std::vector<std::vector<NeumaierSum>> parts(nchunks);
    for_each_chunk(static_cast<std::size_t>(half), chunk, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
        auto& s = parts[c];
        s.assign(static_cast<std::size_t>(4 * P), NeumaierSum{});
        double left[2], right[2];
        for (std::size_t i = b; i < e; ++i) {
            const double raw = (static_cast<double>(i) + theta) / static_cast<double>(grid);
            const double x = std::ldexp(std::nearbyint(std::ldexp(raw, 32)), -32);
            eval.prefixes(x, cuts_arr, left);
            eval.prefixes(1.0 - x, cuts_arr, right);
            for (int level = 0; level < 2; ++level) {
                const double u = left[1 - level], v = right[1 - level];
                double pu = 1.0, pv = 1.0;
                for (int k = 1; k <= P; ++k) {
                    pu *= u;
                    pv *= v;
                    const double pair = pu + pv;
                    s[static_cast<std::size_t>((level * 2 + 0) * P + k - 1)].add(pair);
                    if (i % 2 == 0) s[static_cast<std::size_t>((level * 2 + 1) * P + k - 1)].add(pair);
                }
            }
        }
    });
    std::vector<NeumaierSum> total(static_cast<std::size_t>(4 * P));
    for (const auto& part : parts)
        for (std::size_t j = 0; j < total.size(); ++j) total[j].add(part[j].value());

    auto moment = [&](int level, int parity, int k) {
        const double n = parity == 0 ? static_cast<double>(grid) : static_cast<double>(grid) / 2.0;
        return total[static_cast<std::size_t>((level * 2 + parity) * P + k - 1)].value() / n;
    };

    MomentTable table;
    table.m1 = t.m1;
    table.grid = grid;
    table.rows.push_back({0, 1.0, 1.0, 0.0});
    for (int k = 1; k <= k_max; ++k) {
        const double scale = std::pow(M_PI, 2 * k);
        const double d = moment(0, 0, 2 * k);
        const double d_half = moment(0, 1, 2 * k);
        const double d_coarse = moment(1, 0, 2 * k);
        // truncation error ~ 2^-m1: Richardson step over a factor 4 in length
        const double trunc = t.m1 >= 3 ? std::fabs(d - d_coarse) / 3.0 : 0.0;
        const double err = (trunc + std::fabs(d - d_half)) / scale;
        table.rows.push_back({k, d / scale, d, err});
        table.odd_moments.push_back(moment(0, 0, 2 * k - 1));
    }
    return table;
}

struct GrowthReport {
    std::vector<double> roots;  // H_k^{1/k}, k = 1..k_max
    bool strictly_increasing = false;
    bool ratios_increasing = false;  // H_{k+1}/H_k
};

inline GrowthReport hk_growth_check(const MomentTable& table) {
    if (table.rows.size() < 3) throw std::domain_error("hk_growth_check: need k_max >= 2");
    GrowthReport g;
    for (std::size_t k = 1; k < table.rows.size(); ++k)
        g.roots.push_back(std::pow(table.rows[k].hk, 1.0 / static_cast<double>(k)));
    g.strictly_increasing = true;
    for (std::size_t i = 1; i < g.roots.size(); ++i)
        if (!(g.roots[i] > g.roots[i - 1])) g.strictly_increasing = false;
    g.ratios_increasing = true;
    for (std::size_t k = 1; k + 2 < table.rows.size(); ++k) {
        const double r0 = table.rows[k + 1].hk / table.rows[k].hk;
        const double r1 = table.rows[k + 2].hk / table.rows[k + 1].hk;
        if (!(r1 > r0)) g.ratios_increasing = false;
    }
    return g;
}

// ---------------------------------------------------------------- distribution

class EmpiricalCDF {
public:
    EmpiricalCDF() = default;
    explicit EmpiricalCDF(std::vector<double> samples) : v_(std::move(samples)) {
        if (v_.empty()) throw std::domain_error("EmpiricalCDF: no samples");
        std::sort(v_.begin(), v_.end());
    }

    std::size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }
    const std::vector<double>& sorted() const { return v_; }
    double lower() const { return v_.front(); }
    double upper() const { return v_.back(); }

    // fraction of samples <= z
    double operator()(double z) const {
        return static_cast<double>(std::upper_bound(v_.begin(), v_.end(), z) - v_.begin()) /
               static_cast<double>(v_.size());
    }

    double quantile(double p) const {
        if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("EmpiricalCDF::quantile: p outside [0, 1]");
        const auto idx = static_cast<std::size_t>(std::min<double>(p * static_cast<double>(v_.size()),
                                                                   static_cast<double>(v_.size() - 1)));
        return v_[idx];
    }

    double median() const {
        const std::size_t n = v_.size();
        return n % 2 == 1 ? v_[n / 2] : 0.5 * (v_[n / 2 - 1] + v_[n / 2]);
    }

    // largest single jump of the step function
    double max_jump() const {
        std::size_t best = 0;
        for (std::size_t i = 0; i < v_.size();) {
            std::size_t j = i;
            while (j < v_.size() && v_[j] == v_[i]) ++j;
            best = std::max(best, j - i);
            i = j;
        }
        return static_cast<double>(best) / static_cast<double>(v_.size());
    }

private:
    std::vector<double> v_;
};

// CDF of scale * f(alpha_i; m1) over the Kronecker points alpha_i = {i * (sqrt5 - 1)/2},
// i = 1..samples. With scale = 1/pi this is the limit law of c0(r/b)/b.
inline EmpiricalCDF empirical_F(TruncatedGSeries t, std::int64_t samples, double scale = 1.0,
                                unsigned threads = 1) {
    if (samples < 1000) throw std::domain_error("empirical_F: samples must be >= 1000");
    const SawtoothSum eval(t);
    std::vector<double> vals(static_cast<std::size_t>(samples));
    constexpr double step = 0.6180339887498949;
    for_each_chunk(vals.size(), 1024, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double x = static_cast<double>(i + 1) * step;
            vals[i] = scale * eval(x - std::floor(x));
        }
    });
    return EmpiricalCDF(std::move(vals));
}

}  // namespace cotsum
