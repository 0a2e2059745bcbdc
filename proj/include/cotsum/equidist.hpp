#pragma once

// Scans of c0(r/b) and Q(r/b) over r coprime to b in a window [A0 b, A1 b],
// their normalized moments and empirical distribution, plus Ramanujan and
// Kloosterman sums.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "core_sums.hpp"
#include "gseries.hpp"
#include "numeric.hpp"
#include "parallel.hpp"

namespace cotsum {

inline std::int64_t euler_phi(std::int64_t b) {
    if (b < 1) throw std::domain_error("euler_phi: b must be >= 1");
    std::int64_t result = b;
    for (std::int64_t p = 2; p * p <= b; ++p) {
        if (b % p != 0) continue;
        while (b % p == 0) b /= p;
        result -= result / p;
    }
    if (b > 1) result -= result / b;
    return result;
}

inline int mobius(std::int64_t n) {
    if (n < 1) throw std::domain_error("mobius: n must be >= 1");
    int mu = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

struct ScanWindow {
    std::int64_t b;
    double a0;
    double a1;

    ScanWindow(std::int64_t b_, double a0_, double a1_) : b(b_), a0(a0_), a1(a1_) {
        if (b < 2) throw std::domain_error("ScanWindow: b must be >= 2");
        if (!(0.5 < a0 && a0 < a1 && a1 < 1.0))
            throw std::domain_error("ScanWindow: requires 1/2 < A0 < A1 < 1");
        if (r_hi() < r_lo()) throw std::domain_error("ScanWindow: empty window");
    }
    // endpoints included; the guard absorbs rounding of A*b at exact integers
    std::int64_t r_lo() const { return static_cast<std::int64_t>(std::ceil(a0 * static_cast<double>(b) - 1e-9)); }
    std::int64_t r_hi() const { return static_cast<std::int64_t>(std::floor(a1 * static_cast<double>(b) + 1e-9)); }
};

struct ScanPoint {
    std::int64_t r;
    double c0;
    double q;
};

struct ScanOptions {
    unsigned threads = 1;
    const EmpiricalCDF* reference = nullptr;  // KS distance target, if any
};

// c0(r/b) and Q(r/b) for every r in [r_lo, r_hi] coprime to b, ascending in r.
inline std::vector<ScanPoint> scan_points(std::int64_t b, std::int64_t r_lo, std::int64_t r_hi, unsigned threads = 1) {
    if (b < 2) throw std::domain_error("scan_points: b must be >= 2");
    r_lo = std::max<std::int64_t>(r_lo, 1);
    r_hi = std::min<std::int64_t>(r_hi, b - 1);
    std::vector<std::int64_t> rs;
    for (std::int64_t r = r_lo; r <= r_hi; ++r)
        if (gcd64(r, b) == 1) rs.push_back(r);
    const CotTable table(b);
    std::vector<ScanPoint> out(rs.size());
    for_each_chunk(rs.size(), 32, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const ReducedFraction f(rs[i], b);
            out[i] = {rs[i], c0(f, table).value, q_sum(f, table).value};
        }
    });
    return out;
}

struct ScanReport {
    std::int64_t b = 0;
    double a0 = 0.0;
    double a1 = 0.0;
    std::int64_t phi = 0;
    std::int64_t count = 0;
    std::vector<double> moments_c0;  // sum c0^k / (b^k phi(b)), k = 1..2 k_max
    std::vector<double> moments_q;   // sum Q^k / (b^{2k} phi(b))
    EmpiricalCDF cdf;                // of c0(r/b)/b
    std::optional<double> ks_distance;
    double wall_ms = 0.0;
};

inline double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b_cdf) {
    if (a.empty() || b_cdf.empty()) throw std::domain_error("ks_distance: empty CDF");
    const auto& x = a.sorted();
    const auto& y = b_cdf.sorted();
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double best = 0.0;
    while (i < x.size() || j < y.size()) {
        double z;
        if (j == y.size() || (i < x.size() && x[i] <= y[j]))
            z = x[i];
        else
            z = y[j];
        while (i < x.size() && x[i] <= z) ++i;
        while (j < y.size() && y[j] <= z) ++j;
        best = std::max(best, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return best;
}

// Moments are accumulated sequentially in ascending r from the per-r values,
// so the report does not depend on the thread count.
inline ScanReport scan(const ScanWindow& w, int k_max, const ScanOptions& opt = {}) {
    if (k_max < 1) throw std::domain_error("scan: k_max must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    const auto pts = scan_points(w.b, w.r_lo(), w.r_hi(), opt.threads);
    if (pts.empty()) throw std::domain_error("scan: no r coprime to b in the window");

    ScanReport rep;
    rep.b = w.b;
    rep.a0 = w.a0;
    rep.a1 = w.a1;
    rep.phi = euler_phi(w.b);
    rep.count = static_cast<std::int64_t>(pts.size());
    const int P = 2 * k_max;
    const double bd = static_cast<double>(w.b);
    std::vector<NeumaierSum> mc(static_cast<std::size_t>(P)), mq(static_cast<std::size_t>(P));
    std::vector<double> normalized;
    normalized.reserve(pts.size());
    for (const auto& p : pts) {
        const double x = p.c0 / bd;
        const double y = p.q / (bd * bd);
        normalized.push_back(x);
        double px = 1.0, py = 1.0;
        for (int k = 0; k < P; ++k) {
            px *= x;
            py *= y;
            mc[static_cast<std::size_t>(k)].add(px);
            mq[static_cast<std::size_t>(k)].add(py);
        }
    }
    const double phi = static_cast<double>(rep.phi);
    for (int k = 0; k < P; ++k) {
        rep.moments_c0.push_back(mc[static_cast<std::size_t>(k)].value() / phi);
        rep.moments_q.push_back(mq[static_cast<std::size_t>(k)].value() / phi);
    }
    rep.cdf = EmpiricalCDF(std::move(normalized));
    if (opt.reference) rep.ks_distance = ks_distance(rep.cdf, *opt.reference);
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

// Q(r, b, m1) = (b r / pi) f(b*/r; m1) with b b* = 1 (mod r).
inline double q_approx(std::int64_t r, std::int64_t b, int m1) {
    if (r < 2) throw std::domain_error("q_approx: requires r >= 2");
    if (gcd64(r, b) != 1) throw std::domain_error("q_approx: gcd(r, b) must be 1");
    const std::int64_t bstar = mod_inverse(b, r);
    return static_cast<double>(b) * static_cast<double>(r) / M_PI * f_eval_rational(bstar, r, TruncatedGSeries(m1));
}

struct ExpSumParams {
    std::int64_t n;
    std::int64_t m;
    std::int64_t b;

    ExpSumParams(std::int64_t n_, std::int64_t m_, std::int64_t b_) : n(n_), m(m_), b(b_) {
        if (b < 2) throw std::domain_error("ExpSumParams: b must be >= 2");
    }
};

// K(n, m, b) = sum_{(r,b)=1} e((n r + m r*)/b). The phases are binned by
// residue first, so K(n,m,b) and K(m,n,b) see identical histograms.
inline std::complex<double> kloosterman(const ExpSumParams& p) {
    const std::int64_t b = p.b;
    auto mod = [b](std::int64_t x) {
        x %= b;
        return x < 0 ? x + b : x;
    };
    const std::int64_t n = mod(p.n), m = mod(p.m);
    std::vector<std::int64_t> hist(static_cast<std::size_t>(b), 0);
    for (std::int64_t r = 1; r < b; ++r) {
        if (gcd64(r, b) != 1) continue;
        const std::int64_t rs = mod_inverse(r, b);
        const auto k = static_cast<std::int64_t>((static_cast<__int128>(n) * r + static_cast<__int128>(m) * rs) % b);
        ++hist[static_cast<std::size_t>(k)];
    }
    NeumaierSum re, im;
    for (std::int64_t k = 0; k < b; ++k) {
        const auto c = hist[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        re.add(static_cast<double>(c) * cos_2pi_rational(k, b));
        im.add(static_cast<double>(c) * sin_2pi_rational(k, b));
    }
    return {re.value(), im.value()};
}

// c_q(n) = sum_{d | (q, n)} mu(q/d) d
inline std::int64_t ramanujan(std::int64_t q, std::int64_t n) {
    if (q < 1) throw std::domain_error("ramanujan: q must be >= 1");
    const std::int64_t g = gcd64(q, n);  // gcd(q, 0) = q
    std::int64_t s = 0;
    for (std::int64_t d = 1; d * d <= g; ++d) {
        if (g % d != 0) continue;
        s += mobius(q / d) * d;
        const std::int64_t e = g / d;
        if (e != d) s += mobius(q / e) * e;
    }
    return s;
}

struct LocalizationCount {
    std::int64_t count = 0;
    double expected = 0.0;
};

// Number of r in the window with b*/r in [alpha, alpha + delta], b b* = 1 (mod r).
inline LocalizationCount inverse_localization_count(const ScanWindow& w, double alpha, double delta) {
    if (!(alpha >= 0.0 && delta > 0.0 && alpha + delta <= 1.0))
        throw std::domain_error("inverse_localization_count: requires 0 <= alpha < alpha + delta <= 1");
    LocalizationCount out;
    for (std::int64_t r = w.r_lo(); r <= w.r_hi(); ++r) {
        if (gcd64(r, w.b) != 1) continue;
        const double x = static_cast<double>(mod_inverse(w.b, r)) / static_cast<double>(r);
        if (x >= alpha && x <= alpha + delta) ++out.count;
    }
    out.expected = delta * (w.a1 - w.a0) * static_cast<double>(euler_phi(w.b));
    return out;
}

}  // namespace cotsum
