#pragma once

// Self-check suites run by `cotsum verify`. Each check records the worst
// measured deviation next to the tolerance it is held to.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "core_sums.hpp"
#include "equidist.hpp"
#include "gseries.hpp"
#include "report.hpp"

namespace cotsum {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
};

struct VerifyConfig {
    std::int64_t bmax = 500;
    std::int64_t b = 5003;
    unsigned threads = 1;
};

namespace verify_detail {

inline CheckResult below(const std::string& suite, const std::string& name, double measured, double tol) {
    return {suite, name, std::isfinite(measured) && measured < tol, measured, tol};
}

inline double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

inline std::vector<CheckResult> identities(const VerifyConfig& cfg) {
    const std::string S = "identities";
    std::vector<CheckResult> out;
    double vas = 0, dec = 0, odd = 0, total = 0;
    for (std::int64_t b = 2; b <= cfg.bmax; ++b) {
        const CotTable table(b);
        std::vector<double> c(static_cast<std::size_t>(b), 0.0);
        for (std::int64_t r = 1; r < b; ++r)
            if (gcd64(r, b) == 1) c[static_cast<std::size_t>(r)] = cotsum::c0(ReducedFraction(r, b), table).value;
        const double c1 = c[1];
        NeumaierSum sum;
        for (std::int64_t r = 1; r < b; ++r) {
            if (gcd64(r, b) != 1) continue;
            const ReducedFraction f(r, b);
            const double cr = c[static_cast<std::size_t>(r)];
            sum.add(cr);
            vas = std::max(vas, rel(vasyunin(f).value, -c[static_cast<std::size_t>(f.inverse())]));
            const double q = q_sum(f, table).value;
            dec = std::max(dec, rel((c1 - q) / static_cast<double>(r), cr));
            odd = std::max(odd, std::fabs(c[static_cast<std::size_t>(b - r)] + cr) / static_cast<double>(b));
        }
        total = std::max(total, std::fabs(sum.value()) / static_cast<double>(b));
    }
    out.push_back(below(S, "vasyunin relation V(r/b) = -c0(rbar/b), relative", vas, 1e-6));
    out.push_back(below(S, "decomposition c0 = (c0(1/b) - Q)/r, relative", dec, 1e-6));
    out.push_back(below(S, "oddness c0((b-r)/b) = -c0(r/b), absolute / b", odd, 1e-9));
    out.push_back(below(S, "sum over r of c0(r/b) vanishes, absolute / b", total, 1e-9));

    out.push_back(below(S, "c0(1/2) = 0 exactly", std::fabs(cotsum::c0(ReducedFraction(1, 2)).value), 1e-300));
    out.push_back(below(S, "c0(1/3) = sqrt(3)/9",
                        std::fabs(cotsum::c0(ReducedFraction(1, 3)).value - std::sqrt(3.0) / 9.0), 1e-12));
    double qmax = 0;
    for (std::int64_t b = 2; b <= std::max<std::int64_t>(cfg.bmax, 1000); ++b)
        qmax = std::max(qmax, std::fabs(q_sum(ReducedFraction(1, b)).value));
    out.push_back(below(S, "Q(1/b) = 0 exactly", qmax, 1e-300));

    std::mt19937_64 rng(20240917);
    double frac = 0;
    for (int i = 0; i < 1000;) {
        const std::int64_t b = std::uniform_int_distribution<std::int64_t>(2, 200)(rng);
        const std::int64_t r = std::uniform_int_distribution<std::int64_t>(1, b - 1)(rng);
        const std::int64_t a = std::uniform_int_distribution<std::int64_t>(1, 1000)(rng);
        const std::int64_t n = std::uniform_int_distribution<std::int64_t>(1, 1000)(rng);
        if (gcd64(r, b) != 1 || (n * a) % b == 0) continue;
        frac = std::max(frac, fractional_identity_check(a, n, ReducedFraction(r, b)));
        ++i;
    }
    out.push_back(below(S, "fractional-part identity, 1000 random cases", frac, 1e-10));
    return out;
}

inline std::vector<CheckResult> asymptotics(const VerifyConfig&) {
    const std::string S = "asymptotics";
    std::vector<CheckResult> out;

    EulerMaclaurinSpec poly;
    poly.N = 1;
    poly.Z = 10;
    poly.max_order = 3;
    poly.derivative = [](int k, double u) {
        switch (k) {
            case 0: return u * u;
            case 1: return 2 * u;
            case 2: return 2.0;
            default: return 0.0;
        }
    };
    poly.integral = [] { return 1000.0 / 3.0; };
    const auto em = euler_maclaurin_sum(poly);
    out.push_back(below(S, "Euler-Maclaurin exact on nu^2 (Z=10)", std::fabs(em.sum_estimate - 385.0), 1e-12));

    // ladder of scaled residuals |R_n(b)| b^{n+1}
    const std::vector<std::int64_t> ladder = {200, 400, 800, 1600, 3200};
    std::vector<DoubleDouble> exact;
    for (auto b : ladder) exact.push_back(c0_dd(ReducedFraction(1, b)));
    std::vector<double> top(3);
    for (int n = 0; n <= 2; ++n) {
        std::vector<double> sc;
        for (std::size_t i = 0; i < ladder.size(); ++i)
            sc.push_back(std::fabs(static_cast<double>(exact[i] - c0_asymptotic_dd(ladder[i], n))) *
                         std::pow(static_cast<double>(ladder[i]), n + 1));
        const double lo = *std::min_element(sc.begin(), sc.end());
        const double hi = *std::max_element(sc.begin(), sc.end());
        top[static_cast<std::size_t>(n)] = sc.back();
        // bounded: never grows past its starting size
        out.push_back(below(S, "scaled residual |R_" + std::to_string(n) + "(b)| b^" + std::to_string(n + 1) +
                                   " does not grow (last/first)",
                            sc.back() / sc.front(), 1.5));
        if (n == 0) out.push_back(below(S, "n = 0 scaled residual variation (max/min)", hi / lo, 3.0));
    }
    const double r0 = top[0] / 3200.0, r1 = top[1] / (3200.0 * 3200.0);
    out.push_back(below(S, "adding E_1 shrinks the residual at b = 3200 (R_1/R_0)", r1 / r0, 0.1));

    double cmin = 1e300, cmax = 0;
    for (std::int64_t b : {10, 50, 100}) {
        const std::int64_t L = 100 * b;
        const double rhs = -std::log(static_cast<double>(L) / b) +
                           b * (std::log(static_cast<double>(L)) + 0.57721566490153286061) - 2.0 * L + s_sum(L, b) -
                           0.57721566490153286061;
        const double c = std::fabs(g_partial(L, b) - rhs) * static_cast<double>(L) / b;
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    out.push_back(below(S, "G_L(b) expansion: fitted O(b/L) constant", cmax, 1.0));
    out.push_back(below(S, "G_L(b) expansion: constant stable across b (max/min)", cmax / cmin, 2.0));

    const std::vector<std::pair<int, int>> pairs = {{2, 1}, {3, 1}, {3, 2}, {5, 2}};
    double worst = 0;
    for (auto [r, b0] : pairs) {
        std::vector<std::int64_t> bs;
        for (std::int64_t b = 101; b <= 5001; ++b)
            if (b % r == b0 % r) bs.push_back(b);
        const auto fit = c1_empirical(r, b0, bs);
        worst = std::max(worst, std::fabs(fit.slope - c1_direct(C1Input(r, b0))) / fit.confidence);
    }
    out.push_back(below(S, "C1 closed form within fit confidence (|diff|/confidence)", worst, 1.0));
    return out;
}

inline std::vector<CheckResult> gseries(const VerifyConfig& cfg) {
    const std::string S = "gseries";
    std::vector<CheckResult> out;
    std::mt19937_64 rng(7);

    {
        const SawtoothSum f(TruncatedGSeries(10));
        double worst = 0;
        for (int i = 0; i < 10000; ++i) {
            const double x = std::ldexp(static_cast<double>(rng() >> 32), -32);
            worst = std::max(worst, std::fabs(f(x) + f(1.0 - x)));
        }
        out.push_back(below(S, "f(x) = -f(1-x) on dyadic points", worst, 1e-300));
    }
    {
        bool ok = true;
        for (double a : {0.6180339887498949, std::sqrt(2.0) - 1.0, M_PI - 3.0, std::exp(1.0) - 2.0}) {
            const auto cf = cf_expand(a, 60);
            for (std::size_t n = 1; n < cf.convergents.size(); ++n) {
                const auto& c = cf.convergents[n];
                const auto& p = cf.convergents[n - 1];
                const __int128 det = static_cast<__int128>(c.p) * p.q - static_cast<__int128>(p.p) * c.q;
                if (det != (n % 2 == 1 ? 1 : -1)) ok = false;
            }
        }
        out.push_back({S, "convergent determinant p_n q_{n-1} - p_{n-1} q_n = (-1)^{n+1}", ok, ok ? 0.0 : 1.0, 0.5});
    }
    {
        const auto golden = convergence_classifier(cf_expand(0.6180339887498949, 100));
        const auto third = convergence_classifier(cf_expand(1.0 / 3.0, 100));
        // a_1 = 2, a_{m+1} = 2^{q_m}: log q_{m+1} = log(a_{m+1} q_m + q_{m-1})
        std::vector<double> log_q = {0.0, std::log(2.0)};
        double q_prev = 1.0, q = 2.0;
        for (int m = 1; m < 4; ++m) {
            const double lq = q * M_LN2 + std::log(q) + std::log1p(q_prev / (std::exp2(q) * q));
            log_q.push_back(lq);
            q_prev = q;
            q = std::exp(lq);
        }
        const auto liou = convergence_classifier(log_q, false);
        const bool ok = golden.verdict == Verdict::converges && third.verdict == Verdict::converges &&
                        liou.verdict == Verdict::diverges;
        out.push_back({S, "classifier: golden ratio / 1/3 converge, Liouville-type diverges", ok, ok ? 0.0 : 1.0, 0.5});
    }
    {
        const TruncatedGSeries t(6);
        const double parseval = parseval_sum(fourier_coeffs_f(t, 1000000));
        const SawtoothSum f(t);
        NeumaierSum q;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const double v = f((i + 0.5) / n + 1e-7);
            q.add(v * v);
        }
        out.push_back(below(S, "Parseval at m1 = 6 (relative)", std::fabs(parseval - q.value() / n) / parseval, 1e-3));
    }
    {
        const auto table = hk_table(6, TruncatedGSeries(14), 1 << 13, cfg.threads);
        out.push_back(below(S, "H_0 = 1", std::fabs(table.at(0).hk - 1.0), 1e-300));
        out.push_back(below(S, "H_1 vs 5/36 (|diff| minus reported error)",
                            std::fabs(table.at(1).hk - 5.0 / 36.0) - table.at(1).error, 0.002));
        double odd = 0;
        for (double v : table.odd_moments) odd = std::max(odd, std::fabs(v));
        out.push_back(below(S, "odd moments of f vanish", odd, 1e-9));
        bool pos = true;
        for (const auto& row : table.rows) pos = pos && row.d2k > 0;
        out.push_back({S, "D_2k > 0", pos, pos ? 0.0 : 1.0, 0.5});
        const auto growth = hk_growth_check(table);
        out.push_back({S, "H_k^{1/k} increasing for k = 1..6", growth.strictly_increasing,
                       growth.strictly_increasing ? 0.0 : 1.0, 0.5});
    }
    {
        // two evaluators converge together as truncations grow
        std::vector<double> xs(400);
        for (auto& x : xs) x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        std::vector<double> dist;
        for (int m1 : {8, 10, 12}) {
            const SawtoothSum f(TruncatedGSeries{m1});
            const DivisorSineSeries g(std::int64_t{1} << m1);
            NeumaierSum s;
            for (double x : xs) s.add((f(x) - g(x)) * (f(x) - g(x)));
            dist.push_back(std::sqrt(s.value() / static_cast<double>(xs.size())));
        }
        const bool ok = dist[1] < dist[0] && dist[2] < dist[1];
        out.push_back({S, "L2(f_eval - g_fourier_eval) decreasing in truncation", ok, dist[2], dist[1]});
    }
    return out;
}

inline std::vector<CheckResult> moments(const VerifyConfig& cfg) {
    const std::string S = "moments";
    std::vector<CheckResult> out;
    const ScanWindow w(cfg.b, 0.6, 0.8);
    const auto table = hk_table(1, TruncatedGSeries(14), 1 << 14, cfg.threads);
    const double H1 = table.at(1).hk;
    const auto rep = scan(w, 1, {cfg.threads, nullptr});
    const double width = w.a1 - w.a0;
    const double target_c0 = H1 * width;
    const double E1 = H1 / 3.0;
    const double target_q = E1 * (std::pow(w.a1, 3) - std::pow(w.a0, 3));
    out.push_back(below(S, "2nd c0 moment vs H_1 (A1-A0), relative", std::fabs(rep.moments_c0[1] / target_c0 - 1), 0.15));
    out.push_back(below(S, "2nd Q moment vs E_1 (A1^3-A0^3), relative", std::fabs(rep.moments_q[1] / target_q - 1), 0.15));
    const double h_from_c0 = rep.moments_c0[1] / width;
    const double h_from_q = 3.0 * rep.moments_q[1] / (std::pow(w.a1, 3) - std::pow(w.a0, 3));
    out.push_back(below(S, "H_1 = 3 E_1 from the two scan normalizations, relative",
                        std::fabs(h_from_c0 / h_from_q - 1), 0.15));

    const auto pts = scan_points(w.b, w.r_lo(), w.r_hi(), cfg.threads);
    NeumaierSum a, bsum;
    std::vector<double> qv, qa;
    for (const auto& p : pts) {
        a.add(p.c0 * p.c0);
        const double qr = p.q / static_cast<double>(p.r);
        bsum.add(qr * qr);
        qv.push_back(p.q);
        qa.push_back(q_approx(p.r, w.b, 10));
    }
    const double lb = std::log(static_cast<double>(w.b));
    out.push_back(below(S, "moment bridge sum (Q/r)^2 vs sum c0^2, relative / (log^2 b / b)",
                        std::fabs(bsum.value() / a.value() - 1) / (lb * lb / static_cast<double>(w.b)), 10.0));

    auto pearson = [](const std::vector<double>& x, const std::vector<double>& y) {
        const double n = static_cast<double>(x.size());
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
        mx /= n;
        my /= n;
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
            syy += (y[i] - my) * (y[i] - my);
        }
        return sxy / std::sqrt(sxx * syy);
    };
    out.push_back(below(S, "1 - corr(Q, q_approx with m1 = 10)", 1.0 - pearson(qv, qa), 0.05));

    const auto loc = inverse_localization_count(w, 0.3, 0.1);
    out.push_back(below(S, "inverse localization count/expected at (0.3, 0.1)",
                        std::fabs(static_cast<double>(loc.count) / loc.expected - 1), 0.15));
    std::int64_t parts = 0;
    for (int i = 0; i < 10; ++i) parts += inverse_localization_count(w, i / 10.0, 0.1).count;
    out.push_back(below(S, "10-piece partition recovers the window population",
                        std::fabs(static_cast<double>(parts - rep.count)), 0.5));
    return out;
}

inline std::vector<CheckResult> expsums(const VerifyConfig&) {
    const std::string S = "expsums";
    std::vector<CheckResult> out;
    double ram = 0;
    for (std::int64_t q = 1; q <= 100; ++q) {
        for (std::int64_t n = -100; n <= 100; ++n) {
            NeumaierSum s;
            for (std::int64_t r = 1; r <= q; ++r)
                if (gcd64(r, q) == 1) s.add(cos_2pi_rational(r * n, q));
            ram = std::max(ram, std::fabs(std::round(s.value()) - static_cast<double>(ramanujan(q, n))));
        }
    }
    out.push_back(below(S, "Ramanujan sums: Mobius formula = exponential sum (q, |n| <= 100)", ram, 0.5));

    double weil = 0;
    for (std::int64_t p = 2; p <= 101; ++p) {
        if (euler_phi(p) != p - 1) continue;
        weil = std::max(weil, std::abs(kloosterman(ExpSumParams(1, 1, p))) / (2.0 * std::sqrt(static_cast<double>(p))));
    }
    out.push_back(below(S, "Weil bound |K(1,1,p)| / (2 sqrt p), p <= 101", weil, 1.0 + 1e-12));

    double phi = 0, sym = 0, mu = 0;
    for (std::int64_t b = 2; b <= 200; ++b) {
        const auto k = kloosterman(ExpSumParams(0, 0, b));
        phi = std::max(phi, std::fabs(k.real() - static_cast<double>(euler_phi(b))) + std::fabs(k.imag()));
        mu = std::max(mu, std::abs(kloosterman(ExpSumParams(1, 0, b)) - std::complex<double>(mobius(b), 0.0)));
        for (std::int64_t n = 1; n <= 3; ++n)
            for (std::int64_t m = n + 1; m <= 4; ++m)
                sym = std::max(sym, std::abs(kloosterman(ExpSumParams(n, m, b)) - kloosterman(ExpSumParams(m, n, b))));
    }
    out.push_back(below(S, "K(0,0,b) = phi(b) exactly, b <= 200", phi, 1e-300));
    out.push_back(below(S, "K(n,m,b) = K(m,n,b) exactly, b <= 200", sym, 1e-300));
    out.push_back(below(S, "K(1,0,b) = mu(b), b <= 200", mu, 1e-9));
    return out;
}

}  // namespace verify_detail

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"identities", "asymptotics", "gseries", "moments", "expsums"};
    return names;
}

// Throws std::invalid_argument for an unknown suite; "all" runs every suite.
inline std::vector<CheckResult> run_suite(const std::string& name, const VerifyConfig& cfg) {
    using Fn = std::function<std::vector<CheckResult>(const VerifyConfig&)>;
    static const std::map<std::string, Fn> table = {
        {"identities", verify_detail::identities}, {"asymptotics", verify_detail::asymptotics},
        {"gseries", verify_detail::gseries},       {"moments", verify_detail::moments},
        {"expsums", verify_detail::expsums},
    };
    if (name == "all") {
        std::vector<CheckResult> all;
        for (const auto& s : suite_names()) {
            auto part = table.at(s)(cfg);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    const auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown suite: " + name);
    return it->second(cfg);
}

inline void print_results(std::ostream& os, const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        os << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << "  measured " << format_number(r.measured)
           << "  tolerance " << format_number(r.tolerance) << '\n';
}

}  // namespace cotsum
