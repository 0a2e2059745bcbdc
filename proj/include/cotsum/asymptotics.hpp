#pragma once

// Euler-Maclaurin machinery, the asymptotic expansion of c0(1/b) and the
// linear coefficient C1(r, b0) of c0(r/b) along b = b0 (mod r).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "core_sums.hpp"
#include "numeric.hpp"

namespace cotsum {

namespace detail {

// B_0, B_2, ..., B_16 as exact rationals; used by the zeta tail so that
// bernoulli() can in turn be built on zeta without circularity.
inline constexpr std::array<double, 9> small_bernoulli = {
    1.0, 1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace detail

inline double zeta_real(double s) {
    if (!(s > 1.0)) throw std::domain_error("zeta_real: requires s > 1");
    if (s >= 40.0) {
        double sum = 1.0;
        for (int k = 2;; ++k) {
            const double t = std::pow(static_cast<double>(k), -s);
            sum += t;
            if (t < 1e-18) break;
        }
        return sum;
    }
    constexpr int N = 12;
    NeumaierSum sum;
    for (int k = N - 1; k >= 1; --k) sum.add(std::pow(static_cast<double>(k), -s));
    const double n = N;
    sum.add(std::pow(n, 1.0 - s) / (s - 1.0));
    sum.add(0.5 * std::pow(n, -s));
    // rising factorial s(s+1)...(s+2j-2) times N^{-s-2j+1}
    double rising = s;
    double power = std::pow(n, -s - 1.0);
    for (int j = 1; j <= 8; ++j) {
        sum.add(detail::small_bernoulli[j] / detail::factorial(2 * j) * rising * power);
        rising *= (s + 2 * j - 1) * (s + 2 * j);
        power /= n * n;
    }
    return sum.value();
}

// zeta(s) - 1 without cancellation for large s.
inline double zeta_minus_one(double s) {
    if (s < 20.0) return zeta_real(s) - 1.0;
    double sum = 0.0;
    const double first = std::pow(2.0, -s);
    for (int k = 2;; ++k) {
        const double t = std::pow(static_cast<double>(k), -s);
        sum += t;
        if (t < 1e-18 * first) break;
    }
    return sum;
}

// Signed Bernoulli number: B_n = (-1)^{n/2+1} 2 n! zeta(n) / (2 pi)^n for even n.
inline double bernoulli(int n) {
    if (n < 0 || n > 60) throw std::domain_error("bernoulli: n out of range [0, 60]");
    if (n == 0) return 1.0;
    if (n == 1) return -0.5;
    if (n % 2 == 1) return 0.0;
    const double mag = 2.0 * detail::factorial(n) * zeta_real(n) / std::pow(2.0 * M_PI, n);
    return (n / 2) % 2 == 1 ? mag : -mag;
}

struct EulerMaclaurinSpec {
    int N = 1;
    std::int64_t Z = 0;
    // derivative(k, u) = f^{(k)}(u); must be valid for 0 <= k <= max_order
    std::function<double(int, double)> derivative;
    int max_order = 0;
    // integral of f over [0, Z]
    std::function<double()> integral;
};

struct EulerMaclaurinResult {
    double sum_estimate = 0.0;
    double remainder_bound = 0.0;
};

// Sum_{nu=0}^{Z} f(nu) = (f(0)+f(Z))/2 + int_0^Z f + sum_j B_2j/(2j)! (f^{(2j-1)}(Z) - f^{(2j-1)}(0)) + r_N
inline EulerMaclaurinResult euler_maclaurin_sum(const EulerMaclaurinSpec& spec) {
    if (spec.N < 1) throw std::domain_error("euler_maclaurin_sum: N must be >= 1");
    if (spec.Z < 0) throw std::domain_error("euler_maclaurin_sum: Z must be >= 0");
    if (!spec.derivative || !spec.integral) throw std::domain_error("euler_maclaurin_sum: missing integrand");
    const int top = 2 * spec.N + 1;
    if (spec.max_order < top)
        throw std::domain_error("euler_maclaurin_sum: derivatives up to order 2N+1 required");
    const double Z = static_cast<double>(spec.Z);
    NeumaierSum s;
    s.add(0.5 * (spec.derivative(0, 0.0) + spec.derivative(0, Z)));
    s.add(spec.integral());
    for (int j = 1; j <= spec.N; ++j)
        s.add(bernoulli(2 * j) / detail::factorial(2 * j) *
              (spec.derivative(2 * j - 1, Z) - spec.derivative(2 * j - 1, 0.0)));

    // |r_N| <= max|B_{2N+1}(x)|/(2N+1)! * int_0^Z |f^{(2N+1)}|, with
    // max|B_n(x)| <= 2 n! zeta(n) / (2 pi)^n.
    static constexpr std::array<double, 8> gl_x = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                                   -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                                   0.7966664774136267,  0.9602898564975363};
    static constexpr std::array<double, 8> gl_w = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                   0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                   0.2223810344533745, 0.1012285362903763};
    NeumaierSum mass;
    for (std::int64_t k = 0; k < spec.Z; ++k) {
        const double mid = static_cast<double>(k) + 0.5;
        for (std::size_t i = 0; i < gl_x.size(); ++i)
            mass.add(0.5 * gl_w[i] * std::fabs(spec.derivative(top, mid + 0.5 * gl_x[i])));
    }
    const double factor = 2.0 * zeta_real(top) / std::pow(2.0 * M_PI, top);
    return {s.value(), factor * mass.value()};
}

// S(L; b) = 2b sum_{a <= L} floor(a/b)/a
inline double s_sum(std::int64_t L, std::int64_t b) {
    if (L < 1 || b < 2) throw std::domain_error("s_sum: requires L >= 1, b >= 2");
    NeumaierSum s;
    for (std::int64_t a = b; a <= L; ++a) s.add(static_cast<double>(a / b) / static_cast<double>(a));
    return 2.0 * static_cast<double>(b) * s.value();
}

// G_L(b) = sum_{a <= L, b does not divide a} ((b/a)(1 + 2 floor(a/b)) - 2)
inline double g_partial(std::int64_t L, std::int64_t b) {
    if (L < 1 || b < 2) throw std::domain_error("g_partial: requires L >= 1, b >= 2");
    NeumaierSum s;
    const double bd = static_cast<double>(b);
    for (std::int64_t a = 1; a <= L; ++a) {
        if (a % b == 0) continue;
        s.add(bd / static_cast<double>(a) * static_cast<double>(1 + 2 * (a / b)) - 2.0);
    }
    return s.value();
}

// Literal partial sum sum_{nu=3}^{nu_max} (-1)^{nu+1} zeta(nu-1)/nu.
inline double const_D1_partial(int nu_max) {
    NeumaierSum s;
    for (int nu = 3; nu <= nu_max; ++nu) s.add((nu % 2 == 1 ? 1.0 : -1.0) * zeta_real(nu - 1) / nu);
    return s.value();
}

// D1 = sum_{nu>=3} (-1)^{nu+1} zeta(nu-1)/nu. The literal series converges like
// the alternating harmonic series, so zeta(nu-1) = 1 + (zeta(nu-1) - 1) is split:
// the ones sum to log 2 - 1/2 and the rest decays like 2^{-nu}.
inline double const_D1(int nu_cutoff = 0) {
    NeumaierSum s;
    s.add(M_LN2 - 0.5);
    for (int nu = 3;; ++nu) {
        const double t = (nu % 2 == 1 ? 1.0 : -1.0) * zeta_minus_one(nu - 1) / nu;
        s.add(t);
        if (nu_cutoff > 0 ? nu >= nu_cutoff : std::fabs(t) < 1e-17) break;
    }
    return s.value();
}

// D_{2,nu} = sum_k k (k^{-nu} - (k+1)^{-nu}). Summation by parts turns the
// partial sum to K into sum_{k<=K} k^{-nu} - K (K+1)^{-nu}, so the series equals zeta(nu).
inline double const_D2(int nu) {
    if (nu < 2) throw std::domain_error("const_D2: requires nu >= 2");
    return zeta_real(nu);
}

// Coefficient E_l of b^{-l} in c0(1/b): for odd l, 2 B_{l+1} zeta(l+1) / ((l+1) pi);
// even l vanish.
inline double coeff_E(int l, int n) {
    if (l < 1 || l > n) throw std::domain_error("coeff_E: requires 1 <= l <= n");
    if (l % 2 == 0) return 0.0;
    const int j = (l + 1) / 2;
    return bernoulli(2 * j) / j * const_D2(2 * j) / M_PI;
}

// Generalized binomial C(-2j, m) = (-1)^m C(2j+m-1, m).
inline double binomial_neg(int two_j, int m) {
    double c = 1.0;
    for (int i = 1; i <= m; ++i) c = c * (two_j + i - 1) / i;
    return m % 2 == 0 ? c : -c;
}

// (2/(l+1) - 2) D_{2,l+1} + sum_{j <= (l+1)/2, j <= N} (B_2j/j) C(-2j, l+1-2j) D_{2,l+1}.
// This combination does not reproduce c0(1/b) (see coeff_E); kept as a reference value.
inline double coeff_E_naive(int l, int n) {
    if (l < 1 || l > n) throw std::domain_error("coeff_E_naive: requires 1 <= l <= n");
    const int N = n / 2 + 1;
    const double d2 = const_D2(l + 1);
    double e = (2.0 / (l + 1) - 2.0) * d2;
    for (int j = 1; 2 * j <= l + 1 && j <= N; ++j) e += bernoulli(2 * j) / j * binomial_neg(2 * j, l + 1 - 2 * j) * d2;
    return e;
}

inline double c0_main(std::int64_t b) {
    const double bd = static_cast<double>(b);
    constexpr double log_two_pi = 1.8378770664093454836;
    constexpr double gamma = 0.57721566490153286061;
    return (bd * std::log(bd) - bd * (log_two_pi - gamma) + 1.0) / M_PI;
}

inline DoubleDouble c0_main_dd(std::int64_t b) {
    const DoubleDouble bd = dd_from_int(b);
    const DoubleDouble inner =
        bd * dd_log(bd) - bd * (dd_const::log_two_pi - dd_const::euler_gamma) + DoubleDouble(1.0);
    return inner * dd_const::inv_pi;
}

struct AsymptoticExpansion {
    int order_n = 0;
    std::vector<double> coeffs_E;  // E_1..E_n

    explicit AsymptoticExpansion(int n) : order_n(n) {
        if (n < 0) throw std::domain_error("AsymptoticExpansion: order must be >= 0");
        for (int l = 1; l <= n; ++l) coeffs_E.push_back(coeff_E(l, n));
    }
    std::int64_t min_b() const { return 6 * (order_n / 2 + 1); }
    static double main(std::int64_t b) { return c0_main(b); }
    double correction(std::int64_t b) const {
        double s = 0.0;
        const double inv = 1.0 / static_cast<double>(b);
        for (int l = order_n; l >= 1; --l) s = (s + coeffs_E[l - 1]) * inv;
        return s;
    }
    double operator()(std::int64_t b) const { return main(b) + correction(b); }
};

struct AsymptoticValue {
    double value = 0.0;
    double last_term = 0.0;
};

inline AsymptoticValue c0_asymptotic(std::int64_t b, int n) {
    const AsymptoticExpansion e(n);
    if (b < e.min_b()) throw std::domain_error("c0_asymptotic: b below the 6N threshold");
    const double last = n == 0 ? 0.0 : std::fabs(e.coeffs_E[n - 1]) * std::pow(static_cast<double>(b), -n);
    return {e(b), last};
}

inline DoubleDouble c0_asymptotic_dd(std::int64_t b, int n) {
    const AsymptoticExpansion e(n);
    if (b < e.min_b()) throw std::domain_error("c0_asymptotic: b below the 6N threshold");
    return c0_main_dd(b) + DoubleDouble(e.correction(b));
}

// g*(z) = pi cot(pi z) - 1/z - 1/(z-1), analytic on [0, 1].
inline double gstar(double z) {
    if (!(z > 0.0 && z < 1.0)) throw std::domain_error("gstar: requires 0 < z < 1");
    // pi cot(pi x) = 1/x - 2 sum_k zeta(2k) x^{2k-1}
    auto series = [](double x) {
        double s = 0.0, p = x;
        for (int k = 1; k < 40; ++k) {
            const double t = zeta_real(2 * k) * p;
            s += t;
            if (std::fabs(t) < 1e-18) break;
            p *= x * x;
        }
        return 2.0 * s;
    };
    constexpr double cut = 0.05;
    if (z < cut) return -1.0 / (z - 1.0) - series(z);
    const double w = 1.0 - z;
    if (w < cut) return -1.0 / z + series(w);
    return M_PI / std::tan(M_PI * z) - 1.0 / z - 1.0 / (z - 1.0);
}

// int_0^1 g*(w) dw by 20-point Gauss-Legendre (g* is analytic on a neighbourhood of [0,1]).
inline double gstar_integral() {
    static constexpr std::array<double, 10> x = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                                 0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                                 0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                                 0.9931285991850949};
    static constexpr std::array<double, 10> w = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                                 0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                                 0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                                 0.0176140071391521};
    NeumaierSum s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s.add(0.25 * w[i] * gstar(0.5 + 0.5 * x[i]));
        s.add(0.25 * w[i] * gstar(0.5 - 0.5 * x[i]));
    }
    return s.value();
}

struct P1Integral {
    double value = 0.0;
    double tail_bound = 0.0;
};

// int_0^inf P1(u)/(s + u r)^2 du with P1(x) = x - floor(x) - 1/2.
// Exact antiderivatives on [k, k+1] for k < intervals; the rest is
// (1/r^2) (psi(a) - log a + 1/(2a)) at a = s/r + intervals, expanded as
// -sum_k B_2k / (2k a^{2k}).
inline P1Integral p1_integral_detail(std::int64_t s, std::int64_t r, int intervals = 64) {
    if (s < 1 || r < 1) throw std::domain_error("p1_integral: requires s >= 1, r >= 1");
    const double rd = static_cast<double>(r);
    NeumaierSum sum;
    for (int k = 0; k < intervals; ++k) {
        const double A = static_cast<double>(s) + k * rd;
        const double B = A + rd;
        // int_A^B ((w - A)/r - 1/2) / w^2 dw / r
        const double piece = (std::log1p(rd / A) - rd / B) / (rd * rd) - 0.5 * (1.0 / A - 1.0 / B) / rd;
        sum.add(piece);
    }
    const double a = static_cast<double>(s) / rd + intervals;
    const double a2 = 1.0 / (a * a);
    double tail = 0.0, p = a2, last = 0.0;
    for (int k = 1; k <= 6; ++k) {
        last = bernoulli(2 * k) / (2.0 * k) * p;
        tail += last;
        p *= a2;
    }
    sum.add(-tail / (rd * rd));
    const double next = std::fabs(bernoulli(14) / 14.0 * p) / (rd * rd);
    return {sum.value(), next};
}

inline double p1_integral(std::int64_t s, std::int64_t r) { return p1_integral_detail(s, r).value; }

struct C1Input {
    std::int64_t r;
    std::int64_t b0;

    C1Input(std::int64_t r_, std::int64_t b0_) : r(r_), b0(b0_) {
        if (r < 1) throw std::domain_error("C1Input: r must be >= 1");
        if (gcd64(r, b0) != 1) throw std::domain_error("C1Input: gcd(r, b0) must be 1");
    }
    // residues taken in [1, r], 0 -> r
    std::int64_t residue(std::int64_t x) const {
        x %= r;
        if (x <= 0) x += r;
        return x;
    }
    std::int64_t s(std::int64_t j) const { return residue(-(b0 % r) * j); }
    std::int64_t t(std::int64_t j) const { return residue((b0 % r) * (j + 1)); }
};

inline double c1_direct(const C1Input& in) {
    const std::int64_t r = in.r;
    if (r == 1) return 0.0;
    const double rd = static_cast<double>(r);
    NeumaierSum logs, recips, p1s;
    for (std::int64_t j = 1; j < r; ++j) {
        const double jd = static_cast<double>(j);
        const std::int64_t s = in.s(j), t = in.t(j);
        logs.add(jd * std::log(static_cast<double>(s) / static_cast<double>(t)));
        recips.add(jd * (1.0 / static_cast<double>(s) - 1.0 / static_cast<double>(t)));
        p1s.add(jd * (p1_integral(s, r) - p1_integral(t, r)));
    }
    // sum_j j * int_0^{1/r} g*(v r) dv = (r(r-1)/2) (1/r) int_0^1 g*
    const double gterm = 0.5 * (rd - 1.0) * gstar_integral();
    return logs.value() / (M_PI * rd * rd) - recips.value() / (2.0 * M_PI * rd) + p1s.value() / M_PI -
           gterm / rd;
}

struct C1Fit {
    double slope = 0.0;
    double confidence = 0.0;
    double slope_full = 0.0;       // fit over the whole list
    double residual_spread = 0.0;  // max top-half residual divided by the b-range
};

namespace detail {

struct LineFit {
    double slope, intercept;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y, std::size_t from,
                             std::size_t to) {
    const double n = static_cast<double>(to - from);
    double mx = 0, my = 0;
    for (std::size_t i = from; i < to; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = from; i < to; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

}  // namespace detail

// Fits y(b) = c0(r/b) - (1/(pi r)) b log b + (b/(pi r))(log 2pi - gamma) ~ C1 b + K.
// The O(1) remainder still carries O(1/b) curvature, so the slope is taken
// from the upper half of b_list and the confidence is the change against the
// full-range fit (never smaller than the residual spread).
inline C1Fit c1_empirical(std::int64_t r, std::int64_t b0, const std::vector<std::int64_t>& b_list) {
    if (b_list.size() < 3) throw std::domain_error("c1_empirical: need at least 3 values of b");
    if (r < 1) throw std::domain_error("c1_empirical: r must be >= 1");
    auto mod = [r](std::int64_t v) { return ((v % r) + r) % r; };
    std::vector<double> xs, ys;
    constexpr double log_two_pi = 1.8378770664093454836;
    constexpr double gamma = 0.57721566490153286061;
    const double rd = static_cast<double>(r);
    for (std::size_t i = 0; i < b_list.size(); ++i) {
        const std::int64_t b = b_list[i];
        if (mod(b) != mod(b0)) throw std::domain_error("c1_empirical: b not congruent to b0 mod r");
        if (i > 0 && b <= b_list[i - 1]) throw std::domain_error("c1_empirical: b_list must be increasing");
        const double bd = static_cast<double>(b);
        const double y = c0(ReducedFraction(r, b)).value - bd * std::log(bd) / (M_PI * rd) +
                         bd * (log_two_pi - gamma) / (M_PI * rd);
        xs.push_back(bd);
        ys.push_back(y);
    }
    const std::size_t n = xs.size();
    const std::size_t half = n / 2;
    const auto full = detail::least_squares(xs, ys, 0, n);
    const auto upper = detail::least_squares(xs, ys, half, n);
    double max_res = 0.0;
    for (std::size_t i = half; i < n; ++i)
        max_res = std::max(max_res, std::fabs(ys[i] - (full.slope * xs[i] + full.intercept)));
    C1Fit out;
    out.slope = upper.slope;
    out.slope_full = full.slope;
    out.residual_spread = max_res / (xs.back() - xs.front());
    out.confidence = std::max(std::fabs(upper.slope - full.slope), out.residual_spread);
    return out;
}

}  // namespace cotsum
