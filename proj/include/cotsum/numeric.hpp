#pragma once

// Floating-point building blocks: compensated summation, double-double
// arithmetic, and cotangent/sine evaluation at rational multiples of pi.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

namespace cotsum {

// Kahan-Babuska (Neumaier) summation. Also tracks the largest term seen so
// callers can report a rounding bound of terms * eps * max|term|.
class NeumaierSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        ++terms_;
        const double ax = std::fabs(x);
        if (ax > max_abs_) max_abs_ = ax;
    }
    NeumaierSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }
    std::int64_t terms() const noexcept { return terms_; }
    double max_abs() const noexcept { return max_abs_; }
    double error_bound() const noexcept {
        return static_cast<double>(terms_) * std::numeric_limits<double>::epsilon() * max_abs_;
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double max_abs_ = 0.0;
    std::int64_t terms_ = 0;
};

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, about 106 bits.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
    DoubleDouble t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
    const double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * DoubleDouble(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * DoubleDouble(q2);
    const double q3 = r.hi / b.hi;
    return dd_detail::quick_two_sum(q1, q2) + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }

inline DoubleDouble ldexp(DoubleDouble a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline DoubleDouble dd_from_int(std::int64_t n) {
    // exact for |n| < 2^106
    const double h = static_cast<double>(n);
    const double l = static_cast<double>(n - static_cast<std::int64_t>(h));
    return dd_detail::quick_two_sum(h, l);
}

namespace dd_const {
inline constexpr DoubleDouble pi{3.141592653589793, 1.2246467991473532e-16};
inline constexpr DoubleDouble inv_pi{0.3183098861837907, -1.9678676675182486e-17};
inline constexpr DoubleDouble ln2{0.6931471805599453, 2.3190468138462996e-17};
inline constexpr DoubleDouble euler_gamma{0.5772156649015329, -4.942915152430645e-18};
inline constexpr DoubleDouble log_two_pi{1.8378770664093456, -7.756588316134483e-17};
}  // namespace dd_const

// sin and cos of |x| <= pi/4 by Taylor series.
inline void dd_sincos_reduced(DoubleDouble x, DoubleDouble& s, DoubleDouble& c) {
    const DoubleDouble x2 = x * x;
    DoubleDouble term = x;
    s = x;
    for (int n = 3; n < 60; n += 2) {
        term = term * x2 / dd_from_int(static_cast<std::int64_t>(n - 1) * n);
        term = -term;
        s += term;
        if (std::fabs(term.hi) < 1e-34) break;
    }
    term = DoubleDouble(1.0);
    c = term;
    for (int n = 2; n < 60; n += 2) {
        term = term * x2 / dd_from_int(static_cast<std::int64_t>(n - 1) * n);
        term = -term;
        c += term;
        if (std::fabs(term.hi) < 1e-34) break;
    }
}

inline DoubleDouble dd_exp(DoubleDouble x) {
    if (x.hi > 709.0) throw std::domain_error("dd_exp: overflow");
    if (x.hi < -745.0) return DoubleDouble(0.0);
    const double k = std::nearbyint(x.hi / dd_const::ln2.hi);
    DoubleDouble r = x - dd_const::ln2 * DoubleDouble(k);
    r = ldexp(r, -10);
    DoubleDouble sum(1.0), term(1.0);
    for (int n = 1; n < 30; ++n) {
        term = term * r / DoubleDouble(static_cast<double>(n));
        sum += term;
        if (std::fabs(term.hi) < 1e-36) break;
    }
    for (int i = 0; i < 10; ++i) sum = sum * sum;
    return ldexp(sum, static_cast<int>(k));
}

inline DoubleDouble dd_log(DoubleDouble x) {
    if (!(x.hi > 0.0)) throw std::domain_error("dd_log: argument must be positive");
    DoubleDouble y(std::log(x.hi));
    for (int i = 0; i < 2; ++i) y = y + x * dd_exp(-y) - DoubleDouble(1.0);
    return y;
}

namespace detail {

// Reduce the angle pi*k/b for cot: returns sign and (n, d, use_tan) so that
// cot(pi*k/b) = sign * (use_tan ? tan : cot)(pi*n/d) with n/d in [0, 1/4].
struct ReducedAngle {
    int sign;
    std::int64_t n;
    std::int64_t d;
    bool use_tan;
};

inline ReducedAngle reduce_cot_angle(std::int64_t k, std::int64_t b) {
    k %= b;
    if (k < 0) k += b;
    if (k == 0) throw std::domain_error("cot pole at integer multiple of pi");
    int sign = 1;
    if (2 * k > b) {
        k = b - k;
        sign = -1;
    }
    if (4 * k > b) return {sign, b - 2 * k, 2 * b, true};
    return {sign, k, b, false};
}

}  // namespace detail

// cot(pi*k/b) from the integer residue k mod b.
inline double cot_pi_rational(std::int64_t k, std::int64_t b) {
    const auto a = detail::reduce_cot_angle(k, b);
    const double x = M_PI * (static_cast<double>(a.n) / static_cast<double>(a.d));
    const double v = a.use_tan ? std::tan(x) : std::cos(x) / std::sin(x);
    return a.sign * v;
}

inline DoubleDouble cot_pi_rational_dd(std::int64_t k, std::int64_t b) {
    const auto a = detail::reduce_cot_angle(k, b);
    const DoubleDouble x = dd_const::pi * dd_from_int(a.n) / dd_from_int(a.d);
    DoubleDouble s, c;
    dd_sincos_reduced(x, s, c);
    const DoubleDouble v = a.use_tan ? s / c : c / s;
    return a.sign < 0 ? -v : v;
}

namespace detail {

// sin and cos of 2*pi*k/b: the quadrant and octant come from integer
// arithmetic, so the libm call only sees angles in [0, pi/4].
inline void sincos_2pi_rational(std::int64_t k, std::int64_t b, double& s, double& c) {
    k %= b;
    if (k < 0) k += b;
    const std::int64_t q = (4 * k) / b;
    std::int64_t j = 4 * k - q * b;  // angle within the quadrant is pi*j/(2b)
    bool swap = false;
    if (2 * j > b) {
        j = b - j;
        swap = true;
    }
    double ss = 0.0, cc = 1.0;
    if (j != 0) {
        const double x = M_PI * (static_cast<double>(j) / static_cast<double>(2 * b));
        ss = std::sin(x);
        cc = std::cos(x);
    }
    if (swap) std::swap(ss, cc);
    switch (q) {
        case 0: s = ss, c = cc; break;
        case 1: s = cc, c = -ss; break;
        case 2: s = -ss, c = -cc; break;
        default: s = -cc, c = ss; break;
    }
    if (s == 0.0) s = 0.0;
    if (c == 0.0) c = 0.0;
}

}  // namespace detail

inline double sin_2pi_rational(std::int64_t k, std::int64_t b) {
    double s, c;
    detail::sincos_2pi_rational(k, b, s, c);
    return s;
}

inline double cos_2pi_rational(std::int64_t k, std::int64_t b) {
    double s, c;
    detail::sincos_2pi_rational(k, b, s, c);
    return c;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace cotsum
