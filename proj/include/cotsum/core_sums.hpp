#pragma once

// Cotangent sums c0(r/b), Vasyunin sums, the floor-weighted sum Q(r/b) and
// the identities tying them together.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace cotsum {

struct ReducedFraction {
    std::int64_t r;
    std::int64_t b;

    ReducedFraction(std::int64_t r_, std::int64_t b_) : r(r_), b(b_) {
        if (b < 2) throw std::domain_error("ReducedFraction: b must be >= 2");
        if (r < 1 || r > b) throw std::domain_error("ReducedFraction: r must lie in [1, b]");
        if (gcd64(r, b) != 1)
            throw std::domain_error("ReducedFraction: gcd(" + std::to_string(r) + ", " +
                                    std::to_string(b) + ") != 1");
    }

    std::int64_t inverse() const;
};

struct SumValue {
    double value = 0.0;
    double err_bound = 0.0;
    std::int64_t terms = 0;
};

enum class Precision { standard, oracle };

// Returns x in [1, m-1] with a*x = 1 (mod m).
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    if (m < 2) throw std::domain_error("mod_inverse: modulus must be >= 2");
    a %= m;
    if (a < 0) a += m;
    std::int64_t old_r = a, r = m, old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1)
        throw std::domain_error("mod_inverse: " + std::to_string(a) + " not invertible mod " +
                                std::to_string(m));
    old_s %= m;
    if (old_s < 0) old_s += m;
    return old_s;
}

inline std::int64_t ReducedFraction::inverse() const { return mod_inverse(r, b); }

// cot(pi*j/b) for j = 0..b-1 (entry 0 unused and set to 0).
class CotTable {
public:
    explicit CotTable(std::int64_t b) : b_(b), cot_(static_cast<std::size_t>(b), 0.0) {
        if (b < 2) throw std::domain_error("CotTable: b must be >= 2");
        for (std::int64_t j = 1; j < b; ++j) cot_[static_cast<std::size_t>(j)] = cot_pi_rational(j, b);
    }
    std::int64_t modulus() const noexcept { return b_; }
    double operator[](std::int64_t j) const noexcept { return cot_[static_cast<std::size_t>(j)]; }

private:
    std::int64_t b_;
    std::vector<double> cot_;
};

namespace detail {

// Walks m = 1..b-1 with residue k = m*r mod b and floor(m*r/b) maintained incrementally.
template <class Visit>
void walk_residues(std::int64_t r, std::int64_t b, Visit&& visit) {
    const std::int64_t step = r % b;
    const std::int64_t wraps = r / b;
    std::int64_t k = 0;
    std::int64_t fl = 0;
    for (std::int64_t m = 1; m < b; ++m) {
        k += step;
        fl += wraps;
        if (k >= b) {
            k -= b;
            ++fl;
        }
        visit(m, k, fl);
    }
}

inline SumValue finish(const NeumaierSum& s, double scale) {
    return {s.value() * scale, s.error_bound() * std::fabs(scale), s.terms()};
}

}  // namespace detail

inline SumValue c0(const ReducedFraction& f, const CotTable& table) {
    if (table.modulus() != f.b) throw std::domain_error("c0: cot table built for a different b");
    NeumaierSum s;
    detail::walk_residues(f.r, f.b, [&](std::int64_t m, std::int64_t k, std::int64_t) {
        s.add(static_cast<double>(m) * table[k]);
    });
    return detail::finish(s, -1.0 / static_cast<double>(f.b));
}

inline DoubleDouble c0_dd(const ReducedFraction& f) {
    DoubleDouble s(0.0);
    detail::walk_residues(f.r, f.b, [&](std::int64_t m, std::int64_t k, std::int64_t) {
        if (2 * k == f.b) return;
        s += dd_from_int(m) * cot_pi_rational_dd(k, f.b);
    });
    return -(s / dd_from_int(f.b));
}

inline SumValue c0(const ReducedFraction& f, Precision p = Precision::standard) {
    if (p == Precision::oracle) {
        const DoubleDouble v = c0_dd(f);
        const double value = static_cast<double>(v);
        const double bound = std::fabs(value) * std::numeric_limits<double>::epsilon() +
                             static_cast<double>(f.b) * std::fabs(v.hi) * 0x1p-100;
        return {value, bound, f.b - 1};
    }
    return c0(f, CotTable(f.b));
}

// V(r/b) = sum_m {m r/b} cot(pi m/b); equals -c0(rbar/b).
inline SumValue vasyunin(const ReducedFraction& f, Precision p = Precision::standard) {
    if (p == Precision::oracle) {
        DoubleDouble s(0.0);
        detail::walk_residues(f.r, f.b, [&](std::int64_t m, std::int64_t k, std::int64_t) {
            if (2 * m == f.b) return;
            s += dd_from_int(k) * cot_pi_rational_dd(m, f.b);
        });
        const double value = static_cast<double>(s / dd_from_int(f.b));
        return {value, std::fabs(value) * std::numeric_limits<double>::epsilon(), f.b - 1};
    }
    const CotTable table(f.b);
    NeumaierSum s;
    detail::walk_residues(f.r, f.b, [&](std::int64_t m, std::int64_t k, std::int64_t) {
        s.add(static_cast<double>(k) * table[m]);
    });
    return detail::finish(s, 1.0 / static_cast<double>(f.b));
}

inline SumValue q_sum(const ReducedFraction& f, const CotTable& table) {
    if (table.modulus() != f.b) throw std::domain_error("q_sum: cot table built for a different b");
    NeumaierSum s;
    detail::walk_residues(f.r, f.b, [&](std::int64_t, std::int64_t k, std::int64_t fl) {
        s.add(static_cast<double>(fl) * table[k]);
    });
    return detail::finish(s, 1.0);
}

inline SumValue q_sum(const ReducedFraction& f, Precision p = Precision::standard) {
    if (p == Precision::oracle) {
        DoubleDouble s(0.0);
        detail::walk_residues(f.r, f.b, [&](std::int64_t, std::int64_t k, std::int64_t fl) {
            if (fl == 0 || 2 * k == f.b) return;
            s += dd_from_int(fl) * cot_pi_rational_dd(k, f.b);
        });
        const double value = static_cast<double>(s);
        return {value, std::fabs(value) * std::numeric_limits<double>::epsilon(), f.b - 1};
    }
    return q_sum(f, CotTable(f.b));
}

// E(0, r/b, 0) = 1/4 + (i/2) c0(r/b)
inline std::complex<double> estermann_at_zero(const ReducedFraction& f) {
    return {0.25, 0.5 * c0(f).value};
}

// Checks {na/b} = 1/2 - (1/2b) sum cot(pi m r/b) sin(2 pi m n r a/b) together with
// the companion cosine sum (which vanishes); returns the larger residual.
inline double fractional_identity_check(std::int64_t a, std::int64_t n, const ReducedFraction& f) {
    const std::int64_t b = f.b;
    auto mod = [b](std::int64_t x) {
        x %= b;
        return x < 0 ? x + b : x;
    };
    const std::int64_t na = static_cast<std::int64_t>((static_cast<__int128>(mod(n)) * mod(a)) % b);
    if (na == 0) throw std::domain_error("fractional_identity_check: b divides n*a");
    const std::int64_t step = static_cast<std::int64_t>((static_cast<__int128>(na) * f.r) % b);

    const CotTable table(b);
    NeumaierSum sin_sum, cos_sum;
    std::int64_t k = 0;      // m*r mod b
    std::int64_t phase = 0;  // m*n*r*a mod b
    for (std::int64_t m = 1; m < b; ++m) {
        k += f.r;
        if (k >= b) k -= b;
        phase += step;
        if (phase >= b) phase -= b;
        sin_sum.add(table[k] * sin_2pi_rational(phase, b));
        cos_sum.add(table[k] * cos_2pi_rational(phase, b));
    }
    const double x = static_cast<double>(na) / static_cast<double>(b);
    const double rhs = 0.5 - sin_sum.value() / (2.0 * static_cast<double>(b));
    const double cos_residual = std::fabs(cos_sum.value()) / (2.0 * static_cast<double>(b));
    return std::max(std::fabs(x - rhs), cos_residual);
}

// D(r/b) = c0(r/b) + (b/r) c0((b mod r)/r) - 1/(pi r), using 1-periodicity of c0.
inline double reciprocity_defect(const ReducedFraction& f) {
    if (f.r < 2) throw std::domain_error("reciprocity_defect: requires r >= 2");
    const ReducedFraction inv(f.b % f.r, f.r);
    const double rr = static_cast<double>(f.r);
    return c0(f).value + static_cast<double>(f.b) / rr * c0(inv).value - 1.0 / (M_PI * rr);
}

}  // namespace cotsum
