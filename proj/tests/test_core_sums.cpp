#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <cotsum/core_sums.hpp>

using namespace cotsum;

namespace {

constexpr long double kPi = 3.14159265358979323846264338327950288L;

// Brute-force oracles in long double, straight from the definitions.
long double c0_brute(std::int64_t r, std::int64_t b) {
    long double s = 0;
    for (std::int64_t m = 1; m < b; ++m) {
        const std::int64_t k = (m * r) % b;
        if (2 * k == b) continue;
        s += static_cast<long double>(m) / b / std::tan(kPi * k / b);
    }
    return -s;
}

long double q_brute(std::int64_t r, std::int64_t b) {
    long double s = 0;
    for (std::int64_t m = 1; m < b; ++m) {
        const std::int64_t k = (m * r) % b;
        if (2 * k == b) continue;
        s += static_cast<long double>((m * r) / b) / std::tan(kPi * k / b);
    }
    return s;
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

}  // namespace

TEST(ReducedFraction, Validates) {
    EXPECT_NO_THROW(ReducedFraction(1, 2));
    EXPECT_NO_THROW(ReducedFraction(7, 8));
    EXPECT_NO_THROW(ReducedFraction(1, 1 + 1));
    EXPECT_THROW(ReducedFraction(2, 4), std::domain_error);
    EXPECT_THROW(ReducedFraction(0, 5), std::domain_error);
    EXPECT_THROW(ReducedFraction(6, 5), std::domain_error);
    EXPECT_THROW(ReducedFraction(1, 1), std::domain_error);
    EXPECT_EQ(ReducedFraction(3, 7).inverse(), 5);
}

TEST(ModInverse, RoundTrips) {
    for (std::int64_t m = 2; m < 300; ++m) {
        for (std::int64_t a = 1; a < m; ++a) {
            if (gcd64(a, m) != 1) continue;
            EXPECT_EQ((a * mod_inverse(a, m)) % m, 1);
        }
    }
    EXPECT_THROW(mod_inverse(4, 10), std::domain_error);
    EXPECT_EQ(mod_inverse(-3, 7), 2);
}

TEST(C0, ClosedValues) {
    EXPECT_EQ(c0(ReducedFraction(1, 2)).value, 0.0);
    EXPECT_NEAR(c0(ReducedFraction(1, 3)).value, std::sqrt(3.0) / 9.0, 1e-15);
    EXPECT_NEAR(c0(ReducedFraction(2, 3)).value, -std::sqrt(3.0) / 9.0, 1e-15);
    EXPECT_NEAR(c0(ReducedFraction(1, 3)).value, 0.19245008972987523, 1e-16);
    // c0(1/4) = -(1/4)(cot(pi/4) + 2 cot(pi/2) + 3 cot(3pi/4)) = 1/2
    EXPECT_NEAR(c0(ReducedFraction(1, 4)).value, 0.5, 1e-15);
}

TEST(C0, MatchesBruteForce) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        const std::int64_t b = 2 + static_cast<std::int64_t>(rng() % 3000);
        std::int64_t r = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(b - 1));
        while (gcd64(r, b) != 1) r = r % (b - 1) + 1;
        const ReducedFraction f(r, b);
        const double ref = static_cast<double>(c0_brute(r, b));
        const auto v = c0(f);
        EXPECT_LE(std::fabs(v.value - ref), 4 * v.err_bound + 1e-13) << r << "/" << b;
        EXPECT_EQ(v.terms, b - 1);
        // the long double oracle itself carries ~b * 1e-19 * max|term| of rounding
        EXPECT_LE(rel(c0(f, Precision::oracle).value, ref), 1e-13);
    }
}

TEST(C0, StandardAgreesWithOracleWithinBound) {
    for (std::int64_t b : {1009, 10007, 100003}) {
        for (std::int64_t r : {1, 2, 3, 500, 999}) {
            const ReducedFraction f(r, b);
            const auto s = c0(f);
            const auto o = c0(f, Precision::oracle);
            EXPECT_LE(std::fabs(s.value - o.value), s.err_bound + o.err_bound);
        }
    }
}

TEST(C0, TableModulusMismatchThrows) {
    const CotTable t(10);
    EXPECT_THROW(c0(ReducedFraction(1, 9), t), std::domain_error);
    EXPECT_THROW(q_sum(ReducedFraction(1, 9), t), std::domain_error);
}

TEST(C0, OddnessAndZeroSum) {
    for (std::int64_t b = 3; b <= 200; ++b) {
        double sum = 0;
        for (std::int64_t r = 1; r < b; ++r) {
            if (gcd64(r, b) != 1) continue;
            const double v = c0(ReducedFraction(r, b)).value;
            sum += v;
            EXPECT_NEAR(v, -c0(ReducedFraction(b - r, b)).value, 1e-12 * b);
        }
        EXPECT_NEAR(sum, 0.0, 1e-10 * b);
    }
}

TEST(Vasyunin, EqualsMinusC0AtInverse) {
    for (std::int64_t b = 2; b <= 150; ++b) {
        for (std::int64_t r = 1; r < b; ++r) {
            if (gcd64(r, b) != 1) continue;
            const ReducedFraction f(r, b);
            const ReducedFraction inv(mod_inverse(r, b), b);
            const double target = -c0(inv).value;
            EXPECT_LE(rel(vasyunin(f).value, target), 1e-12) << r << "/" << b;
            EXPECT_LE(rel(vasyunin(f, Precision::oracle).value, target), 1e-12);
        }
    }
}

TEST(Vasyunin, AtOneIsMinusC0) {
    for (std::int64_t b : {5, 17, 1000})
        EXPECT_NEAR(vasyunin(ReducedFraction(1, b)).value, -c0(ReducedFraction(1, b)).value, 1e-12);
}

TEST(QSum, MatchesBruteForceAndVanishesAtOne) {
    for (std::int64_t b = 2; b <= 1000; ++b) EXPECT_EQ(q_sum(ReducedFraction(1, b)).value, 0.0);
    for (std::int64_t b : {7, 64, 999}) {
        for (std::int64_t r = 1; r < b; r += 5) {
            if (gcd64(r, b) != 1) continue;
            const double ref = static_cast<double>(q_brute(r, b));
            EXPECT_LE(rel(q_sum(ReducedFraction(r, b)).value, ref), 1e-12);
            EXPECT_LE(rel(q_sum(ReducedFraction(r, b), Precision::oracle).value, ref), 1e-14);
        }
    }
}

TEST(QSum, DecompositionIdentity) {
    for (std::int64_t b = 2; b <= 300; ++b) {
        const double c1 = c0(ReducedFraction(1, b)).value;
        for (std::int64_t r = 1; r < b; ++r) {
            if (gcd64(r, b) != 1) continue;
            const ReducedFraction f(r, b);
            EXPECT_LE(rel(c0(f).value, (c1 - q_sum(f).value) / static_cast<double>(r)), 1e-10);
        }
    }
}

TEST(Estermann, ValueAtZero) {
    const auto e = estermann_at_zero(ReducedFraction(1, 3));
    EXPECT_EQ(e.real(), 0.25);
    EXPECT_NEAR(e.imag(), std::sqrt(3.0) / 18.0, 1e-15);
}

TEST(FractionalIdentity, HoldsOnRandomInputs) {
    std::mt19937_64 rng(5);
    int done = 0;
    while (done < 300) {
        const std::int64_t b = 2 + static_cast<std::int64_t>(rng() % 400);
        const std::int64_t r = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(b - 1));
        if (gcd64(r, b) != 1) continue;
        const std::int64_t a = static_cast<std::int64_t>(rng() % 1000) - 500;
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 50);
        if (((n * a) % b + b) % b == 0) {
            EXPECT_THROW(fractional_identity_check(a, n, ReducedFraction(r, b)), std::domain_error);
            continue;
        }
        EXPECT_LT(fractional_identity_check(a, n, ReducedFraction(r, b)), 1e-10);
        ++done;
    }
}

TEST(Reciprocity, RequiresRAtLeastTwo) {
    EXPECT_THROW(reciprocity_defect(ReducedFraction(1, 5)), std::domain_error);
}

TEST(Reciprocity, DefectDependsContinuouslyOnTheRatio) {
    // The defect is a smooth function of x = r/b alone: nearby ratios with very
    // different denominators give nearby values.
    const std::pair<ReducedFraction, ReducedFraction> pairs[] = {
        {{3, 10}, {30001, 100000}}, {{2, 5}, {40001, 100000}}, {{5, 7}, {71429, 100000}}};
    for (const auto& [x, y] : pairs) {
        const double dx = std::fabs(static_cast<double>(x.r) / x.b - static_cast<double>(y.r) / y.b);
        EXPECT_LT(std::fabs(reciprocity_defect(x) - reciprocity_defect(y)), 20 * dx + 1e-9);
    }
}
