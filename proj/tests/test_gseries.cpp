#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <cotsum/gseries.hpp>

using namespace cotsum;

TEST(Sawtooth, Convention) {
    EXPECT_EQ(sawtooth(0.0), 0.0);
    EXPECT_EQ(sawtooth(3.0), 0.0);
    EXPECT_EQ(sawtooth(0.25), 0.5);
    EXPECT_EQ(sawtooth(0.5), 0.0);
    EXPECT_EQ(sawtooth(-0.25), -0.5);
}

TEST(TruncatedGSeries, Validates) {
    EXPECT_THROW(TruncatedGSeries(0), std::domain_error);
    EXPECT_THROW(TruncatedGSeries(41), std::domain_error);
    EXPECT_EQ(TruncatedGSeries(10).length(), 1024);
}

TEST(FEval, Examples) {
    for (int m1 : {1, 5, 12}) EXPECT_EQ(f_eval(0.0, TruncatedGSeries(m1)), 0.0);
    EXPECT_EQ(f_eval(0.5, TruncatedGSeries(2)), 0.0);
    EXPECT_EQ(f_eval(0.25, TruncatedGSeries(1)), 0.5);
    EXPECT_THROW(f_eval(std::nan(""), TruncatedGSeries(3)), std::domain_error);
}

TEST(FEval, RationalEvaluatorAgreesWhenNoJumpIsHit) {
    // for q <= 2^m1 the term l = q sits on a jump, where only the exact
    // residue evaluator applies the B(integer) = 0 convention
    for (std::int64_t q : {1031, 4099, 65537}) {
        for (std::int64_t p = 1; p < q; p += std::max<std::int64_t>(1, q / 13)) {
            const TruncatedGSeries t(10);
            const double x = static_cast<double>(p) / static_cast<double>(q);
            EXPECT_NEAR(f_eval_rational(p, q, t), f_eval(x, t), 1e-9) << p << "/" << q;
        }
    }
    EXPECT_EQ(f_eval_rational(1, 2, TruncatedGSeries(8)), 0.0);
}

TEST(FEval, OddAboutOneHalfOnDyadicPoints) {
    std::mt19937_64 rng(2);
    const TruncatedGSeries t(12);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::ldexp(static_cast<double>(rng() >> 32), -32);
        EXPECT_EQ(f_eval(x, t), -f_eval(1.0 - x, t));
    }
}

TEST(DivisorCounts, MatchesTrialDivision) {
    const auto tau = divisor_counts(5000);
    for (std::int64_t n = 1; n <= 5000; ++n) {
        std::uint32_t c = 0;
        for (std::int64_t d = 1; d <= n; ++d) c += n % d == 0;
        ASSERT_EQ(tau[static_cast<std::size_t>(n)], c) << n;
    }
}

TEST(GFourier, ZeroAndOddness) {
    EXPECT_EQ(g_fourier_eval(0.0, 1000), 0.0);
    const DivisorSineSeries g(4096);
    for (double x : {0.1, 0.37, 0.5 + 1e-3})
        EXPECT_NEAR(g(1.0 - x), -g(x), 1e-12);
    EXPECT_THROW(g_fourier_eval(0.3, 0), std::domain_error);
}

TEST(GFourier, MatchesDirectSineSum) {
    const auto tau = divisor_counts(3000);
    for (double x : {0.123, 0.61803, 0.9}) {
        long double s = 0;
        for (int l = 1; l <= 3000; ++l) s += tau[static_cast<std::size_t>(l)] / static_cast<long double>(l) *
                                            std::sin(2 * 3.14159265358979323846264338327950288L * l * x);
        EXPECT_NEAR(g_fourier_eval(x, 3000), static_cast<double>(2 * s / M_PI), 1e-11) << x;
    }
}

TEST(GFourier, ConvergesToFEvalInL2) {
    // exact L2 distances from the Fourier side: 0.031 at 2^16, 0.0057 at 2^22
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs(300);
    for (auto& x : xs) x = u(rng);
    std::vector<double> dist;
    for (int m : {12, 16, 22}) {
        const SawtoothSum f(TruncatedGSeries{m});
        const DivisorSineSeries g(std::int64_t{1} << m);
        double s = 0;
        for (double x : xs) s += (f(x) - g(x)) * (f(x) - g(x));
        dist.push_back(std::sqrt(s / static_cast<double>(xs.size())));
    }
    EXPECT_LT(dist[1], dist[0]);
    EXPECT_LT(dist[2], dist[1]);
    EXPECT_LT(dist[2], 0.01);
}

TEST(FourierCoeffs, DivisorStructure) {
    const auto a = fourier_coeffs_f(TruncatedGSeries(3), 40);
    EXPECT_NEAR(a[0], -1 / M_PI, 1e-16);
    // k = 12: divisors <= 8 are 1, 2, 3, 4, 6
    EXPECT_NEAR(a[11], -5 / (12 * M_PI), 1e-16);
    // k = 16: divisors <= 8 are 1, 2, 4, 8
    EXPECT_NEAR(a[15], -4 / (16 * M_PI), 1e-16);
}

TEST(FourierCoeffs, StableAcrossTruncationsUpToLength) {
    const auto a = fourier_coeffs_f(TruncatedGSeries(5), 200);
    const auto b = fourier_coeffs_f(TruncatedGSeries(6), 200);
    for (int k = 1; k <= 32; ++k) EXPECT_EQ(a[static_cast<std::size_t>(k - 1)], b[static_cast<std::size_t>(k - 1)]);
    bool differs = false;
    for (int k = 33; k <= 200; ++k) differs = differs || a[static_cast<std::size_t>(k - 1)] != b[static_cast<std::size_t>(k - 1)];
    EXPECT_TRUE(differs);
}

TEST(FourierCoeffs, MatchQuadratureOfF) {
    const TruncatedGSeries t(4);
    const auto a = fourier_coeffs_f(t, 20);
    const int n = 1 << 16;
    for (int k = 1; k <= 20; ++k) {
        long double im = 0;
        for (int i = 0; i < n; ++i) {
            const double x = (i + 0.5) / n;
            im -= f_eval(x, t) * std::sin(2 * M_PI * k * x);
        }
        EXPECT_NEAR(static_cast<double>(im / n), a[static_cast<std::size_t>(k - 1)], 2e-4) << k;
    }
}

TEST(FourierCoeffs, Parseval) {
    const TruncatedGSeries t(6);
    const double lhs = parseval_sum(fourier_coeffs_f(t, 1000000));
    const int n = 100000;
    double q = 0;
    for (int i = 0; i < n; ++i) {
        const double v = f_eval((i + 0.5) / n + 1e-7, t);
        q += v * v;
    }
    EXPECT_NEAR(lhs, q / n, 1e-3 * lhs);
}

TEST(ContinuedFraction, GoldenRatio) {
    const auto cf = cf_expand(0.6180339887498949, 100);
    ASSERT_GE(cf.partial_quotients.size(), 30u);
    for (std::size_t i = 0; i + 1 < cf.partial_quotients.size(); ++i) EXPECT_EQ(cf.partial_quotients[i], 1);
    std::int64_t f0 = 1, f1 = 1;
    for (std::size_t i = 1; i < 30; ++i) {
        EXPECT_EQ(cf.convergents[i].q, f1);
        const std::int64_t f2 = f0 + f1;
        f0 = f1;
        f1 = f2;
    }
    EXPECT_TRUE(cf.terminated);
    EXPECT_FALSE(cf.rational);
}

TEST(ContinuedFraction, Rationals) {
    const auto third = cf_expand(1.0 / 3.0, 50);
    ASSERT_EQ(third.partial_quotients.size(), 1u);
    EXPECT_EQ(third.partial_quotients[0], 3);
    EXPECT_EQ(third.convergents.back().q, 3);
    EXPECT_TRUE(third.rational);
    const auto zero = cf_expand(0.0, 10);
    EXPECT_TRUE(zero.rational);
    const std::int64_t qs[] = {7, 15, 1, 292};
    const auto pi_cf = cf_from_quotients(qs);
    EXPECT_EQ(pi_cf.convergents.back().p, 4687);
    EXPECT_EQ(pi_cf.convergents.back().q, 33102);
    EXPECT_THROW(cf_expand(1.0, 5), std::domain_error);
    EXPECT_THROW(cf_expand(-0.1, 5), std::domain_error);
}

TEST(ContinuedFraction, SqrtTwo) {
    const auto cf = cf_expand(std::sqrt(2.0) - 1.0, 100);
    ASSERT_GE(cf.partial_quotients.size(), 15u);
    for (std::size_t i = 0; i + 1 < cf.partial_quotients.size(); ++i) EXPECT_EQ(cf.partial_quotients[i], 2);
}

TEST(ContinuedFraction, DeterminantIdentity) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const auto cf = cf_expand(std::uniform_real_distribution<double>(0, 1)(rng), 60);
        for (std::size_t n = 1; n < cf.convergents.size(); ++n) {
            const auto& c = cf.convergents[n];
            const auto& p = cf.convergents[n - 1];
            const __int128 det = static_cast<__int128>(c.p) * p.q - static_cast<__int128>(p.p) * c.q;
            EXPECT_TRUE(det == (n % 2 == 1 ? 1 : -1));
        }
    }
}

TEST(Classifier, Verdicts) {
    EXPECT_EQ(convergence_classifier(cf_expand(1.0 / 3.0, 50)).verdict, Verdict::converges);
    EXPECT_EQ(convergence_classifier(cf_expand(0.6180339887498949, 100)).verdict, Verdict::converges);
    EXPECT_EQ(convergence_classifier(cf_expand(std::sqrt(2.0) - 1.0, 100)).verdict, Verdict::converges);

    // a_1 = 2, a_{m+1} = 2^{q_m}
    std::vector<double> log_q = {0.0, std::log(2.0)};
    double q_prev = 1.0, q = 2.0;
    for (int m = 1; m < 4; ++m) {
        const double lq = q * M_LN2 + std::log(q) + std::log1p(q_prev / (std::exp2(q) * q));
        log_q.push_back(lq);
        q_prev = q;
        q = std::exp(lq);
    }
    const auto rep = convergence_classifier(log_q, false);
    EXPECT_EQ(rep.verdict, Verdict::diverges);
    for (double t : rep.terms) EXPECT_GE(t, 0.5);

    const double two[] = {0.0};
    EXPECT_THROW(convergence_classifier(std::span<const double>(two, 1), false), std::domain_error);
    EXPECT_STREQ(to_string(Verdict::undecided), "undecided");
}

TEST(Classifier, GoldenSumsMatchDirectPartialSums) {
    const auto cf = cf_expand(0.6180339887498949, 100);
    const auto rep = convergence_classifier(cf);
    double brj = 0;
    for (std::size_t m = 1; m + 1 < cf.convergents.size(); ++m)
        brj += std::log(static_cast<double>(cf.convergents[m + 1].q)) / static_cast<double>(cf.convergents[m].q);
    EXPECT_NEAR(rep.brjuno_sum, brj, 1e-12);
    EXPECT_LE(std::fabs(rep.alternating_sum), rep.brjuno_sum);
}

TEST(HkTable, BasicValues) {
    const auto table = hk_table(6, TruncatedGSeries(14), 1 << 13);
    EXPECT_EQ(table.at(0).hk, 1.0);
    EXPECT_NEAR(table.at(1).hk, 5.0 / 36.0, 0.002);
    EXPECT_LE(std::fabs(table.at(1).hk - 5.0 / 36.0), table.at(1).error + 0.002);
    for (double v : table.odd_moments) EXPECT_EQ(v, 0.0);
    for (const auto& row : table.rows) EXPECT_GT(row.d2k, 0.0);
    EXPECT_THROW(hk_table(0, TruncatedGSeries(5), 4096), std::domain_error);
    EXPECT_THROW(hk_table(2, TruncatedGSeries(5), 100), std::domain_error);
}

TEST(HkTable, ThreadCountDoesNotChangeResult) {
    const auto a = hk_table(3, TruncatedGSeries(10), 1 << 12, 1);
    const auto b = hk_table(3, TruncatedGSeries(10), 1 << 12, 3);
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(a.at(k).hk, b.at(k).hk);
}

TEST(HkTable, H1AgreesWithParsevalOfSameTruncation) {
    const TruncatedGSeries t(12);
    const double parseval = parseval_sum(fourier_coeffs_f(t, 1 << 22)) / (M_PI * M_PI);
    EXPECT_NEAR(hk_table(1, t, 1 << 15).at(1).hk, parseval, 2e-3);
}

TEST(HkGrowth, StrictlyIncreasingRootsAndRatios) {
    const auto g = hk_growth_check(hk_table(6, TruncatedGSeries(14), 1 << 13));
    ASSERT_EQ(g.roots.size(), 6u);
    EXPECT_TRUE(g.strictly_increasing);
    EXPECT_TRUE(g.ratios_increasing);
    EXPECT_THROW(hk_growth_check(hk_table(1, TruncatedGSeries(8), 4096)), std::domain_error);
}

TEST(EmpiricalCDF, Basics) {
    const EmpiricalCDF c({3.0, 1.0, 2.0, 2.0});
    EXPECT_EQ(c(0.5), 0.0);
    EXPECT_EQ(c(2.0), 0.75);
    EXPECT_EQ(c(10.0), 1.0);
    EXPECT_EQ(c.median(), 2.0);
    EXPECT_EQ(c.max_jump(), 0.5);
    EXPECT_EQ(c.quantile(0.0), 1.0);
    EXPECT_THROW(EmpiricalCDF(std::vector<double>{}), std::domain_error);
    EXPECT_THROW(c.quantile(1.5), std::domain_error);
}

TEST(EmpiricalF, SymmetricContinuousAndCentered) {
    const TruncatedGSeries t(12);
    double prev_jump = 1.0;
    for (std::int64_t n : {10000, 100000}) {
        const auto F = empirical_F(t, n);
        const double tol = 2.0 / std::sqrt(static_cast<double>(n));
        for (double z : {0.1, 0.5, 1.0, 2.0}) {
            // F(-z) + F(z) -> 1 (the point mass at -z is negligible)
            EXPECT_NEAR(F(-z) + F(z), 1.0, tol) << z;
        }
        EXPECT_NEAR(F.median(), 0.0, 0.05);
        EXPECT_LE(F.max_jump(), 2.0 / std::sqrt(static_cast<double>(n)));
        EXPECT_LE(F.max_jump(), prev_jump);
        prev_jump = F.max_jump();
    }
    EXPECT_THROW(empirical_F(t, 10), std::domain_error);
}

TEST(EmpiricalF, ScaleAndThreadsAreConsistent) {
    const TruncatedGSeries t(8);
    const auto a = empirical_F(t, 5000, 1.0, 1);
    const auto b = empirical_F(t, 5000, 1.0 / M_PI, 3);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a.sorted()[i] / M_PI, b.sorted()[i]);
}
