#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "laplace/cantor.hpp"

using namespace laplace;

TEST(CantorComponents, CountsAndLengths) {
    for (int m = 1; m <= 8; ++m) {
        const auto level = cantor_components(m);
        ASSERT_EQ(level.slits.size(), std::size_t{1} << m);
        const double half = 0.5 * std::pow(3.0, 1 - m);
        for (std::size_t i = 0; i < level.slits.size(); ++i) {
            const auto& s = level.slits[i];
            EXPECT_TRUE(s.is_slit());
            EXPECT_DOUBLE_EQ(s.halfspan.real(), half);
            EXPECT_EQ(s.halfspan.imag(), 0.0);
            EXPECT_EQ(s.center.imag(), 0.0);
            // mirror symmetry is exact
            EXPECT_EQ(s.center.real(), -level.slits[level.slits.size() - 1 - i].center.real());
            if (i > 0) {
                EXPECT_GE(s.center.real() - level.slits[i - 1].center.real(), 4 * half - 1e-12);  // gap >= length
            }
        }
        EXPECT_DOUBLE_EQ(level.slits.front().endpoint_lo().real(), -1.5);
        EXPECT_DOUBLE_EQ(level.slits.back().endpoint_hi().real(), 1.5);
    }
}

TEST(CantorComponents, LevelTwoEndpoints) {
    const auto level = cantor_components(2);
    const double lo[] = {-1.5, -5.0 / 6.0, 0.5, 7.0 / 6.0};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(level.slits[i].endpoint_lo().real(), lo[i], 1e-15);
        EXPECT_NEAR(level.slits[i].endpoint_hi().real(), lo[i] + 1.0 / 3.0, 1e-15);
    }
}

TEST(CantorComponents, RejectsOutOfRange) {
    EXPECT_THROW(cantor_components(0), ArgumentError);
    EXPECT_THROW(cantor_components(13), ArgumentError);
}

TEST(CantorDegree, Schedule) {
    EXPECT_EQ(cantor_degree(1), 5);
    EXPECT_EQ(cantor_degree(3), 3);
    EXPECT_EQ(cantor_degree(4), 2);
    EXPECT_EQ(cantor_degree(9), 2);
}

TEST(CantorMeasures, LevelOneIsHalf) {
    const auto m = cantor_measures(1, false);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_NEAR(m[0], 0.5, 1e-12);
}

TEST(CantorMeasures, MirrorSlitsAgreeInGeneralPath) {
    for (int m = 1; m <= 5; ++m) {
        const auto measures = harmonic_measures(cantor_solve(m, false)).measures;
        for (std::size_t i = 0; i < measures.size() / 2; ++i)
            EXPECT_NEAR(measures[i], measures[measures.size() - 1 - i], 1e-9) << "m=" << m;
    }
}

TEST(CantorMeasures, SymmetricPathMatchesGeneralPath) {
    for (int m = 1; m <= 5; ++m) {
        const auto general = cantor_solve(m, false);
        const auto symmetric = cantor_solve(m, true);
        const auto& a = general.expansion.log_coeffs;
        const auto& b = symmetric.expansion.log_coeffs;
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-8) << "m=" << m;
        EXPECT_NEAR(general.expansion.constant, symmetric.expansion.constant, 1e-8);
        for (double x : {0.0, 0.7, 2.0})
            EXPECT_NEAR(eval_expansion(general.expansion, Point(x, 0.4)), eval_expansion(symmetric.expansion, Point(x, 0.4)),
                        1e-8);
        EXPECT_NEAR(general.residual, symmetric.residual, 1e-9);
    }
}

TEST(CantorMeasures, NormalizedThroughLevelEight) {
    for (int m = 6; m <= 8; ++m) EXPECT_NEAR(harmonic_measures(cantor_solve(m, true)).total, 1.0, 1e-9);
}

// The quoted sequence of inner-half sums (0.367776, 0.364965, ...) is
// reproduced starting at level 2: level 2's inner half is its first slit,
// whose measure 0.367776 is the first entry.
TEST(CantorInnerHalf, Sequence) {
    const double want[] = {0.367776, 0.364965, 0.363512, 0.362773, 0.362397, 0.362205, 0.362107};
    for (int m = 2; m <= 8; ++m) EXPECT_NEAR(cantor_inner_half_sum(m), want[m - 2], 1e-6) << "m=" << m;
}

TEST(CantorInnerHalf, DecreasesWithLevel) {
    double prev = 1.0;
    for (int m = 4; m <= 7; ++m) {
        const double s = cantor_inner_half_sum(m);
        EXPECT_LT(s, prev);
        prev = s;
    }
    EXPECT_THROW(cantor_inner_half_sum(1), ArgumentError);
}

TEST(CantorTiming, LevelEightFinishesQuickly) {
    const auto t0 = std::chrono::steady_clock::now();
    cantor_measures(8, true);
    EXPECT_LE(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 120.0);
}
