#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qspectra/errors.hpp"
#include "qspectra/lattice.hpp"

using namespace qspectra::junction;

namespace {

constexpr double kPi = std::numbers::pi;

JunctionParams small(int M = 3, int L_F = 1) {
    JunctionParams p;
    p.M = M;
    p.L_F = L_F;
    return p;
}

}  // namespace

TEST(Lattice, MatrixIsHermitianWithExpectedSize) {
    const auto p = small();
    const auto H = bdg_lattice_matrix(0.7, p, 8, Spin::Up);
    EXPECT_EQ(H.rows(), 2 * 9 * 17);
    EXPECT_LT((H - H.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Lattice, ParticleHoleAndPeriodicity) {
    const auto p = small();
    const auto a = bdg_lattice_oracle(1.2, p, 8);
    const auto b = bdg_lattice_oracle(1.2 + 2 * kPi, p, 8);
    ASSERT_FALSE(a.empty());
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_LT(std::abs(a[i]), 2 * p.Delta);
        EXPECT_NEAR(a[i], -a[a.size() - 1 - i], 1e-10);
        EXPECT_NEAR(a[i], b[i], 1e-10);
    }
}

TEST(Lattice, NoPairingMeansNoChannelLevels) {
    auto p = small();
    p.Delta = 0.0;
    for (const auto& ch : bdg_lattice_channel_levels(0.5, p, 8)) EXPECT_TRUE(ch.levels.empty());
}

TEST(Lattice, SizeGuardAndPreconditions) {
    const auto p = small(4, 3);
    EXPECT_THROW(bdg_lattice_matrix(0.0, p, 16, Spin::Up, 100), qspectra::SizeError);
    EXPECT_THROW(bdg_lattice_matrix(0.0, p, 4, Spin::Up), std::invalid_argument);
}

TEST(Lattice, ChannelLevelsAreSubGapAndPaired) {
    const auto p = small(4, 2);
    const auto per_channel = bdg_lattice_channel_levels(0.9, p, 10);
    EXPECT_EQ(per_channel.size(), 6u);
    for (const auto& entry : per_channel) {
        const double gap = std::abs(make_channel(entry.l, entry.m, p).delta_lm);
        for (std::size_t i = 0; i < entry.levels.size(); ++i) {
            EXPECT_LT(std::abs(entry.levels[i]), gap);
            EXPECT_NEAR(entry.levels[i], -entry.levels[entry.levels.size() - 1 - i], 1e-9);
        }
    }
}

TEST(Lattice, MatchedLevelsAgreeWithLattice) {
    const auto p = small(4, 2);
    const auto rows = compare_with_lattice(2.0, p, 16);
    ASSERT_FALSE(rows.empty());
    for (const auto& r : rows) EXPECT_LT(r.deviation, 1e-3) << r.l << "," << r.m << " " << r.matched;
}
