#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qspectra/basis_map.hpp"
#include "qspectra/errors.hpp"

using namespace qspectra::basis;
namespace jx = qspectra::junction;

namespace {

const cplx I1{0.0, 1.0};

AndreevBasisPair sample() {
    return make_basis_pair({0.8, 0.1}, {-0.3, 0.5}, {0.2, -0.7}, {0.6, 0.4}, {0.9, 0.2}, {-1.3, 0.35},
                           1.7);
}

}  // namespace

TEST(BasisPair, StatesFollowPlaneWaveForm) {
    const auto p = sample();
    EXPECT_LT(std::abs(p.state0(0) - p.f1 * std::exp(-I1 * p.q_e * p.z)), 1e-15);
    EXPECT_LT(std::abs(p.state0(1) - p.g1 * std::exp(-I1 * p.q_h * p.z)), 1e-15);
    EXPECT_LT(std::abs(p.state1(0) - p.f2 * std::exp(I1 * p.q_e * p.z)), 1e-15);
    EXPECT_LT(std::abs(p.state1(1) - p.g2 * std::exp(I1 * p.q_h * p.z)), 1e-15);
}

TEST(BasisTransform, MapsBasisOntoComputationalStates) {
    const auto p = sample();
    const auto t = build_transform(p);
    EXPECT_LT((t.matrix * p.state0 - Eigen::Vector2cd(1, 0)).norm(), 1e-14);
    EXPECT_LT((t.matrix * p.state1 - Eigen::Vector2cd(0, 1)).norm(), 1e-14);
    EXPECT_TRUE(verify_bijection(t));
}

TEST(BasisTransform, ClosedFormEqualsInverse) {
    const auto p = sample();
    const auto closed = closed_form_transform(p);
    ASSERT_TRUE(closed.has_value());
    EXPECT_LT((*closed - build_transform(p).matrix).cwiseAbs().maxCoeff(), 1e-12);
    auto degenerate = p;
    degenerate.f1 = 0.0;
    EXPECT_FALSE(closed_form_transform(degenerate).has_value());
}

TEST(BasisTransform, SingularPairsAreRejected) {
    // state1 = 2 state0 when both momenta vanish and amplitudes are parallel.
    const auto parallel = make_basis_pair({0.3, 0.1}, {0.6, 0.2}, {-0.5, 0.4}, {-1.0, 0.8}, 0.0, 0.0, 0.9);
    EXPECT_THROW(build_transform(parallel), qspectra::SingularityError);
    const auto zero = make_basis_pair(0.0, 0.0, 0.0, 0.0, 0.3, 0.2, 1.0);
    EXPECT_THROW(build_transform(zero), qspectra::SingularityError);
    const auto nearly = make_basis_pair(1.0, 1.0 + 1e-14, 1.0, 1.0, 0.0, 0.0, 0.0);
    EXPECT_THROW(build_transform(nearly), qspectra::SingularityError);
    EXPECT_TRUE(std::isinf(transport_condition(zero)));
    EXPECT_GT(transport_condition(nearly), 1e13);
}

TEST(BasisTransport, ConjugatedPauliXCarriesZeroToOne) {
    const auto p = sample();
    const auto t = build_transform(p);
    const auto moved = transport_pauli_x(t, p);
    EXPECT_LT((moved - p.state1).norm() / p.state1.norm(), 1e-12);
    EXPECT_LT((conjugated_pauli_x(t, p.state1) - p.state0).norm() / p.state0.norm(), 1e-12);
}

TEST(BasisTransport, RandomDrawsSatisfyContract) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), mom(-3.0, 3.0), decay(0.0, 1.0), pos(0.0, 4.0);
    int checked = 0;
    for (int d = 0; d < 2000; ++d) {
        const auto p = make_basis_pair({unit(rng), unit(rng)}, {unit(rng), unit(rng)},
                                       {unit(rng), unit(rng)}, {unit(rng), unit(rng)},
                                       {mom(rng), decay(rng)}, {mom(rng), decay(rng)}, pos(rng));
        if (transport_condition(p) > kWellConditioned) continue;
        const auto t = build_transform(p);
        ++checked;
        EXPECT_LT((t.matrix * p.state0 - Eigen::Vector2cd(1, 0)).norm(), 1e-10);
        EXPECT_NO_THROW(transport_pauli_x(t, p));
    }
    EXPECT_GT(checked, 1900);
}

TEST(BasisFromJunction, AndreevAmplitudesGiveInvertibleFrame) {
    jx::JunctionParams params;
    params.L_F = 2;
    const auto ch = jx::make_channel(1, 3, params);
    const double phi = 2.5;
    const auto levels = jx::andreev_levels_sector(phi, ch, params, jx::Spin::Up);
    ASSERT_FALSE(levels.empty());
    const auto pair = basis_pair_from_junction(levels.front(), phi, ch, params);
    EXPECT_DOUBLE_EQ(pair.z, params.lambda + 0.5 * params.L_F);
    EXPECT_EQ(pair.l, 1);
    EXPECT_EQ(pair.m, 3);
    const auto t = build_transform(pair);
    EXPECT_LT((transport_pauli_x(t, pair) - pair.state1).norm() / pair.state1.norm(), 1e-10);
    const auto at_edge = basis_pair_from_junction(levels.front(), phi, ch, params, jx::Spin::Up, 0.0);
    EXPECT_DOUBLE_EQ(at_edge.z, 0.0);
}
