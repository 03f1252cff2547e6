#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qspectra/current.hpp"

using namespace qspectra::junction;

namespace {

constexpr double kPi = std::numbers::pi;

JunctionParams junction(int L_F) {
    JunctionParams p;
    p.L_F = L_F;
    return p;
}

}  // namespace

TEST(Fermi, ZeroTemperatureStep) {
    EXPECT_EQ(fermi(-0.1, 0.0), 1.0);
    EXPECT_EQ(fermi(0.1, 0.0), 0.0);
    EXPECT_EQ(fermi(0.0, 0.0), 0.5);
    EXPECT_NEAR(fermi(0.3, 0.2), 1.0 / (1.0 + std::exp(1.5)), 1e-15);
    EXPECT_NEAR(fermi(-800.0, 1.0), 1.0, 0.0);
    EXPECT_NEAR(level_free_energy(-0.4, 0.0), -0.4, 0.0);
    EXPECT_NEAR(level_free_energy(0.4, 0.0), 0.0, 0.0);
    // dG/d(eps) = f(eps)
    const double T = 0.3, e = 0.2, h = 1e-6;
    EXPECT_NEAR((level_free_energy(e + h, T) - level_free_energy(e - h, T)) / (2 * h), fermi(e, T), 1e-8);
}

class CurrentPhase : public ::testing::Test {
protected:
    static void SetUpTestSuite() { spectrum_ = new AndreevSpectrum(andreev_spectrum(junction(2), 32)); }
    static void TearDownTestSuite() { delete spectrum_; }
    static AndreevSpectrum* spectrum_;
};

AndreevSpectrum* CurrentPhase::spectrum_ = nullptr;

TEST_F(CurrentPhase, VanishesAtZeroAndIsOdd) {
    const auto I = current_phase_relation(*spectrum_);
    double I_c = 0;
    for (double x : I) I_c = std::max(I_c, std::abs(x));
    ASSERT_GT(I_c, 0.0);
    EXPECT_LT(std::abs(I[0]), 1e-8 * I_c);
    for (std::size_t j = 1; j < I.size(); ++j) EXPECT_LT(std::abs(I[j] + I[I.size() - j]), 1e-8 * I_c);
}

TEST_F(CurrentPhase, HotJunctionCarriesNoCurrent) {
    AndreevSpectrum hot = *spectrum_;
    const double cold = std::abs(josephson_current(hot.phi_grid[5], hot.params, hot));
    hot.params.temperature = 1e9;
    EXPECT_LT(std::abs(josephson_current(hot.phi_grid[5], hot.params, hot)), 1e-6 * cold);
}

TEST_F(CurrentPhase, CurrentIsDerivativeOfFreeEnergy) {
    const auto& s = *spectrum_;
    const std::size_t n = s.phi_grid.size();
    const double h = 2 * kPi / n;
    for (std::size_t j : {3u, 9u, 20u}) {
        const double dF = (junction_free_energy(s, j + 1) - junction_free_energy(s, j - 1)) / (2 * h);
        const double I = josephson_current(s.phi_grid[j], s.params, s);
        EXPECT_NEAR(I, dF, 2e-2 * std::abs(I) + 1e-6);
    }
}

TEST_F(CurrentPhase, RejectsPhaseOffGrid) {
    EXPECT_THROW(josephson_current(0.1234, spectrum_->params, *spectrum_), std::invalid_argument);
}

TEST(CriticalCurrent, NoPairingNoCurrent) {
    auto p = junction(2);
    p.Delta = 0.0;
    const auto res = critical_current_and_parity(p, 16);
    EXPECT_EQ(res.I_c, 0.0);
}

TEST(CriticalCurrent, ParityFixtureFlipsBetweenTwoAndThreeLayers) {
    const auto two = critical_current_and_parity(junction(2));
    const auto three = critical_current_and_parity(junction(3));
    EXPECT_GE(two.I_c, 0.0);
    EXPECT_EQ(two.type, JunctionType::Pi);
    EXPECT_EQ(three.type, JunctionType::Zero);
    EXPECT_LT(two.slope_at_zero, 0.0);
    EXPECT_GT(three.slope_at_zero, 0.0);
    EXPECT_NEAR(two.phi_min, kPi, 1e-12);
    EXPECT_NEAR(three.phi_min, 0.0, 1e-12);
    EXPECT_EQ(to_string(JunctionType::Pi), "pi");
    EXPECT_EQ(to_string(JunctionType::Zero), "zero");
}
