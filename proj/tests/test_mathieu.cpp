#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qspectra/errors.hpp"
#include "qspectra/mathieu.hpp"

using namespace qspectra::mathieu;

namespace {

constexpr double kPi = std::numbers::pi;

struct CharRow {
    double q;
    double a[4];  // a_0 .. a_3
    double b[3];  // b_1 .. b_3
};

// Reference values from an independent series implementation (SciPy cephes).
const CharRow kReference[] = {
    {1.0,
     {-0.45513860410741364, 1.8591080725143634, 4.371300982735086, 9.078368847203102},
     {-0.11024881699209521, 3.917024772998471, 9.047739259809374}},
    {5.0,
     {-5.800046020851508, 1.8581875415477505, 7.449109739529178, 11.548832036343402},
     {-5.790080598637771, 2.0994604454866654, 9.2363277136937}},
    {25.0,
     {-40.25677954656679, -21.314899690665726, -3.5221647271582954, 12.964079444326467},
     {-40.25677898468416, -21.314860622249853, -3.520941526621369}},
};

}  // namespace

TEST(MathieuCharValue, MatchesIndependentReference) {
    for (const auto& row : kReference) {
        for (int r = 0; r < 4; ++r)
            EXPECT_NEAR(char_value(r, row.q, Parity::Even), row.a[r], 1e-9 * (1 + std::abs(row.a[r])))
                << "a_" << r << "(" << row.q << ")";
        for (int r = 1; r <= 3; ++r)
            EXPECT_NEAR(char_value(r, row.q, Parity::Odd), row.b[r - 1],
                        1e-9 * (1 + std::abs(row.b[r - 1])))
                << "b_" << r << "(" << row.q << ")";
    }
}

TEST(MathieuCharValue, FreeLimitIsOrderSquared) {
    for (int i = 0; i < 100; ++i) {
        const double nu = 0.05 * i;
        EXPECT_NEAR(char_value(nu, 0.0), nu * nu, 1e-10);
        if (nu >= 1.0 && nu == std::floor(nu))
            EXPECT_NEAR(char_value(nu, 0.0, Parity::Odd), nu * nu, 1e-10);
    }
}

TEST(MathieuCharValue, SmallQSeries) {
    // a_0 = -q^2/2 + 7 q^4/128, b_1 = 1 - q - q^2/8 + q^3/64
    const double q = 1e-2;
    EXPECT_NEAR(char_value(0, q), -q * q / 2 + 7 * std::pow(q, 4) / 128, 1e-12);
    EXPECT_NEAR(char_value(1, q, Parity::Odd), 1 - q - q * q / 8 + q * q * q / 64, 1e-10);
}

TEST(MathieuCharValue, SignOfQ) {
    for (double q : {0.7, 3.0, 12.0}) {
        EXPECT_NEAR(char_value(2, -q), char_value(2, q), 1e-10);
        EXPECT_NEAR(char_value(2, -q, Parity::Odd), char_value(2, q, Parity::Odd), 1e-10);
        EXPECT_NEAR(char_value(1, -q), char_value(1, q, Parity::Odd), 1e-10);
        EXPECT_NEAR(char_value(3, -q, Parity::Odd), char_value(3, q), 1e-10);
        EXPECT_NEAR(char_value(0.37, -q), char_value(0.37, q), 1e-10);
    }
}

TEST(MathieuCharValue, FractionalOrderReference) {
    // Floquet matrix eigenvalues from a separate dense diagonalisation (N = 80).
    EXPECT_NEAR(char_value(0.5, 1.0), -0.3072853506377615, 1e-10);
    EXPECT_NEAR(char_value(0.3, 2.0), -1.490149490514884, 1e-10);
    EXPECT_NEAR(char_value(1.7, 5.0), 2.0459662517087893, 1e-10);
    EXPECT_DOUBLE_EQ(char_value(0.5, 1.0, Parity::Odd), char_value(0.5, 1.0, Parity::Even));
    EXPECT_NEAR(char_value(-1.7, 5.0), char_value(1.7, 5.0), 1e-12);
}

TEST(MathieuCharValue, FractionalOrdersBridgeIntegerEdges) {
    const double q = 3.0;
    EXPECT_NEAR(char_value(1.0 - 1e-7, q), char_value(1, q, Parity::Odd), 1e-5);
    EXPECT_NEAR(char_value(1.0 + 1e-7, q), char_value(1, q, Parity::Even), 1e-5);
    EXPECT_NEAR(char_value(1e-7, q), char_value(0, q), 1e-5);
}

TEST(MathieuCharValue, InterlacingForPositiveQ) {
    for (double q : {1.0, 5.0, 25.0}) {
        const double seq[] = {char_value(0, q), char_value(1, q, Parity::Odd), char_value(1, q),
                              char_value(2, q, Parity::Odd), char_value(2, q),
                              char_value(3, q, Parity::Odd)};
        for (int i = 0; i + 1 < 6; ++i) EXPECT_LT(seq[i], seq[i + 1]) << "q = " << q;
    }
}

TEST(MathieuCharValue, TruncationDoublingAgrees) {
    for (double q : {0.0, 10.0, 50.0}) {
        for (int r = 0; r < 5; ++r) {
            const int n = initial_truncation(r, q);
            const double once = char_value_truncated(r, q, n);
            const double twice = char_value_truncated(r, q, 2 * n);
            EXPECT_NEAR(once, twice, 1e-12 * std::max(1.0, std::abs(twice)));
            EXPECT_NEAR(char_value(r, q), twice, 1e-12 * std::max(1.0, std::abs(twice)));
        }
    }
}

TEST(MathieuCharValue, RejectsMissingOddZeroOrder) {
    EXPECT_THROW(char_value(0, 1.0, Parity::Odd), std::invalid_argument);
}

TEST(MathieuFunctions, ReferenceValues) {
    EXPECT_NEAR(mathieu_ce(0, 1.0, 0.3), 0.4270532603468535, 1e-9);
    EXPECT_NEAR(mathieu_ce(1, 2.0, 0.7), 0.855005482526393, 1e-9);
    EXPECT_NEAR(mathieu_ce(2, 5.0, 1.1), 0.2627386091998755, 1e-9);
    EXPECT_NEAR(mathieu_se(1, 1.0, 0.3), 0.21217807304059483, 1e-9);
    EXPECT_NEAR(mathieu_se(2, 3.0, 0.9), 1.032675732867037, 1e-9);
}

TEST(MathieuFunctions, FreeLimit) {
    for (int i = 0; i < 100; ++i) {
        const double z = 2 * kPi * i / 100;
        EXPECT_NEAR(mathieu_ce(0, 0.0, z), 1 / std::sqrt(2.0), 1e-12);
        EXPECT_NEAR(mathieu_ce(3, 0.0, z), std::cos(3 * z), 1e-12);
        EXPECT_NEAR(mathieu_se(2, 0.0, z), std::sin(2 * z), 1e-12);
    }
}

TEST(MathieuFunctions, UnitNormOverPeriod) {
    for (double q : {0.5, 4.0, 20.0}) {
        const int n = 2000;
        double ce = 0, se = 0;
        for (int i = 0; i < n; ++i) {
            const double z = 2 * kPi * i / n;
            ce += std::pow(mathieu_ce(2, q, z), 2);
            se += std::pow(mathieu_se(1, q, z), 2);
        }
        EXPECT_NEAR(ce * 2 * kPi / n, kPi, 1e-9);
        EXPECT_NEAR(se * 2 * kPi / n, kPi, 1e-9);
    }
}

TEST(MathieuFloquet, SolutionSatisfiesEquation) {
    const double nu = 0.37, q = 4.0;
    const auto sol = floquet_solution(nu, q, floquet_rank(nu));
    const double a = sol.char_value();
    EXPECT_NEAR(a, char_value(nu, q), 1e-12);
    for (double z : {0.1, 0.9, 2.3}) {
        EXPECT_NEAR(sol.even_part_d2(z) + (a - 2 * q * std::cos(2 * z)) * sol.even_part(z), 0.0, 1e-9);
        EXPECT_NEAR(sol.odd_part_d2(z) + (a - 2 * q * std::cos(2 * z)) * sol.odd_part(z), 0.0, 1e-9);
    }
    const auto free = floquet_solution(nu, 0.0, floquet_rank(nu));
    EXPECT_NEAR(free.even_part(0.8), std::cos(nu * 0.8), 1e-12);
    EXPECT_NEAR(free.odd_part(0.8), std::sin(nu * 0.8), 1e-12);
}

TEST(MathieuFloquet, ExponentInvertsCharValue) {
    for (double nu : {0.2, 0.75, 1.4, 2.6}) {
        for (double q : {0.5, 3.0}) {
            EXPECT_NEAR(floquet_exponent(char_value(nu, q), q), nu, 1e-8);
        }
    }
}

TEST(MathieuFloquet, UnstableBandRaisesDomainError) {
    const double q = 5.0;
    const double b1 = char_value(1, q, Parity::Odd);
    const double a1 = char_value(1, q);
    try {
        floquet_exponent(0.5 * (a1 + b1), q);
        FAIL() << "no DomainError";
    } catch (const qspectra::DomainError& e) {
        EXPECT_NEAR(e.lower_edge(), b1, 1e-9);
        EXPECT_NEAR(e.upper_edge(), a1, 1e-9);
    }
    EXPECT_THROW(floquet_exponent(char_value(0, q) - 1.0, q), qspectra::DomainError);
}
