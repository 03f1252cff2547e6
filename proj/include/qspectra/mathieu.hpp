#pragma once

// Mathieu characteristic values and functions for
//
//     y'' + (a - 2 q cos 2z) y = 0
//
// computed from truncated Fourier-basis matrices. Integer orders use the four
// symmetry-reduced tridiagonal problems (cos/sin, even/odd index); fractional
// orders use the Floquet matrix with diagonal (nu + 2n)^2 and couplings q.
//
// Sign of q: a_r(-q) = a_r(q) and b_r(-q) = b_r(q) for even r, while for odd r
// the even and odd families swap, a_r(-q) = b_r(q). Fractional-order values
// are even in q.

#include <cstddef>
#include <vector>

namespace qspectra::mathieu {

enum class Parity { Even, Odd };

/// Characteristic value a_nu(q) (Parity::Even) or b_nu(q) (Parity::Odd).
///
/// For non-integer nu both parities coincide with the Floquet characteristic
/// value, i.e. the eigenvalue that continues from nu^2 at q = 0. Negative
/// orders are folded onto |nu|. b_0 does not exist and raises
/// std::invalid_argument.
double char_value(double order, double q, Parity parity = Parity::Even);

/// Same as char_value but with a fixed Fourier truncation (|n| <= truncation);
/// no adaptivity. Exposed for convergence studies.
double char_value_truncated(double order, double q, int truncation,
                            Parity parity = Parity::Even);

/// Default starting truncation for the adaptive solver.
int initial_truncation(double order, double q);

/// Even Mathieu function ce_r(z, q), normalised so that the integral of
/// ce_r^2 over one period is pi and ce_r -> cos(r z) as q -> 0.
double mathieu_ce(int order, double q, double z);

/// Odd Mathieu function se_r(z, q), r >= 1; se_r -> sin(r z) as q -> 0.
double mathieu_se(int order, double q, double z);

/// Floquet solution w(z) = exp(i nu z) * mc(z), mc pi-periodic, for the
/// rank-th lowest eigenvalue of the Floquet matrix at exponent nu.
///
/// Coefficients are unit-normalised and oriented so that the coefficient
/// multiplying exp(i nu z) (n = 0) is non-negative; at q = 0 the solution is
/// exactly exp(i nu z) when rank matches nu.
class FloquetSolution {
public:
    FloquetSolution(double nu, double q, double value, int truncation,
                    std::vector<double> coefficients);

    double nu() const noexcept { return nu_; }
    double q() const noexcept { return q_; }
    double char_value() const noexcept { return value_; }
    int truncation() const noexcept { return truncation_; }
    /// c_n for n in [-truncation, truncation].
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    /// Sum_n c_n cos((nu + 2n) z); equals cos(nu z) at q = 0.
    double even_part(double z) const;
    /// Sum_n c_n sin((nu + 2n) z); equals sin(nu z) at q = 0.
    double odd_part(double z) const;
    /// Second derivatives of the two parts with respect to z.
    double even_part_d2(double z) const;
    double odd_part_d2(double z) const;

private:
    double nu_;
    double q_;
    double value_;
    int truncation_;
    std::vector<double> coeffs_;
};

/// Floquet solution at exponent nu for the rank-th (0-based) eigenvalue of
/// the Floquet matrix. For non-integer nu the natural rank is ceil(|nu|) - 1.
FloquetSolution floquet_solution(double nu, double q, int rank);

/// Natural rank of a non-integer order within its Floquet matrix.
int floquet_rank(double nu);

/// Characteristic exponent r >= 0 with char_value(r, q) = a, searched band by
/// band (r in [n, n+1]). Throws DomainError with the bracketing band edges
/// when a falls in an instability gap or below a_0(q).
double floquet_exponent(double a, double q);

}  // namespace qspectra::mathieu
