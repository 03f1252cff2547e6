#pragma once

// Cooper Pair Box spectrum,
//
//     H = 4 E_C (n - n_g)^2 - E_J cos(phi),
//
// via the Mathieu closed form and a charge-basis diagonalization oracle.
//
// Closed-form convention (calibrated against the charge basis and frozen):
//     E_k = E_C * a_{nu_k}(q),  q = -E_J / (2 E_C),
//     nu_k = k + 1 - ((k + 1) mod 2) + 2 n_g (-1)^k   for n_g in [0, 1/2],
// with n_g first folded into [0, 1/2] by periodicity and the n -> 1 - n mirror.

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace qspectra::cpb {

struct CpbParams {
    double E_C = 1.0;
    double E_J = 1.0;
    double n_g = 0.0;
    // Flux normalisation of the Josephson term; carried for bookkeeping only.
    double phi_0 = 1.0;

    void validate() const;
    double ratio() const { return E_J / E_C; }
    CpbParams with_offset(double ng) const {
        CpbParams p = *this;
        p.n_g = ng;
        return p;
    }
};

enum class Method { MathieuClosedForm, ChargeBasisOracle };

std::string to_string(Method m);

struct CpbSpectrumResult {
    std::vector<double> levels;
    double n_g = 0.0;
    Method method = Method::MathieuClosedForm;
};

/// Default charge cutoff: max(20, 5 ceil(sqrt(E_J/E_C)) + n_levels).
int default_cutoff(const CpbParams& params, int n_levels);

/// Lowest n_levels eigenvalues of the charge-basis matrix on n in
/// [-cutoff, cutoff]. Throws TruncationError when the cutoff is too small.
CpbSpectrumResult energies_charge_basis(const CpbParams& params, int n_levels, int cutoff);
CpbSpectrumResult energies_charge_basis(const CpbParams& params, int n_levels);

/// Fold n_g into [0, 1/2]; the flag reports whether the mirror was applied.
std::pair<double, bool> reduce_offset(double n_g);

/// Mathieu order nu_k for an already reduced offset in [0, 1/2].
double mathieu_order(int k, double reduced_ng);

/// q convention used by the closed form.
double mathieu_q(const CpbParams& params);

double energy_mathieu(int k, const CpbParams& params);

CpbSpectrumResult energies_mathieu(const CpbParams& params, int n_levels);

/// Normalised eigenfunction psi_k(phi), built from the even and odd Floquet
/// parts at order nu_k:
///     psi_k = exp(i n_g phi)/sqrt(2 pi) [C(phi/2) + i (-1)^(k+1) S(phi/2)].
class Wavefunction {
public:
    Wavefunction(int k, const CpbParams& params);

    std::complex<double> operator()(double phi) const;
    double energy() const noexcept { return energy_; }
    int level() const noexcept { return k_; }

private:
    std::complex<double> reduced(double phi) const;

    int k_;
    CpbParams params_;
    double reduced_ng_;
    bool mirrored_;
    double shift_;  // integer part removed from n_g
    double energy_;
    std::vector<double> coeffs_;
    int truncation_;
    double nu_;
};

std::complex<double> wavefunction(int k, double phi, const CpbParams& params);

/// Residual of the stationary equation
///     [(-i d/dphi - n_g)^2 - (E_J/4E_C) cos phi] psi = (E/4E_C) psi
/// at phi, with the second derivative taken by a five-point stencil.
std::complex<double> stationary_residual(const Wavefunction& psi, const CpbParams& params,
                                         double phi, double step = 1e-3);

/// (E_2 - E_1) - (E_1 - E_0) at params.n_g.
double anharmonicity(const CpbParams& params);

/// E_k(n_g = 1/2) - E_k(n_g = 0).
double charge_dispersion(int k, const CpbParams& params);

/// Transition energy E_hi - E_lo at params.n_g.
double transition_energy(const CpbParams& params, int lo = 0, int hi = 1);

/// Offsets in [0, 1) where d(E_hi - E_lo)/dn_g vanishes. Centered differences
/// with step 1e-4 on a grid, then bisection to 1e-10.
std::vector<double> sweet_spots(const CpbParams& params, std::pair<int, int> levels = {0, 1},
                                int grid = 200);

/// Centered-difference slope of the transition energy used by sweet_spots.
double transition_slope(const CpbParams& params, double n_g, std::pair<int, int> levels = {0, 1},
                        double step = 1e-4);

}  // namespace qspectra::cpb
