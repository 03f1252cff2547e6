#pragma once

// d-wave superconductor / ferromagnetic insulator / d-wave superconductor
// junction on a simple cubic lattice with an M x M transverse cell.
//
// Lattice model (hopping -t everywhere):
//   superconductor: on-site 8t - mu_s, d-wave bond pairing +Delta/2 on x bonds
//                   and -Delta/2 on y bonds, phase exp(-i phi/2) on the left
//                   lead and exp(+i phi/2) on the right lead;
//   insulator:      spin-up on-site -V_ex/2, spin-down +V_ex/2, V_ex = 12t + g.
//
// The transverse sine modes chi_l(x) chi_m(y) diagonalise the open cell, so
// every channel (l, m) is an independent chain in z with on-site pairing
// Delta_lm = Delta (cos q_l - cos q_m). Each channel splits into two Nambu
// sectors, (c_up, c_down^dag) and (c_down, c_up^dag); the down sector has the
// mirrored spectrum of the up sector.
//
// Geometry along z: left lead on planes z <= lambda, insulator on planes
// lambda + 1 ... lambda + L_F, right lead on planes z >= lambda + L_F + 1.

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qspectra::junction {

using cplx = std::complex<double>;

struct JunctionParams {
    double t = 1.0;
    double mu_s = 8.0;
    double Delta = 3.0;
    double g = 2.0;
    int M = 4;
    int L_F = 3;
    double lambda = 0.0;
    double temperature = 0.0;

    void validate() const;
    double V_ex() const noexcept { return 12.0 * t + g; }
    /// On-site energy of the superconductor, 8t - mu_s.
    double onsite_s() const noexcept { return 8.0 * t - mu_s; }
};

struct Channel {
    int l = 1;
    int m = 2;
    double q_l = 0.0;
    double q_m = 0.0;
    double delta_lm = 0.0;
    double c_q = 0.0;

    bool nodal() const noexcept { return delta_lm == 0.0 || l == m; }
};

Channel make_channel(int l, int m, const JunctionParams& params);

/// Every ordered pair (l, m) with 1 <= l, m <= M; nodal channels optional.
std::vector<Channel> channels(const JunctionParams& params, bool include_nodal = false);

enum class Spin { Up, Down };

inline double spin_sign(Spin s) { return s == Spin::Up ? 1.0 : -1.0; }

/// u = sqrt((1 + Omega/E)/2), v = sqrt((1 - Omega/E)/2) with
/// Omega = sqrt(E^2 - Delta_lm^2) above the gap and Omega = i sqrt(Delta_lm^2 - E^2)
/// below it (principal complex square roots). At E = 0 the E -> 0+ limit of the
/// normalised pair, (1, -i)/sqrt(2), is returned.
std::pair<cplx, cplx> coherence_factors(double E, const Channel& channel);

/// sqrt(2/(M+1)) sin(pi l x/(M+1)), unit norm over x = 1..M.
double transverse_mode(int l, int M, int x);

/// K = arccos(4 - mu_s/2t - C_q - (i/2t) sqrt(Delta_lm^2 - E^2)) with Im K >= 0.
cplx wavevector_K(double E, const Channel& channel, const JunctionParams& params);

/// Closed-form insulator momenta
///   q_e = pi + i (1 + E/2t + g/4t + C_q - 2 cos(pi M/(M+1))),
///   q_h =      i (1 + E/2t + g/4t - C_q - 2 cos(pi/(M+1))).
/// Informational; the matching problem uses lattice_fi_momenta.
std::pair<cplx, cplx> fi_momenta(double E, const Channel& channel, const JunctionParams& params);

/// Insulator momenta solving the lattice dispersion of the given sector,
///   E = -s V_ex/2 - 2t C_q - 2t cos q_e,   E = -s V_ex/2 + 2t C_q + 2t cos q_h,
/// with Im q >= 0.
std::pair<cplx, cplx> lattice_fi_momenta(double E, const Channel& channel,
                                         const JunctionParams& params, Spin spin = Spin::Up);

/// Evanescent lead modes of one sector at sub-gap energy E.
///   psi_left(z)  = U_left  diag(lambda_left)^z  a,   |lambda_left|  > 1
///   psi_right(z) = U_right diag(lambda_right)^z c,   |lambda_right| < 1
/// U_right includes the phase rotation diag(exp(i phi/2), exp(-i phi/2)).
struct LeadModes {
    Eigen::Matrix2cd U_left;
    Eigen::Matrix2cd U_right;
    Eigen::Vector2cd lambda_left;
    Eigen::Vector2cd lambda_right;
    cplx K;
};

LeadModes lead_modes(double E, double phi, const Channel& channel, const JunctionParams& params,
                     Spin spin = Spin::Up);

/// Insulator block of one sector with both lead self-energies folded onto the
/// boundary planes. Layout (electron, hole) per plane, 2 L_F square.
Eigen::MatrixXcd effective_hamiltonian(double E, double phi, const Channel& channel,
                                       const JunctionParams& params, Spin spin = Spin::Up);

/// det(E - H_eff(E)); real for sub-gap E up to rounding, so the real part is
/// returned. Its zeros are the Andreev levels of the sector.
double secular_determinant(double E, double phi, const Channel& channel,
                           const JunctionParams& params, Spin spin = Spin::Up);

/// Ascending eigenvalues of the Hermitian part of E - H_eff(E). Each is
/// strictly increasing in E across the sub-gap window.
Eigen::VectorXd secular_eigenvalues(double E, double phi, const Channel& channel,
                                    const JunctionParams& params, Spin spin = Spin::Up);

/// 8 x 8 mode-matching system in (A, B, f1, f2, g1, g2, C, D): continuity of
/// the lead and insulator solutions on the two planes on either side of each
/// interface (z = lambda, lambda + 1 and z = lambda + L_F, lambda + L_F + 1).
Eigen::MatrixXcd matching_matrix(double E, double phi, const Channel& channel,
                                 const JunctionParams& params, Spin spin = Spin::Up);

cplx matching_determinant(double E, double phi, const Channel& channel,
                          const JunctionParams& params, Spin spin = Spin::Up);

/// Null vector of the matching matrix (smallest singular value), normalised
/// to unit norm with the largest entry real and positive.
struct MatchingAmplitudes {
    cplx A, B, f1, f2, g1, g2, C, D;
    cplx q_e, q_h;
    double smallest_singular_value;
};

MatchingAmplitudes matching_amplitudes(double E, double phi, const Channel& channel,
                                       const JunctionParams& params, Spin spin = Spin::Up);

/// Levels of one sector in (-|Delta_lm|, |Delta_lm|), ascending.
std::vector<double> andreev_levels_sector(double phi, const Channel& channel,
                                          const JunctionParams& params, Spin spin,
                                          int grid = 256);

/// Levels of both sectors merged and sorted; symmetric under E -> -E.
std::vector<double> andreev_levels(double phi, const Channel& channel,
                                   const JunctionParams& params, int grid = 256);

struct ChannelLevels {
    Channel channel;
    std::vector<std::vector<double>> levels;  // [phase index] -> ascending levels
};

struct AndreevSpectrum {
    std::vector<double> phi_grid;  // 2 pi j / N, j = 0..N-1
    std::vector<ChannelLevels> channels;
    JunctionParams params;
    int grid = 256;
};

/// Levels for every non-nodal channel on the periodic grid 2 pi j / n_phase.
/// Channels are distributed over `threads` workers; the result does not
/// depend on the thread count.
AndreevSpectrum andreev_spectrum(const JunctionParams& params, int n_phase, int grid = 256,
                                 unsigned threads = 0);

}  // namespace qspectra::junction
