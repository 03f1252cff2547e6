#pragma once

// Real-space Bogoliubov-de Gennes diagonalisation of a finite
// S(sc_layers) / FI(L_F) / S(sc_layers) stack on an M x M transverse cell.
// Serves as the reference for the channel-resolved matching solver.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qspectra/junction.hpp"

namespace qspectra::junction {

inline constexpr std::size_t kDefaultLatticeCap = 4096;

/// Dense BdG matrix of one Nambu sector, ordered (electrons, holes) with site
/// index (z * M + y) * M + x. Throws SizeError above max_dim.
Eigen::MatrixXcd bdg_lattice_matrix(double phi, const JunctionParams& params, int sc_layers,
                                    Spin spin, std::size_t max_dim = kDefaultLatticeCap);

/// Eigenvalues of both sectors with |E| < 2 Delta, ascending.
std::vector<double> bdg_lattice_oracle(double phi, const JunctionParams& params, int sc_layers,
                                       std::size_t max_dim = kDefaultLatticeCap);

/// Sub-gap lattice eigenvalues attributed to an unordered channel pair
/// {(l, m), (m, l)}, l < m: eigenvectors whose weight on the two transverse
/// profiles exceeds one half.
struct LatticeChannelLevels {
    int l;
    int m;
    std::vector<double> levels;
};

std::vector<LatticeChannelLevels> bdg_lattice_channel_levels(
    double phi, const JunctionParams& params, int sc_layers,
    std::size_t max_dim = kDefaultLatticeCap);

struct LevelComparison {
    int l = 1;
    int m = 2;
    double matched = 0.0;
    double lattice = 0.0;    // nearest lattice level of the same channel pair
    double deviation = 0.0;  // |matched - lattice| / |Delta_lm|
};

/// Pairs every matched sub-gap level of each channel with its closest
/// lattice counterpart at the same phase. A matched level whose channel has
/// no lattice level at all gets lattice = NaN and deviation = +inf.
std::vector<LevelComparison> compare_with_lattice(double phi, const JunctionParams& params,
                                                  int sc_layers, int grid = 256,
                                                  std::size_t max_dim = kDefaultLatticeCap);

}  // namespace qspectra::junction
