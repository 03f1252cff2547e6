#include "qspectra/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <lapacke.h>

#include "qspectra/errors.hpp"

namespace qspectra::junction {

namespace {

struct WindowEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

// Eigenpairs of a Hermitian matrix with eigenvalues in (-window, window).
WindowEigen solve_window(Eigen::MatrixXcd H, double window, bool vectors) {
    WindowEigen out;
    if (!(window > 0.0)) return out;
    const lapack_int n = static_cast<lapack_int>(H.rows());
    std::vector<double> w(n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    Eigen::MatrixXcd Z(vectors ? n : 1, vectors ? n : 1);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(H.data()), n, -window, window, 0, 0, 0.0, &found,
        w.data(), reinterpret_cast<lapack_complex_double*>(Z.data()), vectors ? n : 1,
        support.data());
    if (info != 0) throw Error("lattice eigensolver failed (zheevr info " + std::to_string(info) + ")");
    out.values = Eigen::Map<Eigen::VectorXd>(w.data(), found);
    if (vectors) out.vectors = Z.leftCols(found);
    return out;
}

}  // namespace

Eigen::MatrixXcd bdg_lattice_matrix(double phi, const JunctionParams& params, int sc_layers,
                                    Spin spin, std::size_t max_dim) {
    params.validate();
    if (sc_layers < 8) throw std::invalid_argument("sc_layers must be at least 8");
    const int M = params.M;
    const int Nz = 2 * sc_layers + params.L_F;
    const std::size_t N = static_cast<std::size_t>(M) * M * Nz;
    if (2 * N > max_dim) {
        std::ostringstream msg;
        msg << "lattice BdG dimension " << 2 * N << " exceeds cap " << max_dim;
        throw SizeError(msg.str());
    }

    const double t = params.t;
    const double s = spin_sign(spin);
    const double eps_s = params.onsite_s();
    const double fi = -s * 0.5 * params.V_ex();
    const auto n = static_cast<Eigen::Index>(N);
    auto site = [M](int x, int y, int z) { return static_cast<Eigen::Index>((z * M + y) * M + x); };

    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int z = 0; z < Nz; ++z) {
        const bool lead = z < sc_layers || z >= sc_layers + params.L_F;
        const double half_phase = (z < sc_layers ? -0.5 : 0.5) * phi;
        const cplx phase = std::polar(1.0, half_phase);
        for (int y = 0; y < M; ++y) {
            for (int x = 0; x < M; ++x) {
                const Eigen::Index i = site(x, y, z);
                H(i, i) = lead ? eps_s : fi;
                H(n + i, n + i) = lead ? -eps_s : fi;

                struct Bond {
                    Eigen::Index j;
                    double pairing;
                };
                Bond bonds[3];
                int count = 0;
                if (x + 1 < M) bonds[count++] = {site(x + 1, y, z), 0.5 * params.Delta};
                if (y + 1 < M) bonds[count++] = {site(x, y + 1, z), -0.5 * params.Delta};
                if (z + 1 < Nz) bonds[count++] = {site(x, y, z + 1), 0.0};
                for (int b = 0; b < count; ++b) {
                    const Eigen::Index j = bonds[b].j;
                    H(i, j) = H(j, i) = -t;
                    H(n + i, n + j) = H(n + j, n + i) = t;
                    if (lead && bonds[b].pairing != 0.0) {
                        const cplx d = s * bonds[b].pairing * phase;
                        H(i, n + j) += d;
                        H(j, n + i) += d;
                        H(n + j, i) += std::conj(d);
                        H(n + i, j) += std::conj(d);
                    }
                }
            }
        }
    }
    return H;
}

std::vector<double> bdg_lattice_oracle(double phi, const JunctionParams& params, int sc_layers,
                                       std::size_t max_dim) {
    std::vector<double> out;
    const double window = 2.0 * params.Delta;
    for (Spin spin : {Spin::Up, Spin::Down}) {
        const auto eig =
            solve_window(bdg_lattice_matrix(phi, params, sc_layers, spin, max_dim), window, false);
        for (Eigen::Index k = 0; k < eig.values.size(); ++k)
            if (std::abs(eig.values(k)) < window) out.push_back(eig.values(k));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<LatticeChannelLevels> bdg_lattice_channel_levels(double phi,
                                                             const JunctionParams& params,
                                                             int sc_layers, std::size_t max_dim) {
    const int M = params.M;
    const Eigen::Index plane = static_cast<Eigen::Index>(M) * M;

    // profiles[a][b](y * M + x) = chi_a(x) chi_b(y)
    std::vector<std::vector<Eigen::VectorXd>> profiles(M, std::vector<Eigen::VectorXd>(M));
    for (int a = 1; a <= M; ++a) {
        for (int b = 1; b <= M; ++b) {
            Eigen::VectorXd p(plane);
            for (int y = 1; y <= M; ++y)
                for (int x = 1; x <= M; ++x)
                    p((y - 1) * M + (x - 1)) = transverse_mode(a, M, x) * transverse_mode(b, M, y);
            profiles[a - 1][b - 1] = p;
        }
    }

    std::vector<LatticeChannelLevels> out;
    std::vector<double> gaps;
    for (int l = 1; l <= M; ++l) {
        for (int m = l + 1; m <= M; ++m) {
            out.push_back({l, m, {}});
            gaps.push_back(std::abs(make_channel(l, m, params).delta_lm));
        }
    }
    const double window = gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
    const double cluster_tol = 1e-8 * std::max(1.0, params.Delta);

    for (Spin spin : {Spin::Up, Spin::Down}) {
        const auto eig =
            solve_window(bdg_lattice_matrix(phi, params, sc_layers, spin, max_dim), window, true);
        const Eigen::Index n = eig.vectors.rows() / 2;
        const Eigen::Index layers = n / plane;
        const Eigen::Index count = eig.values.size();

        // Weight of eigenvector k on channel pair c.
        Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(count, static_cast<Eigen::Index>(out.size()));
        for (Eigen::Index k = 0; k < count; ++k) {
            const auto vec = eig.vectors.col(k);
            for (std::size_t c = 0; c < out.size(); ++c) {
                const Eigen::VectorXcd pa = profiles[out[c].l - 1][out[c].m - 1].cast<cplx>();
                const Eigen::VectorXcd pb = profiles[out[c].m - 1][out[c].l - 1].cast<cplx>();
                double w = 0.0;
                for (Eigen::Index part = 0; part < 2; ++part) {
                    for (Eigen::Index z = 0; z < layers; ++z) {
                        const auto slice = vec.segment(part * n + z * plane, plane);
                        w += std::norm(pa.dot(slice)) + std::norm(pb.dot(slice));
                    }
                }
                weight(k, static_cast<Eigen::Index>(c)) = w;
            }
        }

        // Degenerate eigenvectors are arbitrary rotations inside their
        // cluster, so channel occupancy is decided per cluster from the
        // summed weights (the trace of the projected cluster projector).
        for (Eigen::Index begin = 0; begin < count;) {
            Eigen::Index end = begin + 1;
            while (end < count && eig.values(end) - eig.values(end - 1) < cluster_tol) ++end;
            Eigen::Index next = begin;
            for (std::size_t c = 0; c < out.size() && next < end; ++c) {
                const double total = weight.col(static_cast<Eigen::Index>(c)).segment(begin, end - begin).sum();
                const auto copies = static_cast<Eigen::Index>(std::lround(total));
                for (Eigen::Index r = 0; r < copies && next < end; ++r, ++next) {
                    const double e = eig.values(next);
                    if (std::abs(e) < gaps[c]) out[c].levels.push_back(e);
                }
            }
            begin = end;
        }
    }
    for (auto& entry : out) std::sort(entry.levels.begin(), entry.levels.end());
    return out;
}

std::vector<LevelComparison> compare_with_lattice(double phi, const JunctionParams& params,
                                                  int sc_layers, int grid, std::size_t max_dim) {
    std::vector<LevelComparison> out;
    for (const auto& lattice : bdg_lattice_channel_levels(phi, params, sc_layers, max_dim)) {
        const Channel channel = make_channel(lattice.l, lattice.m, params);
        if (channel.nodal()) continue;
        for (double e : andreev_levels(phi, channel, params, grid)) {
            LevelComparison row{lattice.l, lattice.m, e, std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::infinity()};
            for (double x : lattice.levels) {
                const double d = std::abs(x - e) / std::abs(channel.delta_lm);
                if (d < row.deviation) {
                    row.deviation = d;
                    row.lattice = x;
                }
            }
            out.push_back(row);
        }
    }
    return out;
}

}  // namespace qspectra::junction
