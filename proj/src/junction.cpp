#include "qspectra/junction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qspectra/errors.hpp"

namespace qspectra::junction {

using std::numbers::pi;

namespace {

constexpr cplx I1{0.0, 1.0};

// Principal arccos folded onto Im >= 0.
cplx arccos_upper(cplx w) {
    cplx k = std::acos(w);
    if (k.imag() < 0.0) k = -k;
    return k;
}

double channel_gap(const Channel& ch, Spin spin) { return spin_sign(spin) * ch.delta_lm; }

void require_subgap(double E, const Channel& ch) {
    if (ch.nodal()) {
        std::ostringstream msg;
        msg << "channel (" << ch.l << "," << ch.m << ") is nodal";
        throw NodalChannelError(msg.str());
    }
    if (!(std::abs(E) < std::abs(ch.delta_lm))) {
        std::ostringstream msg;
        msg << "energy " << E << " outside the sub-gap window of channel (" << ch.l << ","
            << ch.m << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

void JunctionParams::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!(t > 0.0) || !finite(t)) throw std::invalid_argument("t must be positive");
    if (!(Delta >= 0.0) || !finite(Delta)) throw std::invalid_argument("Delta must be non-negative");
    if (!finite(mu_s) || !finite(g) || !finite(lambda))
        throw std::invalid_argument("junction parameters must be finite");
    if (M < 2) throw std::invalid_argument("M must be at least 2");
    if (L_F < 1) throw std::invalid_argument("L_F must be at least 1");
    if (!(temperature >= 0.0) || !finite(temperature))
        throw std::invalid_argument("temperature must be non-negative");
}

Channel make_channel(int l, int m, const JunctionParams& params) {
    if (l < 1 || l > params.M || m < 1 || m > params.M) {
        std::ostringstream msg;
        msg << "channel (" << l << "," << m << ") out of range for M = " << params.M;
        throw std::out_of_range(msg.str());
    }
    Channel ch;
    ch.l = l;
    ch.m = m;
    ch.q_l = pi * l / (params.M + 1);
    ch.q_m = pi * m / (params.M + 1);
    ch.delta_lm = (l == m) ? 0.0 : params.Delta * (std::cos(ch.q_l) - std::cos(ch.q_m));
    ch.c_q = std::cos(ch.q_l) + std::cos(ch.q_m);
    return ch;
}

std::vector<Channel> channels(const JunctionParams& params, bool include_nodal) {
    std::vector<Channel> out;
    for (int l = 1; l <= params.M; ++l) {
        for (int m = 1; m <= params.M; ++m) {
            Channel ch = make_channel(l, m, params);
            if (include_nodal || !ch.nodal()) out.push_back(ch);
        }
    }
    return out;
}

std::pair<cplx, cplx> coherence_factors(double E, const Channel& channel) {
    const double d2 = channel.delta_lm * channel.delta_lm;
    if (E == 0.0) {
        if (d2 == 0.0) return {cplx(1.0), cplx(0.0)};
        const double r = 1.0 / std::sqrt(2.0);
        return {cplx(r), cplx(0.0, -r)};
    }
    const cplx omega = (E * E >= d2) ? cplx(std::sqrt(E * E - d2)) : I1 * std::sqrt(d2 - E * E);
    const cplx ratio = omega / E;
    return {std::sqrt(0.5 * (1.0 + ratio)), std::sqrt(0.5 * (1.0 - ratio))};
}

double transverse_mode(int l, int M, int x) {
    if (M < 1 || l < 1 || l > M || x < 1 || x > M) {
        std::ostringstream msg;
        msg << "transverse mode index out of range (l=" << l << ", x=" << x << ", M=" << M << ")";
        throw std::out_of_range(msg.str());
    }
    return std::sqrt(2.0 / (M + 1)) * std::sin(pi * l * x / (M + 1));
}

cplx wavevector_K(double E, const Channel& channel, const JunctionParams& params) {
    const cplx root = std::sqrt(cplx(channel.delta_lm * channel.delta_lm - E * E));
    const cplx arg = 4.0 - params.mu_s / (2.0 * params.t) - channel.c_q - I1 / (2.0 * params.t) * root;
    return arccos_upper(arg);
}

std::pair<cplx, cplx> fi_momenta(double E, const Channel& channel, const JunctionParams& params) {
    const double M = params.M;
    const double base = 1.0 + E / (2.0 * params.t) + params.g / (4.0 * params.t);
    const double ke = base + channel.c_q - 2.0 * std::cos(pi * M / (M + 1));
    const double kh = base - channel.c_q - 2.0 * std::cos(pi / (M + 1));
    return {cplx(pi, ke), cplx(0.0, kh)};
}

std::pair<cplx, cplx> lattice_fi_momenta(double E, const Channel& channel,
                                         const JunctionParams& params, Spin spin) {
    const double s = spin_sign(spin);
    const double t = params.t;
    const double half_v = 0.5 * params.V_ex();
    const double ce = (-s * half_v - 2.0 * t * channel.c_q - E) / (2.0 * t);
    const double ch = (E + s * half_v - 2.0 * t * channel.c_q) / (2.0 * t);
    return {arccos_upper(cplx(ce)), arccos_upper(cplx(ch))};
}

LeadModes lead_modes(double E, double phi, const Channel& channel, const JunctionParams& params,
                     Spin spin) {
    const double t = params.t;
    const double gap = channel_gap(channel, spin);
    const cplx omega = I1 * std::sqrt(cplx(gap * gap - E * E));
    const double band = params.onsite_s() - 2.0 * t * channel.c_q;

    LeadModes out;
    const cplx xi[2] = {omega, -omega};
    const Eigen::Vector2cd spinor[2] = {Eigen::Vector2cd(gap, E - omega),
                                        Eigen::Vector2cd(E - omega, gap)};
    for (int b = 0; b < 2; ++b) {
        const cplx k = arccos_upper((band - xi[b]) / (2.0 * t));
        if (b == 0) out.K = k;
        cplx lam = std::exp(I1 * k);
        const cplx inv = 1.0 / lam;
        const bool lam_small = std::abs(lam) < 1.0;
        out.lambda_left(b) = lam_small ? inv : lam;
        out.lambda_right(b) = lam_small ? lam : inv;
        out.U_left.col(b) = spinor[b];
        out.U_right.col(b) = spinor[b];
    }
    const Eigen::Vector2cd phase(std::exp(I1 * (0.5 * phi)), std::exp(-I1 * (0.5 * phi)));
    out.U_right = phase.asDiagonal() * out.U_right;
    return out;
}

Eigen::MatrixXcd effective_hamiltonian(double E, double phi, const Channel& channel,
                                       const JunctionParams& params, Spin spin) {
    require_subgap(E, channel);
    const int L = params.L_F;
    const double t = params.t;
    const double s = spin_sign(spin);
    const double half_v = 0.5 * params.V_ex();
    const double kin = 2.0 * t * channel.c_q;

    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(2 * L, 2 * L);
    for (int p = 0; p < L; ++p) {
        H(2 * p, 2 * p) = -s * half_v - kin;
        H(2 * p + 1, 2 * p + 1) = -s * half_v + kin;
        if (p + 1 < L) {
            H(2 * p, 2 * p + 2) = H(2 * p + 2, 2 * p) = -t;
            H(2 * p + 1, 2 * p + 3) = H(2 * p + 3, 2 * p + 1) = t;
        }
    }

    const LeadModes modes = lead_modes(E, phi, channel, params, spin);
    const Eigen::Matrix2cd hop = Eigen::Vector2cd(-t, t).asDiagonal();
    const Eigen::Matrix2cd left = modes.U_left *
                                  modes.lambda_left.cwiseInverse().asDiagonal() *
                                  modes.U_left.inverse();
    const Eigen::Matrix2cd right =
        modes.U_right * modes.lambda_right.asDiagonal() * modes.U_right.inverse();
    H.block<2, 2>(0, 0) += hop * left;
    H.block<2, 2>(2 * L - 2, 2 * L - 2) += hop * right;
    return H;
}

double secular_determinant(double E, double phi, const Channel& channel,
                           const JunctionParams& params, Spin spin) {
    const Eigen::MatrixXcd H = effective_hamiltonian(E, phi, channel, params, spin);
    const Eigen::MatrixXcd X = E * Eigen::MatrixXcd::Identity(H.rows(), H.cols()) - H;
    return X.determinant().real();
}

Eigen::VectorXd secular_eigenvalues(double E, double phi, const Channel& channel,
                                    const JunctionParams& params, Spin spin) {
    const Eigen::MatrixXcd H = effective_hamiltonian(E, phi, channel, params, spin);
    Eigen::MatrixXcd X = E * Eigen::MatrixXcd::Identity(H.rows(), H.cols()) - H;
    const Eigen::MatrixXcd herm = 0.5 * (X + X.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

Eigen::MatrixXcd matching_matrix(double E, double phi, const Channel& channel,
                                 const JunctionParams& params, Spin spin) {
    require_subgap(E, channel);
    const LeadModes modes = lead_modes(E, phi, channel, params, spin);
    const auto [q_e, q_h] = lattice_fi_momenta(E, channel, params, spin);

    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(8, 8);
    const double z_left = params.lambda;
    const double z_right = params.lambda + params.L_F;

    auto insulator = [&](int row, double z, double sign) {
        S(row, 2) = sign * std::exp(-I1 * q_e * z);
        S(row, 3) = sign * std::exp(I1 * q_e * z);
        S(row + 1, 4) = sign * std::exp(-I1 * q_h * z);
        S(row + 1, 5) = sign * std::exp(I1 * q_h * z);
    };
    for (int plane = 0; plane < 2; ++plane) {
        const int row = 2 * plane;
        const double z = z_left + plane;
        for (int b = 0; b < 2; ++b)
            S.block<2, 1>(row, b) = modes.U_left.col(b) * std::pow(modes.lambda_left(b), z);
        insulator(row, z, -1.0);
    }
    for (int plane = 0; plane < 2; ++plane) {
        const int row = 4 + 2 * plane;
        const double z = z_right + plane;
        insulator(row, z, 1.0);
        for (int b = 0; b < 2; ++b)
            S.block<2, 1>(row, 6 + b) = -modes.U_right.col(b) * std::pow(modes.lambda_right(b), z);
    }
    return S;
}

cplx matching_determinant(double E, double phi, const Channel& channel,
                          const JunctionParams& params, Spin spin) {
    return matching_matrix(E, phi, channel, params, spin).fullPivLu().determinant();
}

MatchingAmplitudes matching_amplitudes(double E, double phi, const Channel& channel,
                                       const JunctionParams& params, Spin spin) {
    const Eigen::MatrixXcd S = matching_matrix(E, phi, channel, params, spin);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S, Eigen::ComputeFullV);
    Eigen::VectorXcd v = svd.matrixV().col(7);
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::abs(v(big)) / v(big);
    v /= v.norm();

    MatchingAmplitudes out;
    out.A = v(0);
    out.B = v(1);
    out.f1 = v(2);
    out.f2 = v(3);
    out.g1 = v(4);
    out.g2 = v(5);
    out.C = v(6);
    out.D = v(7);
    std::tie(out.q_e, out.q_h) = lattice_fi_momenta(E, channel, params, spin);
    out.smallest_singular_value = svd.singularValues()(7);
    return out;
}

std::vector<double> andreev_levels_sector(double phi, const Channel& channel,
                                          const JunctionParams& params, Spin spin, int grid) {
    params.validate();
    if (channel.nodal()) {
        std::ostringstream msg;
        msg << "channel (" << channel.l << "," << channel.m << ") is nodal";
        throw NodalChannelError(msg.str());
    }
    if (grid < 64) throw std::invalid_argument("andreev_levels needs grid >= 64");

    const double gap = std::abs(channel.delta_lm);
    const double edge = gap * (1.0 - 1e-10);
    const double tol = 1e-10 * gap;

    auto eig = [&](double E) { return secular_eigenvalues(E, phi, channel, params, spin); };
    auto negatives = [](const Eigen::VectorXd& ev) {
        return static_cast<int>((ev.array() < 0.0).count());
    };

    std::vector<double> energies(grid);
    std::vector<int> counts(grid);
    for (int j = 0; j < grid; ++j) {
        energies[j] = -edge + 2.0 * edge * j / (grid - 1);
        counts[j] = negatives(eig(energies[j]));
    }

    std::vector<double> levels;
    for (int j = 0; j + 1 < grid; ++j) {
        for (int idx = counts[j + 1]; idx < counts[j]; ++idx) {
            double lo = energies[j];
            double hi = energies[j + 1];
            // Bisect to the floating-point limit; tol is only the contract.
            while (hi - lo > tol || hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * gap) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (eig(mid)(idx) < 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            levels.push_back(0.5 * (lo + hi));
        }
    }
    std::sort(levels.begin(), levels.end());
    return levels;
}

std::vector<double> andreev_levels(double phi, const Channel& channel,
                                   const JunctionParams& params, int grid) {
    std::vector<double> up = andreev_levels_sector(phi, channel, params, Spin::Up, grid);
    const std::vector<double> down = andreev_levels_sector(phi, channel, params, Spin::Down, grid);
    up.insert(up.end(), down.begin(), down.end());
    std::sort(up.begin(), up.end());
    return up;
}

AndreevSpectrum andreev_spectrum(const JunctionParams& params, int n_phase, int grid,
                                 unsigned threads) {
    params.validate();
    if (n_phase < 1) throw std::invalid_argument("n_phase must be positive");

    AndreevSpectrum spec;
    spec.params = params;
    spec.grid = grid;
    for (int j = 0; j < n_phase; ++j) spec.phi_grid.push_back(2.0 * pi * j / n_phase);
    for (const Channel& ch : channels(params)) spec.channels.push_back({ch, {}});

    const std::size_t n_tasks = spec.channels.size();
    std::vector<std::exception_ptr> errors(n_tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < n_tasks; i = next++) {
            try {
                auto& entry = spec.channels[i];
                entry.levels.reserve(n_phase);
                for (double phi : spec.phi_grid)
                    entry.levels.push_back(andreev_levels(phi, entry.channel, params, grid));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_tasks, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return spec;
}

}  // namespace qspectra::junction
