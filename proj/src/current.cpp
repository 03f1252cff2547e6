#include "qspectra/current.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qspectra/errors.hpp"

namespace qspectra::junction {

using std::numbers::pi;

namespace {

using Stencil = std::array<std::vector<double>, 5>;  // phi - 2h ... phi + 2h

std::size_t grid_index(double phi, const AndreevSpectrum& spectrum) {
    const std::size_t n = spectrum.phi_grid.size();
    const double step = 2.0 * pi / static_cast<double>(n);
    const double wrapped = phi - 2.0 * pi * std::floor(phi / (2.0 * pi));
    const double pos = wrapped / step;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) > 1e-9) {
        std::ostringstream msg;
        msg << "phase " << phi << " is not on the spectrum grid";
        throw std::invalid_argument(msg.str());
    }
    return static_cast<std::size_t>(nearest) % n;
}

// Sum over degenerate clusters of f(eps) d/dphi (sum of the cluster), or
// false when level identity across the stencil is ambiguous.
bool stencil_contribution(const Stencil& s, double h, double gap, double temperature,
                          double& out) {
    const std::size_t n = s[2].size();
    for (const auto& row : s)
        if (row.size() != n) return false;

    const double cluster_tol = 1e-8 * gap;
    out = 0.0;
    for (std::size_t begin = 0; begin < n;) {
        std::size_t end = begin + 1;
        while (end < n && s[2][end] - s[2][end - 1] < cluster_tol) ++end;
        if (end < n) {
            // The cut between this cluster and the next is trusted only when
            // its gap could not close within one stencil step.
            std::array<double, 5> g{};
            for (int k = 0; k < 5; ++k) g[k] = s[k][end] - s[k][end - 1];
            double drift = 0.0;
            for (int k = 0; k + 1 < 5; ++k) drift = std::max(drift, std::abs(g[k + 1] - g[k]));
            const double smallest = *std::min_element(g.begin(), g.end());
            if (smallest < cluster_tol || smallest <= drift) return false;
        }
        std::array<double, 5> sum{};
        for (int k = 0; k < 5; ++k)
            for (std::size_t i = begin; i < end; ++i) sum[k] += s[k][i];
        const double slope = (sum[0] - 8.0 * sum[1] + 8.0 * sum[3] - sum[4]) / (12.0 * h);
        double centre = 0.0;
        for (std::size_t i = begin; i < end; ++i) centre += s[2][i];
        centre /= static_cast<double>(end - begin);
        out += slope * fermi(centre, temperature);
        begin = end;
    }
    return true;
}

}  // namespace

double fermi(double energy, double temperature) {
    if (temperature == 0.0) {
        if (energy < 0.0) return 1.0;
        if (energy > 0.0) return 0.0;
        return 0.5;
    }
    const double x = energy / temperature;
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double level_free_energy(double energy, double temperature) {
    if (temperature == 0.0) return std::min(energy, 0.0);
    const double x = energy / temperature;
    // -T ln(1 + e^{-x}) written to stay finite for large |x|
    if (x < 0.0) return energy - temperature * std::log1p(std::exp(x));
    return -temperature * std::log1p(std::exp(-x));
}

double josephson_current(double phi, const JunctionParams& params, const AndreevSpectrum& spectrum,
                         int max_refine) {
    const std::size_t n = spectrum.phi_grid.size();
    if (n < 5) throw std::invalid_argument("current needs at least five grid phases");
    const std::size_t j = grid_index(phi, spectrum);
    const double base_step = 2.0 * pi / static_cast<double>(n);
    const double centre_phi = spectrum.phi_grid[j];

    double total = 0.0;
    for (const ChannelLevels& entry : spectrum.channels) {
        const double gap = std::abs(entry.channel.delta_lm);
        Stencil s;
        for (int k = -2; k <= 2; ++k) {
            const std::size_t idx = (j + n + static_cast<std::size_t>(k + 2) - 2) % n;
            s[k + 2] = entry.levels[idx];
        }
        double h = base_step;
        double contribution = 0.0;
        int depth = 0;
        while (!stencil_contribution(s, h, gap, params.temperature, contribution)) {
            if (depth == max_refine) {
                std::ostringstream msg;
                msg << "level tracking ambiguous for channel (" << entry.channel.l << ","
                    << entry.channel.m << ") near phi = " << centre_phi;
                throw TrackingError(msg.str(), centre_phi - 2.0 * h, centre_phi + 2.0 * h);
            }
            ++depth;
            h *= 0.5;
            for (int k : {-2, -1, 1, 2})
                s[k + 2] = andreev_levels(centre_phi + k * h, entry.channel, spectrum.params,
                                          spectrum.grid);
        }
        total += contribution;
    }
    return total;
}

std::vector<double> current_phase_relation(const AndreevSpectrum& spectrum, int max_refine) {
    std::vector<double> out;
    out.reserve(spectrum.phi_grid.size());
    for (double phi : spectrum.phi_grid)
        out.push_back(josephson_current(phi, spectrum.params, spectrum, max_refine));
    return out;
}

double junction_free_energy(const AndreevSpectrum& spectrum, std::size_t j) {
    double total = 0.0;
    for (const ChannelLevels& entry : spectrum.channels)
        for (double e : entry.levels.at(j)) total += level_free_energy(e, spectrum.params.temperature);
    return total;
}

std::string to_string(JunctionType type) { return type == JunctionType::Zero ? "zero" : "pi"; }

CriticalCurrentResult critical_current_and_parity(const AndreevSpectrum& spectrum) {
    const std::size_t n = spectrum.phi_grid.size();
    CriticalCurrentResult out;
    out.phi = spectrum.phi_grid;
    out.current = current_phase_relation(spectrum);
    for (std::size_t j = 0; j < n; ++j) out.free_energy.push_back(junction_free_energy(spectrum, j));

    for (double I : out.current) out.I_c = std::max(out.I_c, std::abs(I));
    const auto best = std::min_element(out.free_energy.begin(), out.free_energy.end());
    out.phi_min = out.phi[static_cast<std::size_t>(best - out.free_energy.begin())];
    const double distance = std::min(out.phi_min, 2.0 * pi - out.phi_min);
    out.type = distance < 0.5 * pi ? JunctionType::Zero : JunctionType::Pi;
    const double step = 2.0 * pi / static_cast<double>(n);
    out.slope_at_zero = (out.current[1 % n] - out.current[(n - 1) % n]) / (2.0 * step);
    return out;
}

CriticalCurrentResult critical_current_and_parity(const JunctionParams& params, int n_phase,
                                                  int grid) {
    return critical_current_and_parity(andreev_spectrum(params, n_phase, grid));
}

}  // namespace qspectra::junction
