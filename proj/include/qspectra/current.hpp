#pragma once

// Josephson current I(phi) = sum over Andreev levels of d(eps)/d(phi) f(eps),
// in units with 2e/hbar = 1 and k_B = 1.

#include <string>
#include <vector>

#include "qspectra/junction.hpp"

namespace qspectra::junction {

/// Fermi function; at zero temperature a step with f(0) = 1/2.
double fermi(double energy, double temperature);

/// Level free energy G with dG/d(eps) = f(eps): -T ln(1 + exp(-eps/T)), or
/// min(eps, 0) at zero temperature.
double level_free_energy(double energy, double temperature);

/// Current at a phase on the spectrum grid. Derivatives use a five-point
/// stencil; when neighbouring levels come too close to be told apart the step
/// is halved (levels recomputed directly) up to max_refine times before a
/// TrackingError is raised. Temperature is taken from params.
double josephson_current(double phi, const JunctionParams& params, const AndreevSpectrum& spectrum,
                         int max_refine = 6);

/// Current on every grid phase, in grid order.
std::vector<double> current_phase_relation(const AndreevSpectrum& spectrum, int max_refine = 6);

/// Junction free energy sum G(eps) over all stored levels at grid index j.
double junction_free_energy(const AndreevSpectrum& spectrum, std::size_t j);

enum class JunctionType { Zero, Pi };

std::string to_string(JunctionType type);

struct CriticalCurrentResult {
    double I_c = 0.0;
    JunctionType type = JunctionType::Zero;
    double slope_at_zero = 0.0;  // dI/dphi at phi = 0
    double phi_min = 0.0;        // grid phase minimising the free energy
    std::vector<double> phi;
    std::vector<double> current;
    std::vector<double> free_energy;
};

CriticalCurrentResult critical_current_and_parity(const AndreevSpectrum& spectrum);

CriticalCurrentResult critical_current_and_parity(const JunctionParams& params, int n_phase = 64,
                                                  int grid = 256);

}  // namespace qspectra::junction
