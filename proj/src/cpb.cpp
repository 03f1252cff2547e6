#include "qspectra/cpb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qspectra/errors.hpp"
#include "qspectra/mathieu.hpp"

namespace qspectra::cpb {

using std::numbers::pi;

void CpbParams::validate() const {
    if (!(E_C > 0.0) || !std::isfinite(E_C)) throw std::invalid_argument("E_C must be positive");
    if (!(E_J >= 0.0) || !std::isfinite(E_J)) throw std::invalid_argument("E_J must be non-negative");
    if (!std::isfinite(n_g)) throw std::invalid_argument("n_g must be finite");
}

std::string to_string(Method m) {
    return m == Method::MathieuClosedForm ? "mathieu-closed-form" : "charge-basis-oracle";
}

int default_cutoff(const CpbParams& params, int n_levels) {
    const int spread = 5 * static_cast<int>(std::ceil(std::sqrt(params.ratio())));
    return std::max(20, spread + n_levels);
}

CpbSpectrumResult energies_charge_basis(const CpbParams& params, int n_levels, int cutoff) {
    params.validate();
    if (n_levels < 1) throw std::invalid_argument("n_levels must be positive");
    if (cutoff < n_levels + 10) {
        std::ostringstream msg;
        msg << "charge cutoff " << cutoff << " below n_levels + 10 = " << n_levels + 10;
        throw TruncationError(msg.str());
    }
    const double center = std::round(params.n_g);
    const Eigen::Index size = 2 * cutoff + 1;
    Eigen::VectorXd diag(size);
    Eigen::VectorXd off = Eigen::VectorXd::Constant(size - 1, -0.5 * params.E_J);
    for (Eigen::Index i = 0; i < size; ++i) {
        const double n = center + static_cast<double>(i - cutoff);
        diag(i) = 4.0 * params.E_C * (n - params.n_g) * (n - params.n_g);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("charge-basis eigensolver failed");

    CpbSpectrumResult out;
    out.n_g = params.n_g;
    out.method = Method::ChargeBasisOracle;
    out.levels.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n_levels);

    const double edge = cutoff - std::abs(params.n_g - center);
    const double parabola = 4.0 * params.E_C * edge * edge;
    if (out.levels.back() > 0.9 * parabola) {
        std::ostringstream msg;
        msg << "charge cutoff " << cutoff << " too small: level " << out.levels.back()
            << " within 10% of the cutoff parabola " << parabola;
        throw TruncationError(msg.str());
    }
    return out;
}

CpbSpectrumResult energies_charge_basis(const CpbParams& params, int n_levels) {
    return energies_charge_basis(params, n_levels, default_cutoff(params, n_levels));
}

std::pair<double, bool> reduce_offset(double n_g) {
    double x = n_g - std::floor(n_g);
    if (x > 0.5) return {1.0 - x, true};
    return {x, false};
}

double mathieu_order(int k, double reduced_ng) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return (k + 1) - ((k + 1) % 2) + 2.0 * reduced_ng * sign;
}

double mathieu_q(const CpbParams& params) { return -params.E_J / (2.0 * params.E_C); }

double energy_mathieu(int k, const CpbParams& params) {
    params.validate();
    if (k < 0) throw std::invalid_argument("level index must be non-negative");
    const double x = reduce_offset(params.n_g).first;
    const double nu = mathieu_order(k, x);
    const double q = mathieu_q(params);
    if (nu != std::round(nu)) return params.E_C * mathieu::char_value(nu, q);

    // Integer order: n_g sits on 0 or 1/2 and the level is the limit of the
    // fractional branch, which is the upper or lower member of the (a_r, b_r)
    // pair depending on the side nu_k approaches r from.
    const int r = static_cast<int>(nu);
    const double a = mathieu::char_value(r, q, mathieu::Parity::Even);
    if (r == 0) return params.E_C * a;
    const double b = mathieu::char_value(r, q, mathieu::Parity::Odd);
    const bool from_above = (x == 0.0) ? (k % 2 == 0) : (k % 2 != 0);
    return params.E_C * (from_above ? std::max(a, b) : std::min(a, b));
}

CpbSpectrumResult energies_mathieu(const CpbParams& params, int n_levels) {
    CpbSpectrumResult out;
    out.n_g = params.n_g;
    out.method = Method::MathieuClosedForm;
    out.levels.reserve(n_levels);
    for (int k = 0; k < n_levels; ++k) out.levels.push_back(energy_mathieu(k, params));
    return out;
}

Wavefunction::Wavefunction(int k, const CpbParams& params) : k_(k), params_(params) {
    params.validate();
    if (k < 0) throw std::invalid_argument("level index must be non-negative");
    shift_ = std::floor(params.n_g);
    std::tie(reduced_ng_, mirrored_) = reduce_offset(params.n_g);
    nu_ = mathieu_order(k, reduced_ng_);
    const auto sol = mathieu::floquet_solution(nu_, mathieu_q(params), k);
    coeffs_ = sol.coefficients();
    truncation_ = sol.truncation();
    energy_ = energy_mathieu(k, params);
}

std::complex<double> Wavefunction::reduced(double phi) const {
    const double z = 0.5 * phi;
    double even = 0.0;
    double odd = 0.0;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
        const double m = nu_ + 2.0 * (i - truncation_);
        even += coeffs_[i] * std::cos(m * z);
        odd += coeffs_[i] * std::sin(m * z);
    }
    const double sign = (k_ % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
    const std::complex<double> bracket(even, sign * odd);
    return std::polar(1.0 / std::sqrt(2.0 * pi), reduced_ng_ * phi) * bracket;
}

std::complex<double> Wavefunction::operator()(double phi) const {
    // n_g = shift + (mirrored ? 1 - x : x); the mirror maps psi(phi) to
    // exp(i phi) psi(-phi) and each unit of shift multiplies by exp(i phi).
    std::complex<double> value = mirrored_ ? std::polar(1.0, phi) * reduced(-phi) : reduced(phi);
    return std::polar(1.0, shift_ * phi) * value;
}

std::complex<double> wavefunction(int k, double phi, const CpbParams& params) {
    return Wavefunction(k, params)(phi);
}

std::complex<double> stationary_residual(const Wavefunction& psi, const CpbParams& params,
                                         double phi, double step) {
    const auto p2 = psi(phi + 2 * step);
    const auto p1 = psi(phi + step);
    const auto p0 = psi(phi);
    const auto m1 = psi(phi - step);
    const auto m2 = psi(phi - 2 * step);
    const auto d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * step);
    const auto d2 = (-p2 + 16.0 * p1 - 30.0 * p0 + 16.0 * m1 - m2) / (12.0 * step * step);
    const double ng = params.n_g;
    const std::complex<double> i(0.0, 1.0);
    const auto kinetic = -d2 + 2.0 * i * ng * d1 + ng * ng * p0;
    const double scale = 4.0 * params.E_C;
    return kinetic - (params.E_J / scale) * std::cos(phi) * p0 - (psi.energy() / scale) * p0;
}

double anharmonicity(const CpbParams& params) {
    const double e0 = energy_mathieu(0, params);
    const double e1 = energy_mathieu(1, params);
    const double e2 = energy_mathieu(2, params);
    return (e2 - e1) - (e1 - e0);
}

double charge_dispersion(int k, const CpbParams& params) {
    return energy_mathieu(k, params.with_offset(0.5)) - energy_mathieu(k, params.with_offset(0.0));
}

double transition_energy(const CpbParams& params, int lo, int hi) {
    return energy_mathieu(hi, params) - energy_mathieu(lo, params);
}

double transition_slope(const CpbParams& params, double n_g, std::pair<int, int> levels,
                        double step) {
    const double up = transition_energy(params.with_offset(n_g + step), levels.first, levels.second);
    const double down = transition_energy(params.with_offset(n_g - step), levels.first, levels.second);
    return (up - down) / (2.0 * step);
}

std::vector<double> sweet_spots(const CpbParams& params, std::pair<int, int> levels, int grid) {
    params.validate();
    if (grid < 4) throw std::invalid_argument("sweet-spot grid too coarse");
    auto slope = [&](double ng) { return transition_slope(params, ng, levels); };

    std::vector<double> roots;
    std::vector<double> values(grid + 1);
    for (int j = 0; j <= grid; ++j) values[j] = slope(static_cast<double>(j) / grid);
    for (int j = 0; j < grid; ++j) {
        const double x0 = static_cast<double>(j) / grid;
        const double x1 = static_cast<double>(j + 1) / grid;
        if (values[j] == 0.0) {
            roots.push_back(x0);
            continue;
        }
        if (values[j] * values[j + 1] >= 0.0) continue;
        double lo = x0, hi = x1, flo = values[j];
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            const double fm = slope(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }

    std::vector<double> out;
    for (double r : roots) {
        double wrapped = r - std::floor(r);
        if (wrapped > 1.0 - 1e-8) wrapped = 0.0;
        const bool seen = std::any_of(out.begin(), out.end(), [&](double s) {
            const double d = std::abs(s - wrapped);
            return std::min(d, 1.0 - d) < 1e-8;
        });
        if (!seen) out.push_back(wrapped);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qspectra::cpb
