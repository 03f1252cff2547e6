#include "qspectra/mathieu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qspectra/errors.hpp"

namespace qspectra::mathieu {

namespace {

constexpr double kAgreement = 1e-12;
constexpr int kMaxTruncation = 4096;

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples i and i+1
};

// Number of eigenvalues strictly below x (Sturm sequence via LDL^T pivots).
int sturm_count(const Tridiagonal& t, double x, double pivmin) {
    int count = 0;
    double d = t.diag[0] - x;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
    for (std::size_t i = 1; i < t.diag.size(); ++i) {
        d = (t.diag[i] - x) - t.off[i - 1] * t.off[i - 1] / d;
        if (std::abs(d) < pivmin) d = -pivmin;
        if (d < 0) ++count;
    }
    return count;
}

// k-th (0-based, ascending) eigenvalue by bisection on the Sturm count.
double kth_eigenvalue(const Tridiagonal& t, int k) {
    const std::size_t n = t.diag.size();
    if (k < 0 || static_cast<std::size_t>(k) >= n) {
        throw std::out_of_range("eigenvalue rank outside truncated matrix");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double emax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.off[i - 1]);
        if (i + 1 < n) r += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
        if (i + 1 < n) emax = std::max(emax, std::abs(t.off[i]));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double pivmin = std::max(std::numeric_limits<double>::min(), eps * eps * std::max(1.0, emax * emax));
    lo -= 1.0;
    hi += 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi))) break;
        if (sturm_count(t, mid, pivmin) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Eigen::VectorXd kth_eigenvector(const Tridiagonal& t, int k) {
    const Eigen::Index n = static_cast<Eigen::Index>(t.diag.size());
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(t.diag.data(), n);
    Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(t.off.data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw Error("tridiagonal eigensolver failed");
    }
    return solver.eigenvectors().col(k);
}

Tridiagonal floquet_matrix(double nu, double q, int truncation) {
    Tridiagonal t;
    const int size = 2 * truncation + 1;
    t.diag.resize(size);
    t.off.assign(size - 1, q);
    for (int i = 0; i < size; ++i) {
        const double m = nu + 2.0 * (i - truncation);
        t.diag[i] = m * m;
    }
    return t;
}

// The four symmetry classes of integer-order solutions.
enum class Family { EvenCos, OddCos, OddSin, EvenSin };

Family family_of(int r, Parity parity) {
    const bool even = (r % 2 == 0);
    if (parity == Parity::Even) return even ? Family::EvenCos : Family::OddCos;
    return even ? Family::EvenSin : Family::OddSin;
}

int rank_in_family(int r, Parity parity) {
    if (parity == Parity::Odd && r % 2 == 0) return r / 2 - 1;
    return r / 2;
}

// Harmonic multiplying basis element m of the family.
int harmonic(Family f, int m) {
    switch (f) {
        case Family::EvenCos: return 2 * m;
        case Family::OddCos:
        case Family::OddSin: return 2 * m + 1;
        case Family::EvenSin: return 2 * m + 2;
    }
    return 0;
}

Tridiagonal family_matrix(Family f, double q, int truncation) {
    Tridiagonal t;
    const int size = truncation + 1;
    t.diag.resize(size);
    t.off.assign(size - 1, q);
    for (int m = 0; m < size; ++m) {
        const double h = harmonic(f, m);
        t.diag[m] = h * h;
    }
    switch (f) {
        case Family::EvenCos: t.off[0] = std::sqrt(2.0) * q; break;
        case Family::OddCos: t.diag[0] += q; break;
        case Family::OddSin: t.diag[0] -= q; break;
        case Family::EvenSin: break;
    }
    return t;
}

bool is_integer(double x) { return std::isfinite(x) && x == std::round(x); }

void check_finite(double order, double q) {
    if (!std::isfinite(order) || !std::isfinite(q)) {
        throw std::invalid_argument("Mathieu order and parameter must be finite");
    }
}

double truncated_value(double order, double q, int truncation, Parity parity) {
    const double nu = std::abs(order);
    if (is_integer(nu)) {
        const int r = static_cast<int>(nu);
        if (parity == Parity::Odd && r == 0) {
            throw std::invalid_argument("b_0 does not exist");
        }
        const Family f = family_of(r, parity);
        return kth_eigenvalue(family_matrix(f, q, truncation), rank_in_family(r, parity));
    }
    return kth_eigenvalue(floquet_matrix(nu, q, truncation), floquet_rank(nu));
}

// Runs fn(truncation) with doubling until two successive results agree.
template <typename Fn>
std::pair<double, int> adapt(double order, double q, Fn fn) {
    int n = initial_truncation(order, q);
    double previous = fn(n);
    while (true) {
        const int next = 2 * n;
        if (next > kMaxTruncation) {
            std::ostringstream msg;
            msg << "Mathieu truncation did not converge for order " << order << ", q " << q;
            throw ConvergenceError(msg.str(), previous, fn(n));
        }
        const double value = fn(next);
        if (std::abs(value - previous) <= kAgreement * std::max(1.0, std::abs(value))) {
            return {value, next};
        }
        previous = value;
        n = next;
    }
}

struct FamilyCoefficients {
    Family family;
    std::vector<double> coeffs;  // true Fourier coefficients (A_0 unscaled)
};

FamilyCoefficients integer_order_coefficients(int r, double q, Parity parity) {
    if (r < 0) throw std::invalid_argument("Mathieu function order must be non-negative");
    if (parity == Parity::Odd && r == 0) throw std::invalid_argument("se_0 does not exist");
    const auto [value, n] = adapt(r, q, [&](int trunc) {
        return truncated_value(r, q, trunc, parity);
    });
    (void)value;
    const Family f = family_of(r, parity);
    const int k = rank_in_family(r, parity);
    Eigen::VectorXd v = kth_eigenvector(family_matrix(f, q, n), k);
    if (v(k) < 0) v = -v;
    FamilyCoefficients out{f, std::vector<double>(v.data(), v.data() + v.size())};
    if (f == Family::EvenCos) out.coeffs[0] /= std::sqrt(2.0);
    return out;
}

}  // namespace

int initial_truncation(double order, double q) {
    const int base = static_cast<int>(std::ceil(std::abs(order))) +
                     static_cast<int>(std::ceil(2.0 * std::sqrt(std::abs(q)))) + 16;
    return std::max(32, base);
}

double char_value_truncated(double order, double q, int truncation, Parity parity) {
    check_finite(order, q);
    if (truncation < 1) throw std::invalid_argument("truncation must be positive");
    return truncated_value(order, q, truncation, parity);
}

double char_value(double order, double q, Parity parity) {
    check_finite(order, q);
    return adapt(order, q, [&](int n) { return truncated_value(order, q, n, parity); }).first;
}

double mathieu_ce(int order, double q, double z) {
    const auto fc = integer_order_coefficients(order, q, Parity::Even);
    double sum = 0.0;
    for (std::size_t m = 0; m < fc.coeffs.size(); ++m) {
        sum += fc.coeffs[m] * std::cos(harmonic(fc.family, static_cast<int>(m)) * z);
    }
    return sum;
}

double mathieu_se(int order, double q, double z) {
    if (order < 1) throw std::invalid_argument("se_r requires r >= 1");
    const auto fc = integer_order_coefficients(order, q, Parity::Odd);
    double sum = 0.0;
    for (std::size_t m = 0; m < fc.coeffs.size(); ++m) {
        sum += fc.coeffs[m] * std::sin(harmonic(fc.family, static_cast<int>(m)) * z);
    }
    return sum;
}

int floquet_rank(double nu) {
    const double a = std::abs(nu);
    if (is_integer(a)) return static_cast<int>(a);
    return static_cast<int>(std::ceil(a)) - 1;
}

FloquetSolution::FloquetSolution(double nu, double q, double value, int truncation,
                                 std::vector<double> coefficients)
    : nu_(nu), q_(q), value_(value), truncation_(truncation), coeffs_(std::move(coefficients)) {}

double FloquetSolution::even_part(double z) const {
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
        sum += coeffs_[i] * std::cos((nu_ + 2.0 * (i - truncation_)) * z);
    }
    return sum;
}

double FloquetSolution::odd_part(double z) const {
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
        sum += coeffs_[i] * std::sin((nu_ + 2.0 * (i - truncation_)) * z);
    }
    return sum;
}

double FloquetSolution::even_part_d2(double z) const {
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
        const double m = nu_ + 2.0 * (i - truncation_);
        sum -= m * m * coeffs_[i] * std::cos(m * z);
    }
    return sum;
}

double FloquetSolution::odd_part_d2(double z) const {
    double sum = 0.0;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
        const double m = nu_ + 2.0 * (i - truncation_);
        sum -= m * m * coeffs_[i] * std::sin(m * z);
    }
    return sum;
}

FloquetSolution floquet_solution(double nu, double q, int rank) {
    check_finite(nu, q);
    if (rank < 0) throw std::invalid_argument("Floquet rank must be non-negative");
    auto value_at = [&](int trunc) {
        return kth_eigenvalue(floquet_matrix(nu, q, std::max(trunc, rank + 1)), rank);
    };
    const auto [value, n0] = adapt(std::abs(nu) + rank, q, value_at);
    const int n = std::max(n0, rank + 1);
    Eigen::VectorXd v = kth_eigenvector(floquet_matrix(nu, q, n), rank);
    Eigen::Index pivot = n;
    if (std::abs(v(pivot)) < 1e-8) v.cwiseAbs().maxCoeff(&pivot);
    if (v(pivot) < 0) v = -v;
    return FloquetSolution(nu, q, value, n, std::vector<double>(v.data(), v.data() + v.size()));
}

double floquet_exponent(double a, double q) {
    check_finite(a, q);
    const double a0 = char_value(0.0, q);
    const double tol = 1e-13 * std::max(1.0, std::abs(a));
    if (a < a0 - tol) {
        std::ostringstream msg;
        msg << "a = " << a << " lies below a_0(q) = " << a0 << " (unstable)";
        throw DomainError(msg.str(), -std::numeric_limits<double>::infinity(), a0);
    }
    double lower = a0;
    for (int n = 0;; ++n) {
        const double an = char_value(n + 1, q, Parity::Even);
        const double bn = char_value(n + 1, q, Parity::Odd);
        const double upper = std::min(an, bn);
        if (a <= upper + tol) {
            if (a <= lower + tol) return n;
            if (a >= upper - tol) return n + 1;
            double lo = n;
            double hi = n + 1;
            for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (char_value(mid, q) < a) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        const double next_lower = std::max(an, bn);
        if (a < next_lower - tol) {
            std::ostringstream msg;
            msg << "a = " << a << " lies in the instability gap [" << upper << ", "
                << next_lower << "] at q = " << q;
            throw DomainError(msg.str(), upper, next_lower);
        }
        lower = next_lower;
    }
}

}  // namespace qspectra::mathieu
