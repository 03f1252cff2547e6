#include "qspectra/basis_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qspectra/errors.hpp"

namespace qspectra::basis {

namespace {

constexpr cplx I1{0.0, 1.0};

Eigen::Matrix2cd columns(const AndreevBasisPair& pair) {
    Eigen::Matrix2cd S;
    S.col(0) = pair.state0;
    S.col(1) = pair.state1;
    return S;
}

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd x;
    x << 0.0, 1.0, 1.0, 0.0;
    return x;
}

}  // namespace

AndreevBasisPair make_basis_pair(cplx f1, cplx f2, cplx g1, cplx g2, cplx q_e, cplx q_h,
                                 double z) {
    AndreevBasisPair p;
    p.f1 = f1;
    p.f2 = f2;
    p.g1 = g1;
    p.g2 = g2;
    p.q_e = q_e;
    p.q_h = q_h;
    p.z = z;
    p.state0 << f1 * std::exp(-I1 * q_e * z), g1 * std::exp(-I1 * q_h * z);
    p.state1 << f2 * std::exp(I1 * q_e * z), g2 * std::exp(I1 * q_h * z);
    return p;
}

AndreevBasisPair basis_pair_from_junction(double E, double phi, const junction::Channel& channel,
                                          const junction::JunctionParams& params,
                                          junction::Spin spin, std::optional<double> z) {
    const auto amp = junction::matching_amplitudes(E, phi, channel, params, spin);
    const double where = z.value_or(params.lambda + 0.5 * params.L_F);
    AndreevBasisPair p = make_basis_pair(amp.f1, amp.f2, amp.g1, amp.g2, amp.q_e, amp.q_h, where);
    p.l = channel.l;
    p.m = channel.m;
    return p;
}

double transport_condition(const AndreevBasisPair& pair) {
    const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(columns(pair));
    const auto& sv = svd.singularValues();
    const double n0 = pair.state0.norm(), n1 = pair.state1.norm();
    if (!(sv(1) > 0.0) || !(std::min(n0, n1) > 0.0)) return std::numeric_limits<double>::infinity();
    return sv(0) / sv(1) * std::max(n0, n1) / std::min(n0, n1);
}

BasisTransform build_transform(const AndreevBasisPair& pair) {
    const Eigen::Matrix2cd S = columns(pair);
    const double scale = pair.state0.norm() * pair.state1.norm();
    const double det = std::abs(S.determinant());
    if (!(scale > 0.0) || det <= kSingularThreshold * scale) {
        std::ostringstream msg;
        msg << "Andreev basis states are linearly dependent (|det| = " << det
            << ", norms product = " << scale << ")";
        throw SingularityError(msg.str());
    }
    BasisTransform t{S.inverse(), pair};
    const double r0 = (t.matrix * pair.state0 - Eigen::Vector2cd(1.0, 0.0)).cwiseAbs().maxCoeff();
    const double r1 = (t.matrix * pair.state1 - Eigen::Vector2cd(0.0, 1.0)).cwiseAbs().maxCoeff();
    if (r0 > 1e-12 || r1 > 1e-12) {
        std::ostringstream msg;
        msg << "Andreev basis too ill-conditioned to invert (residual " << std::max(r0, r1) << ")";
        throw SingularityError(msg.str());
    }
    return t;
}

std::optional<Eigen::Matrix2cd> closed_form_transform(const AndreevBasisPair& p) {
    if (p.f1 == 0.0 || p.f2 == 0.0) return std::nullopt;
    const double z = p.z;
    const cplx qe = p.q_e, qh = p.q_h;
    const cplx d11 = p.g1 * p.f2 * std::exp(-I1 * qh * z) - p.g2 * p.f1 * std::exp(I1 * (qh - 2.0 * qe) * z);
    const cplx d12 = p.g1 * std::exp(-I1 * qh * z) - p.g2 * (p.f1 / p.f2) * std::exp(I1 * (qh - 2.0 * qe) * z);
    const cplx d21 = p.g2 * p.f1 * std::exp(I1 * qh * z) - p.g1 * p.f2 * std::exp(I1 * (2.0 * qe - qh) * z);
    const cplx d22 = p.g2 * std::exp(I1 * qh * z) - p.g1 * (p.f2 / p.f1) * std::exp(I1 * (2.0 * qe - qh) * z);
    if (d11 == 0.0 || d12 == 0.0 || d21 == 0.0 || d22 == 0.0) return std::nullopt;
    Eigen::Matrix2cd T;
    T(0, 0) = -p.g2 * std::exp(I1 * (qh - qe) * z) / d11;
    T(0, 1) = 1.0 / d12;
    T(1, 0) = -p.g1 * std::exp(I1 * (qe - qh) * z) / d21;
    T(1, 1) = 1.0 / d22;
    return T;
}

bool verify_bijection(const BasisTransform& t) {
    const cplx det = t.matrix.determinant();
    if (!(std::abs(det) > 1e-12)) return false;
    const Eigen::Matrix2cd product = t.matrix * t.matrix.inverse();
    return (product - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-10;
}

Eigen::Vector2cd conjugated_pauli_x(const BasisTransform& t, const Eigen::Vector2cd& v) {
    return t.matrix.inverse() * (pauli_x() * (t.matrix * v));
}

Eigen::Vector2cd transport_pauli_x(const BasisTransform& t, const AndreevBasisPair& pair) {
    if (!verify_bijection(t)) throw SingularityError("transform is not a bijection");
    const Eigen::Vector2cd out = conjugated_pauli_x(t, pair.state0);
    const double residual = (out - pair.state1).norm() / pair.state1.norm();
    if (!(residual < 1e-10)) {
        std::ostringstream msg;
        msg << "sigma_x transport misses state1 (relative residual " << residual << ")";
        throw CorrespondenceError(msg.str(), residual);
    }
    return out;
}

}  // namespace qspectra::basis
