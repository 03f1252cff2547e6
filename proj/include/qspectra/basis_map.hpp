#pragma once

// Change of basis between the two evanescent insulator spinors of an Andreev
// state and the computational basis {(1,0), (0,1)}.
//
//   state0 = (f1 exp(-i q_e z), g1 exp(-i q_h z))
//   state1 = (f2 exp(+i q_e z), g2 exp(+i q_h z))
//
// The transform T maps state0 -> (1,0) and state1 -> (0,1).

#include <optional>

#include <Eigen/Dense>

#include "qspectra/junction.hpp"

namespace qspectra::basis {

using cplx = std::complex<double>;

struct AndreevBasisPair {
    Eigen::Vector2cd state0;
    Eigen::Vector2cd state1;
    double z = 0.0;
    cplx f1, f2, g1, g2;
    cplx q_e, q_h;
    // Transverse channel carried alongside; it multiplies both states alike.
    int l = 0;
    int m = 0;
};

AndreevBasisPair make_basis_pair(cplx f1, cplx f2, cplx g1, cplx g2, cplx q_e, cplx q_h,
                                 double z);

/// Pair built from the null vector of the junction matching system at energy
/// E. z defaults to the middle of the insulator, lambda + L_F / 2.
AndreevBasisPair basis_pair_from_junction(double E, double phi,
                                          const junction::Channel& channel,
                                          const junction::JunctionParams& params,
                                          junction::Spin spin = junction::Spin::Up,
                                          std::optional<double> z = std::nullopt);

struct BasisTransform {
    Eigen::Matrix2cd matrix;
    AndreevBasisPair source;
};

/// Relative threshold on |det[state0 state1]| / (|state0| |state1|).
inline constexpr double kSingularThreshold = 1e-12;

/// Amplification of round-off in the sigma_x transport: the 2-norm condition
/// number of [state0 state1] times the ratio of the larger to the smaller state
/// norm. Infinite when the pair is singular.
double transport_condition(const AndreevBasisPair& pair);

/// Pairs at or below this transport condition stay within the 1e-10 residual.
inline constexpr double kWellConditioned = 1e5;

/// Inverse of the column matrix [state0 state1]. Raises SingularityError for
/// (numerically) dependent states.
BasisTransform build_transform(const AndreevBasisPair& pair);

/// Entry-wise closed form of the same matrix, written in terms of f, g, q and
/// z. Empty when one of its denominators vanishes (f1 = 0, f2 = 0, or a
/// dependent pair).
std::optional<Eigen::Matrix2cd> closed_form_transform(const AndreevBasisPair& pair);

bool verify_bijection(const BasisTransform& t);

/// T^-1 sigma_x T state0, which must reproduce state1. Throws
/// CorrespondenceError when the relative residual exceeds 1e-10.
Eigen::Vector2cd transport_pauli_x(const BasisTransform& t, const AndreevBasisPair& pair);

/// Same operation on an arbitrary Andreev-frame vector, without a check.
Eigen::Vector2cd conjugated_pauli_x(const BasisTransform& t, const Eigen::Vector2cd& v);

}  // namespace qspectra::basis
