#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include "slopelab/rational.hpp"

namespace slopelab {

using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// Exact LU with the rank threshold pinned to zero so rank decisions are
/// never heuristic.
inline Eigen::FullPivLU<RatMatrix> exact_lu(const RatMatrix& a) {
    Eigen::FullPivLU<RatMatrix> lu(a);
    lu.setThreshold(Rational(0));
    return lu;
}

inline Rational exact_det(RatMatrix a) {
    const Eigen::Index n = a.rows();
    if (n == 0) return Rational(1);
    Rational det(1);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index piv = -1;
        for (Eigen::Index i = k; i < n; ++i)
            if (a(i, k) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return Rational(0);
        if (piv != k) {
            a.row(piv).swap(a.row(k));
            det = -det;
        }
        det *= a(k, k);
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rational f = a(i, k) / a(k, k);
            for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

inline Eigen::Index exact_rank(const RatMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    return exact_lu(a).rank();
}

/// Solves a*x = b; requires a to be invertible.
inline RatVector exact_solve(const RatMatrix& a, const RatVector& b) {
    auto lu = exact_lu(a);
    if (lu.rank() != a.rows())
        throw numeric_error("singular system in exact solve");
    return lu.solve(b);
}

inline RatMatrix exact_inverse(const RatMatrix& a) {
    auto lu = exact_lu(a);
    if (lu.rank() != a.rows())
        throw numeric_error("matrix not invertible");
    return lu.inverse();
}

/// True iff every leading principal minor is strictly positive.
inline bool is_positive_definite(const RatMatrix& a) {
    if (a.rows() != a.cols()) return false;
    for (Eigen::Index k = 1; k <= a.rows(); ++k) {
        if (exact_det(RatMatrix(a.topLeftCorner(k, k))) <= 0) return false;
    }
    return true;
}

} // namespace slopelab
