#pragma once

#include "quadflow/common.hpp"

#include <vector>

namespace quadflow {

/// amp * exp(u . M u + b . u + c) over u in R^d, M complex symmetric.
struct GaussianExponent {
    CMatrix M;
    CVector b;
    cplx c{0.0, 0.0};
    cplx amp{1.0, 0.0};

    int dim() const noexcept { return static_cast<int>(M.rows()); }
    cplx operator()(const CVector& u) const;
};

enum class Convergence {
    absolute,     // Re(-M_ss) positive definite
    oscillatory,  // Re(-M_ss) positive semidefinite, M_ss invertible (Fresnel limit)
};

/// Integrates out the variables listed in `drop` over R^k and returns the
/// exponent in the remaining variables (kept in their original order).
///
/// The factor pi^{k/2} det(-M_ss)^{-1/2} uses the product of principal roots
/// of the eigenvalues of -M_ss; those lie in the closed right half plane, so
/// this is the branch reached continuously from Re(-M_ss).
/// Throws DivergenceError when the convergence condition fails.
GaussianExponent integrate_out(const GaussianExponent& e, const std::vector<int>& drop,
                               Convergence mode = Convergence::absolute, double tol = 1e-9);

/// det(A)^{-1/2} as the product of principal roots of the eigenvalues.
cplx inverse_sqrt_det(const CMatrix& a);

}  // namespace quadflow
