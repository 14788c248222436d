#pragma once

#include "quadflow/common.hpp"

namespace quadflow {

/// A point of complex phase space C^{2n}, stored as (x, xi).
class PhaseVector {
public:
    PhaseVector() = default;
    explicit PhaseVector(int n);
    /// Takes a 2n vector in (x, xi) block order.
    explicit PhaseVector(CVector data);
    PhaseVector(const CVector& x, const CVector& xi);

    static PhaseVector zero(int n) { return PhaseVector(n); }
    static PhaseVector from_real(const RVector& data);

    int n() const noexcept { return static_cast<int>(data_.size() / 2); }
    const CVector& data() const noexcept { return data_; }
    CVector& data() noexcept { return data_; }

    auto x() const { return data_.head(n()); }
    auto xi() const { return data_.tail(n()); }

    RVector real() const { return data_.real(); }
    RVector imag() const { return data_.imag(); }
    PhaseVector conj() const { return PhaseVector(CVector(data_.conjugate())); }
    bool is_zero() const { return data_.isZero(0.0); }

    PhaseVector operator+(const PhaseVector& o) const;
    PhaseVector operator-(const PhaseVector& o) const;
    PhaseVector operator-() const { return PhaseVector(CVector(-data_)); }
    PhaseVector operator*(cplx s) const { return PhaseVector(CVector(s * data_)); }

private:
    CVector data_;
};

PhaseVector operator*(const CMatrix& m, const PhaseVector& z);

/// The matrix J with blocks J_{x,xi} = -I and J_{xi,x} = +I, so that
/// sigma(z, w) = z . (J w).
CMatrix symplectic_j(int n);

/// sigma(z, w) = z_xi . w_x - w_xi . z_x (bilinear, no conjugation).
cplx symplectic_form(const PhaseVector& z, const PhaseVector& w);

/// -J M^T J: the adjoint of M with respect to sigma.
CMatrix symplectic_transpose(const CMatrix& m);

/// q(z) = 1/2 z . (hess z) on C^{2n}.
class QuadraticForm {
public:
    /// Validates symmetry to `tol.sym` (relative) and symmetrizes.
    explicit QuadraticForm(const CMatrix& hess, const Tolerances& tol = Tolerances::defaults());

    static QuadraticForm zero(int n) { return QuadraticForm(CMatrix::Zero(2 * n, 2 * n)); }
    /// Harmonic oscillator 1/2 (|x|^2 + |xi|^2).
    static QuadraticForm harmonic_oscillator(int n);

    int n() const noexcept { return static_cast<int>(hess_.rows() / 2); }
    const CMatrix& hess() const noexcept { return hess_; }
    cplx operator()(const PhaseVector& z) const;

    QuadraticForm scaled(cplx t) const { return QuadraticForm(CMatrix(t * hess_)); }
    QuadraticForm conj() const { return QuadraticForm(CMatrix(hess_.conjugate())); }

private:
    CMatrix hess_;
};

/// Linear map K with K^T J K = J.
class CanonicalTransform {
public:
    /// Throws InvariantError unless K is canonical to `tol.can`.
    explicit CanonicalTransform(const CMatrix& mat, const Tolerances& tol = Tolerances::defaults());

    static CanonicalTransform identity(int n) { return CanonicalTransform(CMatrix::Identity(2 * n, 2 * n)); }
    /// Skips the canonicity check; for matrices canonical by construction.
    static CanonicalTransform trusted(const CMatrix& mat) { return CanonicalTransform(mat, Trusted{}); }

    int n() const noexcept { return static_cast<int>(mat_.rows() / 2); }
    const CMatrix& mat() const noexcept { return mat_; }

    CanonicalTransform inverse() const;
    /// conj(K)^{-1}, the transformation attached to the adjoint evolution.
    CanonicalTransform conj_inverse() const;
    CanonicalTransform operator*(const CanonicalTransform& o) const;

private:
    struct Trusted {};
    CanonicalTransform(const CMatrix& mat, Trusted) : mat_(mat) {}
    CMatrix mat_;
};

/// Relative canonicity residue |K^T J K - J| / max(1, |K|^2).
double canonical_residue(const CMatrix& k);
bool is_canonical(const CMatrix& k, const Tolerances& tol = Tolerances::defaults());

/// z -> K z + w.
struct AffineCanonical {
    CanonicalTransform linear;
    PhaseVector shift;

    PhaseVector operator()(const PhaseVector& z) const { return linear.mat() * z + shift; }
    /// v = (1 - K)^{-1} w, so that the map reads z -> K(z - v) + v.
    PhaseVector fixed_point() const;
};

/// H_q = -J q''.
CMatrix hamilton_matrix(const QuadraticForm& q);

/// Inverse of hamilton_matrix; rejects H that is not sigma-antisymmetric.
QuadraticForm quadratic_from_hamilton(const CMatrix& h, const Tolerances& tol = Tolerances::defaults());

/// exp(t H_q).
CanonicalTransform flow(const QuadraticForm& q, cplx t = 1.0);

/// A quadratic form q with flow(q, 1) = K, for strictly positive K.
///
/// The logarithm is taken separately on the invariant subspaces of K inside
/// and outside the unit circle: the inside block uses a branch cut ray picked
/// from 64 candidate angles to stay far from its spectrum, and the outside
/// block uses minus the same branch applied to its inverse, which keeps the
/// generator Hamiltonian. Throws PositivityError when K is not strictly
/// positive and Error when no branch reproduces K to `tol.log`.
QuadraticForm canonical_log(const CanonicalTransform& k, const Tolerances& tol = Tolerances::defaults());

}  // namespace quadflow
