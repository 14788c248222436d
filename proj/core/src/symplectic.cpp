#include "quadflow/symplectic.hpp"

#include "quadflow/positivity.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace quadflow {

namespace {

void require_square_even(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0)
        throw DimensionError(std::string(what) + ": expected a 2n x 2n matrix");
    check_dimension(static_cast<int>(m.rows() / 2));
}

void require_same_n(const PhaseVector& a, const PhaseVector& b) {
    if (a.n() != b.n()) throw DimensionError("phase vectors of different dimension");
}

// Newton iteration for the matrix sign function with determinant scaling.
CMatrix matrix_sign(const CMatrix& t) {
    const Eigen::Index dim = t.rows();
    CMatrix s = t;
    for (int it = 0; it < 100; ++it) {
        Eigen::PartialPivLU<CMatrix> lu(s);
        const CMatrix inv = lu.inverse();
        double g = 1.0;
        if (it < 10) {
            const double ld = std::log(std::abs(lu.determinant()));
            if (std::isfinite(ld)) g = std::exp(-ld / static_cast<double>(dim));
        }
        CMatrix next = 0.5 * (g * s + inv / g);
        const double delta = (next - s).norm();
        s = std::move(next);
        if (delta <= 1e-14 * s.norm()) break;
    }
    return s;
}

// Orthonormal basis of the range of a projector of known rank.
CMatrix range_basis(const CMatrix& p, Eigen::Index rank) {
    Eigen::ColPivHouseholderQR<CMatrix> qr(p);
    qr.setThreshold(1e-8);
    if (qr.rank() != rank) throw Error("canonical_log: invariant subspace has unexpected dimension");
    const CMatrix q = qr.householderQ();
    return q.leftCols(rank);
}

// Distance in angle from the ray at angle `alpha` to the arguments of `eigs`.
double angular_gap(double alpha, const CVector& eigs) {
    double gap = std::numbers::pi;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        double d = std::abs(std::remainder(std::arg(eigs(i)) - alpha, 2.0 * std::numbers::pi));
        gap = std::min(gap, d);
    }
    return gap;
}

// log with cut along the ray e^{i alpha}[0, inf).
CMatrix log_with_cut(const CMatrix& b, double alpha) {
    const double rot = std::numbers::pi - alpha;
    const CMatrix rotated = std::polar(1.0, rot) * b;
    CMatrix l = rotated.log();
    l.diagonal().array() -= cplx(0.0, rot);
    return l;
}

}  // namespace

PhaseVector::PhaseVector(int n) : data_(CVector::Zero(2 * n)) { check_dimension(n); }

PhaseVector::PhaseVector(CVector data) : data_(std::move(data)) {
    if (data_.size() % 2 != 0) throw DimensionError("phase vector needs even length");
    check_dimension(static_cast<int>(data_.size() / 2));
}

PhaseVector::PhaseVector(const CVector& x, const CVector& xi) : data_(x.size() + xi.size()) {
    if (x.size() != xi.size()) throw DimensionError("x and xi parts differ in length");
    check_dimension(static_cast<int>(x.size()));
    data_ << x, xi;
}

PhaseVector PhaseVector::from_real(const RVector& data) { return PhaseVector(CVector(data.cast<cplx>())); }

PhaseVector PhaseVector::operator+(const PhaseVector& o) const {
    require_same_n(*this, o);
    return PhaseVector(CVector(data_ + o.data_));
}

PhaseVector PhaseVector::operator-(const PhaseVector& o) const {
    require_same_n(*this, o);
    return PhaseVector(CVector(data_ - o.data_));
}

PhaseVector operator*(const CMatrix& m, const PhaseVector& z) {
    if (m.cols() != z.data().size()) throw DimensionError("matrix-vector size mismatch");
    return PhaseVector(CVector(m * z.data()));
}

CMatrix symplectic_j(int n) {
    CMatrix j = CMatrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = -CMatrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = CMatrix::Identity(n, n);
    return j;
}

cplx symplectic_form(const PhaseVector& z, const PhaseVector& w) {
    require_same_n(z, w);
    return (z.xi().array() * w.x().array()).sum() - (w.xi().array() * z.x().array()).sum();
}

CMatrix symplectic_transpose(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0) throw DimensionError("symplectic_transpose: expected 2n x 2n");
    const CMatrix j = symplectic_j(static_cast<int>(m.rows() / 2));
    return -j * m.transpose() * j;
}

QuadraticForm::QuadraticForm(const CMatrix& hess, const Tolerances& tol) {
    require_square_even(hess, "QuadraticForm");
    const double asym = (hess - hess.transpose()).norm();
    if (asym > tol.sym * scale_of(hess))
        throw InvariantError("Hessian is not symmetric (|H - H^T| = " + std::to_string(asym) + ")");
    hess_ = 0.5 * (hess + hess.transpose());
}

QuadraticForm QuadraticForm::harmonic_oscillator(int n) {
    check_dimension(n);
    return QuadraticForm(CMatrix::Identity(2 * n, 2 * n));
}

cplx QuadraticForm::operator()(const PhaseVector& z) const {
    if (z.n() != n()) throw DimensionError("quadratic form evaluated at vector of wrong dimension");
    return 0.5 * z.data().transpose() * (hess_ * z.data());
}

double canonical_residue(const CMatrix& k) {
    const CMatrix j = symplectic_j(static_cast<int>(k.rows() / 2));
    const double s = std::max(1.0, k.squaredNorm());
    return (k.transpose() * j * k - j).norm() / s;
}

bool is_canonical(const CMatrix& k, const Tolerances& tol) {
    if (k.rows() != k.cols() || k.rows() % 2 != 0 || k.rows() == 0) return false;
    return canonical_residue(k) <= tol.can;
}

CanonicalTransform::CanonicalTransform(const CMatrix& mat, const Tolerances& tol) : mat_(mat) {
    require_square_even(mat, "CanonicalTransform");
    const double r = canonical_residue(mat);
    if (r > tol.can) throw InvariantError("matrix is not canonical (residue " + std::to_string(r) + ")");
}

CanonicalTransform CanonicalTransform::inverse() const { return trusted(symplectic_transpose(mat_)); }

CanonicalTransform CanonicalTransform::conj_inverse() const {
    return trusted(symplectic_transpose(CMatrix(mat_.conjugate())));
}

CanonicalTransform CanonicalTransform::operator*(const CanonicalTransform& o) const {
    if (n() != o.n()) throw DimensionError("canonical transforms of different dimension");
    return trusted(mat_ * o.mat_);
}

PhaseVector AffineCanonical::fixed_point() const {
    const int n = linear.n();
    if (shift.n() != n) throw DimensionError("affine map: shift and linear part differ in dimension");
    const CMatrix a = CMatrix::Identity(2 * n, 2 * n) - linear.mat();
    Eigen::FullPivLU<CMatrix> lu(a);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw DegenerateError("1 is an eigenvalue of K; no fixed point");
    return PhaseVector(CVector(lu.solve(shift.data())));
}

CMatrix hamilton_matrix(const QuadraticForm& q) { return -symplectic_j(q.n()) * q.hess(); }

QuadraticForm quadratic_from_hamilton(const CMatrix& h, const Tolerances& tol) {
    require_square_even(h, "quadratic_from_hamilton");
    const double r = (h + symplectic_transpose(h)).norm();
    if (r > tol.sym * scale_of(h))
        throw InvariantError("matrix is not a Hamilton matrix (|H + H^sT| = " + std::to_string(r) + ")");
    return QuadraticForm(CMatrix(symplectic_j(static_cast<int>(h.rows() / 2)) * h), tol);
}

CanonicalTransform flow(const QuadraticForm& q, cplx t) {
    const CMatrix h = t * hamilton_matrix(q);
    return CanonicalTransform::trusted(h.exp());
}

QuadraticForm canonical_log(const CanonicalTransform& k, const Tolerances& tol) {
    const PositivityReport rep = strict_positivity(k, tol);
    if (!rep.is_strict)
        throw PositivityError("no certified logarithm: K is not strictly positive (margin " +
                                  std::to_string(rep.margin) + ")",
                              rep.margin);

    const int n = k.n();
    const Eigen::Index dim = 2 * n;
    const CMatrix id = CMatrix::Identity(dim, dim);
    const CMatrix& km = k.mat();

    // Cayley transform sends |lambda| < 1 to Re < 0.
    const CMatrix t = (km + id).partialPivLu().solve(km - id);
    const CMatrix sgn = matrix_sign(t);
    const CMatrix v_in = range_basis(0.5 * (id - sgn), n);
    const CMatrix v_out = range_basis(0.5 * (id + sgn), n);

    CMatrix w(dim, dim);
    w << v_in, v_out;
    Eigen::PartialPivLU<CMatrix> wlu(w);
    const CMatrix b = wlu.solve(km * w);
    const CMatrix b11 = b.topLeftCorner(n, n);
    const CMatrix b22inv = b.bottomRightCorner(n, n).inverse();

    CVector eigs(dim);
    eigs << Eigen::ComplexEigenSolver<CMatrix>(b11, false).eigenvalues(),
        Eigen::ComplexEigenSolver<CMatrix>(b22inv, false).eigenvalues();

    double best_alpha = std::numbers::pi;
    double best_gap = -1.0;
    for (int c = 0; c < 64; ++c) {
        const double alpha = std::numbers::pi - 2.0 * std::numbers::pi * c / 64.0;
        const double gap = angular_gap(alpha, eigs);
        if (gap > best_gap + 1e-12) {
            best_gap = gap;
            best_alpha = alpha;
        }
    }
    if (best_gap < 1e-6) throw Error("canonical_log: every branch cut ray meets the spectrum");

    CMatrix l = CMatrix::Zero(dim, dim);
    l.topLeftCorner(n, n) = log_with_cut(b11, best_alpha);
    l.bottomRightCorner(n, n) = -log_with_cut(b22inv, best_alpha);
    CMatrix h = w * l * wlu.inverse();
    h = 0.5 * (h - symplectic_transpose(h));

    const double resid = (h.exp() - km).norm();
    if (resid > tol.log * scale_of(km))
        throw Error("canonical_log: exp(H) misses K by " + std::to_string(resid));

    Tolerances loose = tol;
    loose.sym = 1e-6;
    return QuadraticForm(CMatrix(symplectic_j(n) * h), loose);
}

}  // namespace quadflow
