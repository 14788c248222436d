#include "quadflow/symbol_calculus.hpp"

#include "quadflow/gaussian_integral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace quadflow {

namespace {

void require_n(int a, int b) {
    if (a != b) throw DimensionError("operands of different dimension");
}

cplx dot(const CVector& a, const CVector& b) { return (a.transpose() * b)(0, 0); }

CMatrix sym(const CMatrix& m) { return 0.5 * (m + m.transpose()); }

GaussianSymbol shift_half(const PhaseVector& v, const GaussianSymbol& a, double side) {
    require_n(v.n(), a.n());
    const CVector& vv = v.data();
    const CMatrix j = symplectic_j(a.n());
    GaussianSymbol out = a;
    out.l = a.l - a.G * vv + side * kI * (j * vv);
    out.c = a.c * std::exp(0.25 * dot(vv, a.G * vv) - 0.5 * dot(a.l, vv));
    return out;
}

}  // namespace

GaussianSymbol GaussianSymbol::one(int n) {
    check_dimension(n);
    GaussianSymbol a;
    a.G = CMatrix::Zero(2 * n, 2 * n);
    a.l = CVector::Zero(2 * n);
    return a;
}

cplx GaussianSymbol::operator()(const PhaseVector& z) const {
    require_n(z.n(), n());
    const CVector& zz = z.data();
    return c * std::exp(dot(zz, G * zz) + dot(l, zz));
}

bool GaussianSymbol::integrable(double tol) const {
    const CMatrix h = -0.5 * (G + G.adjoint());
    return Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues()(0) > tol;
}

GaussianSymbol mehler_symbol(const QuadraticForm& q, bool formal, const Tolerances& tol) {
    const CanonicalTransform k = flow(q);
    if (!formal) {
        const PositivityReport rep = strict_positivity(k, tol);
        if (!rep.is_strict)
            throw PositivityError("Mehler symbol needs a strictly positive flow (margin " + std::to_string(rep.margin) + ")",
                                  rep.margin);
    }
    const int n = q.n();
    const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
    const CMatrix kp = id + k.mat();
    const CVector spec = Eigen::ComplexEigenSolver<CMatrix>(k.mat(), false).eigenvalues();
    for (Eigen::Index i = 0; i < spec.size(); ++i)
        if (std::abs(spec(i) + 1.0) <= tol.spec) throw DegenerateError("-1 is an eigenvalue of K; no Mehler symbol");

    const CMatrix t = kp.partialPivLu().solve(k.mat() - id);
    GaussianSymbol a;
    a.G = sym(-kI * symplectic_j(n) * t);
    a.l = CVector::Zero(2 * n);
    // det cosh(H/2) = 2^{-2n} det(1 + K) since tr H = 0.
    a.c = std::pow(2.0, n) / std::sqrt(kp.determinant());
    a.sign_ambiguous = true;
    return a;
}

CMatrix mehler_tanh(const GaussianSymbol& a) { return -kI * symplectic_j(a.n()) * a.G; }

GaussianSymbol shift_symbol(const PhaseVector& v) { return shift_left(ShiftOp{v}, GaussianSymbol::one(v.n())); }

GaussianSymbol shift_left(const ShiftOp& s, const GaussianSymbol& a) { return shift_half(s.v, a, -1.0); }

GaussianSymbol shift_right(const ShiftOp& s, const GaussianSymbol& a) { return shift_half(s.v, a, 1.0); }

GaussianSymbol two_sided_shift(const PhaseVector& v, const GaussianSymbol& a) {
    require_n(v.n(), a.n());
    const CVector& vv = v.data();
    GaussianSymbol out = a;
    out.l = a.l - 2.0 * (a.G * vv);
    out.c = a.c * std::exp(dot(vv, a.G * vv) - dot(a.l, vv));
    return out;
}

ShiftProduct shift_algebra(const ShiftOp& v1, const ShiftOp& v2) {
    return {std::exp(0.5 * kI * symplectic_form(v1.v, v2.v)), ShiftOp{v1.v + v2.v}};
}

ShiftOp shift_inverse(const ShiftOp& s) { return {-s.v}; }

ShiftOp shift_adjoint(const ShiftOp& s) { return {-s.v.conj()}; }

Crossing crossing(const QuadraticForm& q, const PhaseVector& v, const Tolerances& tol) {
    require_n(q.n(), v.n());
    const CanonicalTransform k = flow(q);
    const PositivityReport rep = strict_positivity(k, tol);
    if (!rep.is_strict)
        throw PositivityError("crossing needs a strictly positive flow (margin " + std::to_string(rep.margin) + ")",
                              rep.margin);
    Crossing c;
    c.u = v - k.inverse().mat() * v;
    c.w = v - k.mat() * v;
    c.factor_u = std::exp(0.5 * kI * symplectic_form(c.u, v));
    c.factor_w = std::exp(0.5 * kI * symplectic_form(v, c.w));
    return c;
}

GaussianSymbol weyl_sharp(const GaussianSymbol& a, const GaussianSymbol& b) {
    require_n(a.n(), b.n());
    const int m = 2 * a.n();

    // (a # b)(z) = pi^{-2n} int int a(z + u) b(z + w) exp(-2i sigma(u, w)) du dw,
    // written over (z, u, w).
    GaussianExponent e;
    e.M = CMatrix::Zero(3 * m, 3 * m);
    e.M.block(0, 0, m, m) = a.G + b.G;
    e.M.block(0, m, m, m) = a.G;
    e.M.block(m, 0, m, m) = a.G;
    e.M.block(0, 2 * m, m, m) = b.G;
    e.M.block(2 * m, 0, m, m) = b.G;
    e.M.block(m, m, m, m) = a.G;
    e.M.block(2 * m, 2 * m, m, m) = b.G;
    const CMatrix j = symplectic_j(a.n());
    e.M.block(m, 2 * m, m, m) = -kI * j;
    e.M.block(2 * m, m, m, m) = kI * j;
    e.b = CVector::Zero(3 * m);
    e.b.segment(0, m) = a.l + b.l;
    e.b.segment(m, m) = a.l;
    e.b.segment(2 * m, m) = b.l;
    e.amp = a.c * b.c;

    std::vector<int> drop;
    for (int i = m; i < 3 * m; ++i) drop.push_back(i);
    const GaussianExponent r = integrate_out(e, drop, Convergence::oscillatory);

    GaussianSymbol out;
    out.G = r.M;
    out.l = r.b;
    out.c = r.amp * std::exp(r.c) / std::pow(std::numbers::pi, m);
    out.sign_ambiguous = a.sign_ambiguous || b.sign_ambiguous;
    return out;
}

GaussianSymbol weyl_sharp_centered(const GaussianSymbol& a, const GaussianSymbol& b) {
    require_n(a.n(), b.n());
    if (!a.l.isZero(0.0) || !b.l.isZero(0.0)) throw Error("weyl_sharp_centered: symbols must have no linear part");
    const int n = a.n();
    const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
    const CMatrix t1 = mehler_tanh(a);
    const CMatrix t2 = mehler_tanh(b);
    const CMatrix d = id + t1 * t2;
    const CMatrix t3 = id - (id - t2) * d.partialPivLu().solve(id - t1);

    GaussianSymbol out;
    out.G = sym(-kI * symplectic_j(n) * t3);
    out.l = CVector::Zero(2 * n);
    out.c = a.c * b.c * inverse_sqrt_det(d);
    out.sign_ambiguous = true;
    return out;
}

CompositionResult compose_evolutions(const EvolutionSpec& p1, const EvolutionSpec& p2, const Tolerances& tol) {
    require_n(p1.n(), p2.n());
    const CanonicalTransform k1 = p1.flow();
    const CanonicalTransform k2 = p2.flow();
    const CanonicalTransform k3 = k1 * k2;
    const PositivityReport rep = strict_positivity(k3, tol);
    if (!rep.is_strict)
        throw CompositionError("composition leaves the strictly positive class (margin " + std::to_string(rep.margin) + ")",
                               rep.margin);

    const int n = p1.n();
    const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
    const PhaseVector w1 = p1.v() - k1.mat() * p1.v();
    const PhaseVector u2 = p2.v() - k2.inverse().mat() * p2.v();
    const PhaseVector v3a(CVector((id - k3.mat()).partialPivLu().solve(w1.data())));
    const PhaseVector v3b(CVector((id - k3.inverse().mat()).partialPivLu().solve(u2.data())));
    const PhaseVector v3 = v3a + v3b;

    const QuadraticForm q3 = canonical_log(k3, tol);
    const cplx factor = std::exp(0.5 * kI * (symplectic_form(p1.v() - v3, w1) + symplectic_form(u2, p2.v() - v3)));
    return CompositionResult{EvolutionSpec(q3, v3, tol), factor, true, w1, u2, v3a, v3b};
}

cplx PolynomialSymbol::operator()(const PhaseVector& z) const {
    require_n(z.n(), n());
    const CVector& zz = z.data();
    return dot(zz, S * zz) + dot(b, zz) + c;
}

PolynomialSymbol pullback_inverse(const PolynomialSymbol& a, const CanonicalTransform& k) {
    require_n(a.n(), k.n());
    const CMatrix kinv = k.inverse().mat();
    PolynomialSymbol out;
    out.S = kinv.transpose() * a.S * kinv;
    out.S = sym(out.S);
    out.b = kinv.transpose() * a.b;
    out.c = a.c;
    return out;
}

}  // namespace quadflow
