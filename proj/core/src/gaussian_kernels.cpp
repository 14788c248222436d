#include "quadflow/gaussian_kernels.hpp"

#include "quadflow/gaussian_integral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>

namespace quadflow {

namespace {

cplx dot(const CVector& a, const CVector& b) { return (a.transpose() * b)(0, 0); }

GaussianKernel from_exponent(const GaussianExponent& e, int n) {
    const CMatrix h = -2.0 * kI * e.M;
    const CVector l = -kI * e.b;
    GaussianKernel k;
    k.pxx = 0.5 * (h.topLeftCorner(n, n) + h.topLeftCorner(n, n).transpose());
    k.pxy = 0.5 * (h.topRightCorner(n, n) + h.bottomLeftCorner(n, n).transpose());
    k.pyy = 0.5 * (h.bottomRightCorner(n, n) + h.bottomRightCorner(n, n).transpose());
    k.lx = l.head(n);
    k.ly = l.tail(n);
    k.c0 = -kI * e.c;
    k.amplitude = e.amp;
    return k;
}

void require_same(const GaussianKernel& a, const GaussianKernel& b) {
    if (a.n() != b.n()) throw DimensionError("kernels of different dimension");
}

CMatrix random_real(int r, int c, std::mt19937_64& rng, double sd) {
    std::normal_distribution<double> nd(0.0, sd);
    CMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = nd(rng);
    return m;
}

CVector random_complex(int r, std::mt19937_64& rng, double sd) {
    std::normal_distribution<double> nd(0.0, sd);
    CVector v(r);
    for (int i = 0; i < r; ++i) v(i) = cplx(nd(rng), nd(rng));
    return v;
}

// Envelope centre: the minimiser of Im phi over real (x, y).
CVector envelope_center(const GaussianKernel& k) {
    const RMatrix h = k.hessian().imag();
    return (-h.ldlt().solve(RVector(k.linear().imag()))).cast<cplx>();
}

}  // namespace

CMatrix GaussianKernel::hessian() const {
    const int m = n();
    CMatrix h(2 * m, 2 * m);
    h << pxx, pxy, pxy.transpose(), pyy;
    return h;
}

CVector GaussianKernel::linear() const {
    CVector l(2 * n());
    l << lx, ly;
    return l;
}

cplx GaussianKernel::phase(const CVector& x, const CVector& y) const {
    return 0.5 * dot(x, pxx * x) + dot(x, pxy * y) + 0.5 * dot(y, pyy * y) + dot(lx, x) + dot(ly, y) + c0;
}

cplx GaussianKernel::operator()(const CVector& x, const CVector& y) const {
    return amplitude * std::exp(kI * phase(x, y));
}

bool GaussianKernel::nondegenerate(double tol) const {
    const RMatrix h = hessian().imag();
    return Eigen::SelfAdjointEigenSolver<RMatrix>(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly).eigenvalues()(0) > tol;
}

bool GaussianKernel::pxy_invertible(const Tolerances& tol) const {
    const double scale = std::max(1.0, hessian().norm());
    return std::abs(pxy.determinant()) > tol.deg * std::pow(scale, n());
}

GaussianKernel random_nondegenerate(int n, std::mt19937_64& rng, double im_floor) {
    check_dimension(n);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (;;) {
        const CMatrix a = random_real(2 * n, 2 * n, rng, 0.7);
        const CMatrix b = random_real(2 * n, 2 * n, rng, 0.7);
        const CMatrix re = 0.5 * (a + a.transpose());
        const CMatrix im = b * b.transpose() / (2.0 * n) + im_floor * CMatrix::Identity(2 * n, 2 * n);
        const CMatrix h = re + kI * im;

        GaussianKernel k;
        k.pxx = h.topLeftCorner(n, n);
        k.pxy = h.topRightCorner(n, n);
        k.pyy = h.bottomRightCorner(n, n);
        const auto sv = Eigen::JacobiSVD<CMatrix>(k.pxy).singularValues();
        if (sv(n - 1) < 0.15) continue;
        k.lx = random_complex(n, rng, 0.5);
        k.ly = random_complex(n, rng, 0.5);
        k.c0 = random_complex(1, rng, 0.3)(0);
        k.amplitude = std::polar(0.5 + ud(rng), 2.0 * std::numbers::pi * ud(rng));
        return k;
    }
}

AffineCanonical kernel_to_affine(const GaussianKernel& k, const Tolerances& tol) {
    if (!k.pxy_invertible(tol)) throw DegenerateError("kernel has degenerate mixed Hessian phi''_xy");
    const int n = k.n();
    const CMatrix inv = k.pxy.transpose().inverse();
    CMatrix m(2 * n, 2 * n);
    m << -inv * k.pyy, -inv, k.pxy - k.pxx * inv * k.pyy, -k.pxx * inv;
    CVector w(2 * n);
    w << -inv * k.ly, -k.pxx * inv * k.ly + k.lx;
    return AffineCanonical{CanonicalTransform::trusted(m), PhaseVector(w)};
}

KernelEvolution kernel_to_evolution(const GaussianKernel& k, const Tolerances& tol) {
    const AffineCanonical aff = kernel_to_affine(k, tol);
    const PositivityReport rep = strict_positivity(aff.linear, tol);
    if (!rep.is_strict)
        throw PositivityError("kernel is outside the strictly positive class (margin " + std::to_string(rep.margin) + ")",
                              rep.margin);
    const QuadraticForm q = canonical_log(aff.linear, tol);
    const PhaseVector v = aff.fixed_point();
    EvolutionSpec spec(q, v, tol);
    const GaussianKernel ref = evolution_to_kernel(spec, tol);

    const int n = k.n();
    CVector x = CVector::Zero(n), y = CVector::Zero(n);
    if (std::abs(ref(x, y)) < 1e-12 || std::abs(k(x, y)) < 1e-12) {
        const CVector u = envelope_center(k);
        x = u.head(n);
        y = u.tail(n);
    }
    return KernelEvolution{std::move(spec), k(x, y) / ref(x, y)};
}

GaussianKernel symbol_to_kernel(const GaussianSymbol& a) {
    const int n = a.n();
    CMatrix p = CMatrix::Zero(2 * n, 3 * n);
    p.block(0, 0, n, n) = 0.5 * CMatrix::Identity(n, n);
    p.block(0, n, n, n) = 0.5 * CMatrix::Identity(n, n);
    p.block(n, 2 * n, n, n) = CMatrix::Identity(n, n);

    GaussianExponent e;
    e.M = p.transpose() * a.G * p;
    const CMatrix half = 0.5 * kI * CMatrix::Identity(n, n);
    e.M.block(0, 2 * n, n, n) += half;
    e.M.block(2 * n, 0, n, n) += half;
    e.M.block(n, 2 * n, n, n) -= half;
    e.M.block(2 * n, n, n, n) -= half;
    e.b = p.transpose() * a.l;
    e.amp = a.c * std::pow(2.0 * std::numbers::pi, -n);

    std::vector<int> drop;
    for (int i = 2 * n; i < 3 * n; ++i) drop.push_back(i);
    GaussianKernel k = from_exponent(integrate_out(e, drop), n);
    k.sign_ambiguous = a.sign_ambiguous;
    return k;
}

GaussianKernel evolution_to_kernel(const EvolutionSpec& spec, const Tolerances& tol) {
    return symbol_to_kernel(two_sided_shift(spec.v(), mehler_symbol(spec.q(), false, tol)));
}

GaussianKernel formal_evolution_to_kernel(const QuadraticForm& q, const PhaseVector& v, const Tolerances& tol) {
    return symbol_to_kernel(two_sided_shift(v, mehler_symbol(q, true, tol)));
}

GaussianKernel kernel_adjoint(const GaussianKernel& k) {
    GaussianKernel out;
    out.pxx = -k.pyy.conjugate();
    out.pyy = -k.pxx.conjugate();
    out.pxy = -k.pxy.adjoint();
    out.lx = -k.ly.conjugate();
    out.ly = -k.lx.conjugate();
    out.c0 = -std::conj(k.c0);
    out.amplitude = std::conj(k.amplitude);
    out.sign_ambiguous = k.sign_ambiguous;
    return out;
}

GaussianKernel kernel_compose(const GaussianKernel& k1, const GaussianKernel& k2) {
    require_same(k1, k2);
    const int n = k1.n();
    // i(phi1(x, z) + phi2(z, y)) over (x, z, y).
    GaussianExponent e;
    e.M = CMatrix::Zero(3 * n, 3 * n);
    e.M.block(0, 0, n, n) = k1.pxx;
    e.M.block(0, n, n, n) = k1.pxy;
    e.M.block(n, 0, n, n) = k1.pxy.transpose();
    e.M.block(n, n, n, n) = k1.pyy + k2.pxx;
    e.M.block(n, 2 * n, n, n) = k2.pxy;
    e.M.block(2 * n, n, n, n) = k2.pxy.transpose();
    e.M.block(2 * n, 2 * n, n, n) = k2.pyy;
    e.M *= 0.5 * kI;
    e.b = CVector(3 * n);
    e.b << k1.lx, k1.ly + k2.lx, k2.ly;
    e.b *= kI;
    e.c = kI * (k1.c0 + k2.c0);
    e.amp = k1.amplitude * k2.amplitude;

    std::vector<int> drop;
    for (int i = n; i < 2 * n; ++i) drop.push_back(i);
    GaussianKernel out = from_exponent(integrate_out(e, drop), n);
    out.sign_ambiguous = k1.sign_ambiguous || k2.sign_ambiguous;
    return out;
}

GaussianKernel shift_kernel_left(const PhaseVector& a, const GaussianKernel& k) {
    if (a.n() != k.n()) throw DimensionError("shift and kernel differ in dimension");
    const CVector ax = a.x(), axi = a.xi();
    GaussianKernel out = k;
    out.lx = k.lx - k.pxx * ax + axi;
    out.ly = k.ly - k.pxy.transpose() * ax;
    out.c0 = k.c0 + 0.5 * dot(ax, k.pxx * ax) - dot(k.lx, ax) - 0.5 * dot(ax, axi);
    return out;
}

GaussianKernel shift_kernel_right(const GaussianKernel& k, const PhaseVector& w) {
    if (w.n() != k.n()) throw DimensionError("shift and kernel differ in dimension");
    const CVector wx = w.x(), wxi = w.xi();
    GaussianKernel out = k;
    out.lx = k.lx + k.pxy * wx;
    out.ly = k.ly + k.pyy * wx + wxi;
    out.c0 = k.c0 + 0.5 * dot(wx, k.pyy * wx) + dot(k.ly, wx) + 0.5 * dot(wx, wxi);
    return out;
}

GaussianKernel real_shift_conjugate(const PhaseVector& a2, const GaussianKernel& k, const PhaseVector& a1) {
    const double s = std::max(1.0, std::max(a1.data().norm(), a2.data().norm()));
    if (a1.imag().norm() > 1e-14 * s || a2.imag().norm() > 1e-14 * s)
        throw Error("real_shift_conjugate: complex shifts are unbounded; use the symbol calculus");
    return shift_kernel_right(shift_kernel_left(a2, k), -a1);
}

namespace {

// (a^w e^{i phi(., y)})(x) for a quadratic polynomial a, with
// phi_x = d phi/dx (affine in x) and pxx = d^2 phi/dx^2.
cplx polynomial_on_exponential(const CMatrix& s, const CVector& b, cplx c, const CVector& x, const CVector& grad,
                               const CMatrix& hess) {
    const int n = static_cast<int>(x.size());
    CVector w(2 * n);
    w << x, grad;
    const cplx trace = s.topRightCorner(n, n).trace() + (s.bottomRightCorner(n, n) * hess).trace();
    return dot(w, s * w) + dot(b, w) + c - kI * trace;
}

}  // namespace

cplx polynomial_left_action(const PolynomialSymbol& a, const GaussianKernel& k, const CVector& x, const CVector& y) {
    if (a.n() != k.n()) throw DimensionError("symbol and kernel differ in dimension");
    const CVector grad = k.pxx * x + k.pxy * y + k.lx;
    return polynomial_on_exponential(a.S, a.b, a.c, x, grad, k.pxx) * k(x, y);
}

cplx polynomial_right_action(const GaussianKernel& k, const PolynomialSymbol& a, const CVector& x, const CVector& y) {
    if (a.n() != k.n()) throw DimensionError("symbol and kernel differ in dimension");
    const int n = k.n();
    // The transpose of a^w has symbol a(y, -eta).
    CMatrix r = CMatrix::Identity(2 * n, 2 * n);
    r.bottomRightCorner(n, n) *= -1.0;
    const CMatrix s = r * a.S * r;
    const CVector b = r * a.b;
    const CVector grad = k.pxy.transpose() * x + k.pyy * y + k.ly;
    return polynomial_on_exponential(s, b, a.c, y, grad, k.pyy) * k(x, y);
}

}  // namespace quadflow
