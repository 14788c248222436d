#pragma once

#include "quadflow/symbol_calculus.hpp"

#include <random>

namespace quadflow {

/// amplitude * exp(i phi(x, y)) with
/// phi = 1/2 x.pxx x + x.pxy y + 1/2 y.pyy y + lx.x + ly.y + c0.
struct GaussianKernel {
    CMatrix pxx, pxy, pyy;
    CVector lx, ly;
    cplx c0{0.0, 0.0};
    cplx amplitude{1.0, 0.0};
    bool sign_ambiguous = false;

    int n() const noexcept { return static_cast<int>(pxx.rows()); }
    /// Full 2n x 2n phi'' in (x, y) order.
    CMatrix hessian() const;
    CVector linear() const;
    cplx phase(const CVector& x, const CVector& y) const;
    cplx operator()(const CVector& x, const CVector& y) const;
    /// Im phi'' positive definite.
    bool nondegenerate(double tol = 1e-12) const;
    /// |det pxy| > tol.deg |phi''|^n.
    bool pxy_invertible(const Tolerances& tol = Tolerances::defaults()) const;
};

/// Random phase with Im phi'' positive definite and a well-conditioned pxy.
GaussianKernel random_nondegenerate(int n, std::mt19937_64& rng, double im_floor = 0.3);

/// (y, -phi_y) -> (x, phi_x).
AffineCanonical kernel_to_affine(const GaussianKernel& k, const Tolerances& tol = Tolerances::defaults());

struct KernelEvolution {
    EvolutionSpec spec;
    cplx c;  // kernel = c * kernel(e^{-iP})
};

KernelEvolution kernel_to_evolution(const GaussianKernel& k, const Tolerances& tol = Tolerances::defaults());

/// Kernel (2 pi)^{-n} int e^{i(x-y).xi} a((x+y)/2, xi) dxi of a Gaussian symbol.
GaussianKernel symbol_to_kernel(const GaussianSymbol& a);

/// Kernel of e^{-iP}, through the Mehler symbol shifted by v.
GaussianKernel evolution_to_kernel(const EvolutionSpec& spec, const Tolerances& tol = Tolerances::defaults());

/// Same as evolution_to_kernel without the positivity certificate. Only for
/// demonstrations on the boundary of the certified class.
GaussianKernel formal_evolution_to_kernel(const QuadraticForm& q, const PhaseVector& v,
                                          const Tolerances& tol = Tolerances::defaults());

/// phi*(x, y) = -conj(phi(conj y, conj x)).
GaussianKernel kernel_adjoint(const GaussianKernel& k);

/// Kernel of T1 T2; needs Im(pyy1 + pxx2) positive definite.
GaussianKernel kernel_compose(const GaussianKernel& k1, const GaussianKernel& k2);

/// Kernel of S_a T (analytic in a, so complex a is allowed).
GaussianKernel shift_kernel_left(const PhaseVector& a, const GaussianKernel& k);
/// Kernel of T S_w.
GaussianKernel shift_kernel_right(const GaussianKernel& k, const PhaseVector& w);

/// Kernel of S_{a2} T S_{a1}^*, real shifts only.
GaussianKernel real_shift_conjugate(const PhaseVector& a2, const GaussianKernel& k, const PhaseVector& a1);

/// Value at (x, y) of the kernel of a^w T (the polynomial acts on x).
cplx polynomial_left_action(const PolynomialSymbol& a, const GaussianKernel& k, const CVector& x, const CVector& y);
/// Value at (x, y) of the kernel of T a^w.
cplx polynomial_right_action(const GaussianKernel& k, const PolynomialSymbol& a, const CVector& x, const CVector& y);

}  // namespace quadflow
