#pragma once

#include "quadflow/evolution.hpp"

namespace quadflow {

/// a(z) = c exp(z . G z + l . z).
struct GaussianSymbol {
    cplx c{1.0, 0.0};
    CMatrix G;
    CVector l;
    bool sign_ambiguous = false;  // c is only known up to a sign

    static GaussianSymbol one(int n);
    int n() const noexcept { return static_cast<int>(G.rows() / 2); }
    cplx operator()(const PhaseVector& z) const;
    /// Hermitian part of -G positive definite (to `tol`).
    bool integrable(double tol = 1e-9) const;
};

struct ShiftOp {
    PhaseVector v;
};

/// c = det(cosh(H_q/2))^{-1/2} (principal root, flagged ambiguous) and
/// z.Gz = sigma(z, (1/i) T z), T = (K+1)^{-1}(K-1). Without `formal`, flow(q)
/// must be strictly positive.
GaussianSymbol mehler_symbol(const QuadraticForm& q, bool formal = false, const Tolerances& tol = Tolerances::defaults());

/// T = -i J G, the tanh(H_q/2) of a Mehler symbol.
CMatrix mehler_tanh(const GaussianSymbol& a);

/// Weyl symbol of S_v (the symbol exp(-i sigma(z, v))).
GaussianSymbol shift_symbol(const PhaseVector& v);

/// Symbol of S_v a^w: a(z - v/2) exp(-i sigma(z, v)).
GaussianSymbol shift_left(const ShiftOp& s, const GaussianSymbol& a);
/// Symbol of a^w S_v^{-1}: a(z - v/2) exp(+i sigma(z, v)).
GaussianSymbol shift_right(const ShiftOp& s, const GaussianSymbol& a);
/// Symbol of S_v a^w S_v^{-1}: a(z - v).
GaussianSymbol two_sided_shift(const PhaseVector& v, const GaussianSymbol& a);

struct ShiftProduct {
    cplx factor;
    ShiftOp combined;
};

/// S_{v1} S_{v2} = exp((i/2) sigma(v1, v2)) S_{v1+v2}.
ShiftProduct shift_algebra(const ShiftOp& v1, const ShiftOp& v2);
ShiftOp shift_inverse(const ShiftOp& s);
ShiftOp shift_adjoint(const ShiftOp& s);

struct Crossing {
    PhaseVector u;  // (1 - K^{-1}) v
    PhaseVector w;  // (1 - K) v
    cplx factor_u;  // S_v e^{-iQ} S_v^{-1} = factor_u e^{-iQ} S_u^{-1}
    cplx factor_w;  //                      = factor_w S_w e^{-iQ}
};

Crossing crossing(const QuadraticForm& q, const PhaseVector& v, const Tolerances& tol = Tolerances::defaults());

/// Symbol of a^w b^w by the exact Gaussian integral of the Moyal product.
/// Oscillatory limits (e.g. b = 1) are taken as Fresnel integrals.
GaussianSymbol weyl_sharp(const GaussianSymbol& a, const GaussianSymbol& b);

/// Closed form for centred Mehler-type symbols (l = 0 on both sides):
/// T3 = 1 - (1 - T2)(1 + T1 T2)^{-1}(1 - T1), amplitude times det(1 + T1 T2)^{-1/2}.
GaussianSymbol weyl_sharp_centered(const GaussianSymbol& a, const GaussianSymbol& b);

struct CompositionResult {
    EvolutionSpec p3;
    cplx factor;
    bool sign_ambiguous = true;
    PhaseVector w1;
    PhaseVector u2;
    PhaseVector v3a;  // (1 - K3)^{-1} w1
    PhaseVector v3b;  // (1 - K3^{-1})^{-1} u2
};

/// e^{-iP1} e^{-iP2} = +-factor e^{-iP3}. Throws CompositionError when K1 K2
/// is not strictly positive.
CompositionResult compose_evolutions(const EvolutionSpec& p1, const EvolutionSpec& p2,
                                     const Tolerances& tol = Tolerances::defaults());

/// a(z) = z . S z + b . z + c, exact polynomial of degree at most 2.
struct PolynomialSymbol {
    CMatrix S;
    CVector b;
    cplx c{0.0, 0.0};

    int n() const noexcept { return static_cast<int>(S.rows() / 2); }
    cplx operator()(const PhaseVector& z) const;
};

/// a o K^{-1}.
PolynomialSymbol pullback_inverse(const PolynomialSymbol& a, const CanonicalTransform& k);

}  // namespace quadflow
