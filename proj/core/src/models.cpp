#include "quadflow/models.hpp"

#include <cmath>
#include <numbers>

namespace quadflow {

RhoNorm rho_norm(const RotatedHOParams& p) {
    const double ct = std::norm(std::cos(p.t));
    const double st = std::norm(std::sin(p.t));
    RhoNorm r;
    r.a = ct + std::cos(2.0 * p.theta) * st;
    r.compact = r.a > 1.0 && p.t.imag() < 0.0;
    if (r.compact) r.norm = std::pow(r.a - std::sqrt(r.a * r.a - 1.0), 0.25);
    return r;
}

double rho_growth_factor(const RotatedHOParams& p, const Tolerances& tol) {
    const PositivityReport rep = strict_positivity(flow(p.q()), tol);
    if (!rep.is_strict)
        throw PositivityError("growth factor needs a strictly positive flow (margin " + std::to_string(rep.margin) + ")",
                              rep.margin);
    const double t1 = p.t.real(), t2 = p.t.imag();
    const double num = std::cos(t1) - std::cosh(t2);
    const double dx = std::cos(p.theta) * std::sinh(t2) + std::sin(p.theta) * std::sin(t1);
    const double dxi = std::cos(p.theta) * std::sinh(t2) - std::sin(p.theta) * std::sin(t1);
    if (std::abs(dx) < 1e-14 || std::abs(dxi) < 1e-14) throw DegenerateError("growth factor denominator vanishes");
    const double vx = p.v.imag()(0), vxi = p.v.imag()(1);
    return std::exp(num / dx * vx * vx + num / dxi * vxi * vxi);
}

DaviesSmallTime davies_small_time(double s) {
    const double r = s / std::sqrt(2.0);
    const RhoNorm rn = rho_norm({std::numbers::pi / 4.0, cplx(r, -r), PhaseVector::zero(1)});
    return {rn.norm, 1.0 - s * s / (4.0 * std::sqrt(3.0))};
}

ShiftedDavies shifted_davies_blowup(double s, double wx, double wxi, const Tolerances& tol) {
    const double r = s / std::sqrt(2.0);
    CVector v(2);
    v << cplx(0.0, wx), cplx(0.0, wxi);
    const EvolutionSpec spec(rotated_oscillator(std::numbers::pi / 4.0).scaled(cplx(r, -r)), PhaseVector(v), tol);
    const double exact = std::log(norm_shifted(spec, tol));
    const double expansion = 6.0 / s * wx * wx + 0.5 * s * wxi * wxi - s * s / (4.0 * std::sqrt(3.0));
    return {exact, expansion};
}

CenterGeometry ho_center_geometry(double t2, const PhaseVector& v) {
    if (!(t2 < 0.0)) throw Error("ho_center_geometry: t2 must be negative");
    if (v.n() != 1) throw DimensionError("ho_center_geometry works in one dimension");
    const RVector im = v.imag();
    if (im.norm() == 0.0) throw Error("ho_center_geometry: Im v must be nonzero");
    const RVector re = v.real();
    RMatrix h(2, 2);
    h << 0.0, 1.0, -1.0, 0.0;
    const double coth = 1.0 / std::tanh(t2);
    return {PhaseVector::from_real(re - coth * h * im), PhaseVector::from_real(re + coth * h * im),
            im.norm() / std::abs(std::sinh(t2))};
}

}  // namespace quadflow
