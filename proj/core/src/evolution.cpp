#include "quadflow/evolution.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace quadflow {

namespace {

RMatrix checked_inverse(const RMatrix& m, const char* what) {
    Eigen::JacobiSVD<RMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 1e-12 * std::max(1.0, s(0)))
        throw DegenerateError(std::string(what) + " is singular");
    return m.inverse();
}

// a1 from the complex relation (1 - K2 K) a1 = (1 - K2 K) Re v + i(-1 + 2 K2 - K2 K) Im v.
CVector complex_center_left(const CMatrix& k, const CMatrix& k2, const PhaseVector& v) {
    const Eigen::Index d = k.rows();
    const CMatrix id = CMatrix::Identity(d, d);
    const CMatrix m = k2 * k;
    const CVector im = v.imag().cast<cplx>();
    return v.real().cast<cplx>() + kI * (id - m).partialPivLu().solve((-id + 2.0 * k2 - m) * im);
}

CVector complex_center_right(const CMatrix& k, const CMatrix& k2, const PhaseVector& v) {
    const Eigen::Index d = k.rows();
    const CMatrix id = CMatrix::Identity(d, d);
    const CMatrix m = k * k2;
    const CVector im = v.imag().cast<cplx>();
    return v.real().cast<cplx>() - kI * (id - m).partialPivLu().solve((-id + 2.0 * k - m) * im);
}

}  // namespace

EvolutionSpec::EvolutionSpec(QuadraticForm q, PhaseVector v, const Tolerances& tol)
    : q_(std::move(q)), v_(std::move(v)), k_(quadflow::flow(q_)), margin_(0.0) {
    if (v_.n() != q_.n()) throw DimensionError("shift and quadratic form differ in dimension");
    const PositivityReport rep = strict_positivity(k_, tol);
    margin_ = rep.margin;
    if (!rep.is_strict)
        throw PositivityError("flow is not strictly positive (margin " + std::to_string(rep.margin) + ")", rep.margin);
}

EvolutionSpec::EvolutionSpec(QuadraticForm q, const Tolerances& tol)
    : EvolutionSpec(q, PhaseVector::zero(q.n()), tol) {}

std::vector<double> singular_generators(const CanonicalTransform& k, const Tolerances& tol) {
    const int n = k.n();
    const CMatrix m = k.conj_inverse().mat() * k.mat();
    CVector e = Eigen::ComplexEigenSolver<CMatrix>(m, false).eigenvalues();
    std::vector<cplx> ev(e.data(), e.data() + e.size());
    std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });

    std::vector<double> mu;
    mu.reserve(n);
    for (int j = 0; j < n; ++j) {
        const cplx lo = ev[j];
        const cplx hi = ev[2 * n - 1 - j];
        if (std::abs(std::log(std::abs(lo))) < tol.boundary || std::abs(std::log(std::abs(hi))) < tol.boundary)
            throw BoundaryError("boundary case: eigenvalue of conj(K)^{-1}K within tolerance of the unit circle");
        if (std::abs(lo * hi - 1.0) > tol.pair)
            throw InvariantError("eigenvalues of conj(K)^{-1}K do not pair into {mu, 1/mu}");
        if (lo.real() <= 0.0 || std::abs(lo.imag()) > tol.pair * std::max(1.0, std::abs(lo)))
            throw InvariantError("eigenvalue of conj(K)^{-1}K is not a positive real");
        mu.push_back(std::abs(lo));
    }
    return mu;
}

double norm_from_flow(const CanonicalTransform& k, const Tolerances& tol) {
    const PositivityReport rep = strict_positivity(k, tol);
    if (!rep.is_strict)
        throw PositivityError("flow is not strictly positive (margin " + std::to_string(rep.margin) + ")", rep.margin);
    double log_norm = 0.0;
    for (double m : singular_generators(k, tol)) log_norm += 0.25 * std::log(m);
    return std::exp(log_norm);
}

double norm_quadratic(const QuadraticForm& q, const Tolerances& tol) { return norm_from_flow(flow(q), tol); }

RMatrix A_matrix(const CanonicalTransform& k, const Tolerances& tol) {
    const PositivityReport rep = strict_positivity(k, tol);
    if (!rep.is_strict)
        throw PositivityError("flow is not strictly positive (margin " + std::to_string(rep.margin) + ")", rep.margin);

    const CMatrix& k1 = k.mat();
    const CMatrix k2 = k.conj_inverse().mat();
    const Eigen::Index d = k1.rows();
    const RMatrix id = RMatrix::Identity(d, d);
    const RMatrix a = checked_inverse(k2.imag(), "Im conj(K)^{-1}") * (id - k2.real()) +
                      checked_inverse(k1.imag(), "Im K") * (id - k1.real());

    // Same matrix from the complex center relations; its imaginary part must vanish.
    const CMatrix cid = CMatrix::Identity(d, d);
    const CMatrix ac = -kI * ((cid - k1 * k2).partialPivLu().solve(-cid + 2.0 * k1 - k1 * k2) +
                              (cid - k2 * k1).partialPivLu().solve(-cid + 2.0 * k2 - k2 * k1));
    const double scale = std::max(1.0, a.norm());
    if (ac.imag().norm() > tol.residue * scale || (ac.real() - a).norm() > tol.residue * scale)
        throw InvariantError("A matrix: complex and real constructions disagree");
    return a;
}

DecompositionData decompose(const EvolutionSpec& spec, const Tolerances& tol) {
    const CanonicalTransform& k = spec.flow();
    const CMatrix& k1 = k.mat();
    const CMatrix k2 = k.conj_inverse().mat();
    const PhaseVector& v = spec.v();
    const Eigen::Index d = k1.rows();
    const RMatrix id = RMatrix::Identity(d, d);
    const RVector re = v.real();
    const RVector im = v.imag();

    DecompositionData out;
    out.mu = singular_generators(k, tol);
    out.A = A_matrix(k, tol);

    const RVector a1 = re + checked_inverse(k1.imag(), "Im K") * (k1.real() - id) * im;
    const RVector a2 = re - checked_inverse(k2.imag(), "Im conj(K)^{-1}") * (k2.real() - id) * im;
    out.a1 = PhaseVector::from_real(a1);
    out.a2 = PhaseVector::from_real(a2);

    const CVector c1 = complex_center_left(k1, k2, v);
    const CVector c2 = complex_center_right(k1, k2, v);
    out.a1_residue = c1.imag().norm();
    out.a2_residue = c2.imag().norm();
    const double scale = std::max(1.0, std::max(a1.norm(), a2.norm()));
    if ((c1.real() - a1).norm() > tol.residue * scale || (c2.real() - a2).norm() > tol.residue * scale)
        throw InvariantError("center formulas disagree");

    out.phase = std::exp(0.5 * kI * symplectic_form(v, out.a2 - out.a1));
    double log_norm = std::log(std::abs(out.phase));
    for (double m : out.mu) log_norm += 0.25 * std::log(m);
    out.norm = std::exp(log_norm);
    return out;
}

double norm_shifted(const EvolutionSpec& spec, const Tolerances& tol) {
    const RMatrix a = A_matrix(spec.flow(), tol);
    const PhaseVector im = PhaseVector::from_real(spec.v().imag());
    const PhaseVector aim = PhaseVector::from_real(a * spec.v().imag());
    const double expo = -0.5 * symplectic_form(im, aim).real();
    return std::exp(expo) * norm_from_flow(spec.flow(), tol);
}

QuadraticForm rotated_oscillator(double theta) {
    CMatrix h = CMatrix::Zero(2, 2);
    h(0, 0) = std::polar(1.0, theta);
    h(1, 1) = std::polar(1.0, -theta);
    return QuadraticForm(h);
}

std::vector<CenterSample> center_path(double theta, double t2, const PhaseVector& v, const std::vector<double>& t1_samples,
                                      const Tolerances& tol) {
    if (v.n() != 1) throw DimensionError("center_path works in one dimension");
    const QuadraticForm qt = rotated_oscillator(theta);
    std::vector<CenterSample> out;
    out.reserve(t1_samples.size());
    for (double t1 : t1_samples) {
        CenterSample s;
        s.t1 = t1;
        const QuadraticForm q = qt.scaled(cplx(t1, t2));
        const PositivityReport rep = strict_positivity(flow(q), tol);
        s.margin = rep.margin;
        if (rep.is_strict) {
            try {
                const DecompositionData d = decompose(EvolutionSpec(q, v, tol), tol);
                s.a1 = d.a1;
                s.a2 = d.a2;
                s.ok = true;
            } catch (const Error&) {
                s.ok = false;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

double critical_time(double theta) {
    if (!(std::abs(theta) < 0.5 * std::numbers::pi)) throw Error("critical_time: theta must lie in (-pi/2, pi/2)");
    const double s = std::abs(std::sin(theta));
    return -0.5 * std::log((1.0 + s) / (1.0 - s));
}

std::vector<double> real_log_williamson(const CanonicalTransform& k, const Tolerances& tol) {
    const PositivityReport rep = strict_positivity(k, tol);
    if (!rep.is_strict)
        throw PositivityError("real_log_exists: K is not strictly positive (margin " + std::to_string(rep.margin) + ")",
                              rep.margin);
    const CMatrix& km = k.mat();
    if ((k.conj_inverse().mat() - km).norm() > 1e-8 * scale_of(km))
        throw InvariantError("real_log_exists: conj(K)^{-1} differs from K");

    const int n = k.n();
    const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
    const CMatrix m = -kI * (id + km).partialPivLu().solve(id - km);
    const CMatrix jm = symplectic_j(n) * m;
    const CMatrix hess = jm + jm.transpose();
    if (hess.imag().norm() > 1e-8 * scale_of(hess))
        throw InvariantError("real_log_exists: q1 is not real");

    const CMatrix h = hamilton_matrix(QuadraticForm(CMatrix(hess.real().cast<cplx>())));
    const CVector e = Eigen::ComplexEigenSolver<CMatrix>(h, false).eigenvalues();
    std::vector<double> mu;
    for (Eigen::Index i = 0; i < e.size(); ++i)
        if (e(i).imag() > 0.0) mu.push_back(e(i).imag());
    if (static_cast<int>(mu.size()) != n) throw InvariantError("real_log_exists: q1 is not positive definite");
    std::sort(mu.begin(), mu.end());
    return mu;
}

bool real_log_exists(const CanonicalTransform& k, const Tolerances& tol) {
    const auto mu = real_log_williamson(k, tol);
    return std::all_of(mu.begin(), mu.end(), [](double m) { return m > 0.0 && m < 2.0; });
}

}  // namespace quadflow
