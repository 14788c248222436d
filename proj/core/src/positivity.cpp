#include "quadflow/positivity.hpp"

#include <Eigen/Eigenvalues>

namespace quadflow {

namespace {

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a) {
    const CMatrix h = 0.5 * (a + a.adjoint());
    return Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

CMatrix positivity_matrix(const CMatrix& k) {
    const CMatrix j = symplectic_j(static_cast<int>(k.rows() / 2));
    const CMatrix pi = kI * (k.adjoint() * j * k - j);
    return 0.5 * (pi + pi.adjoint());
}

PositivityReport strict_positivity(const CanonicalTransform& k, const Tolerances& tol) {
    PositivityReport rep;
    rep.hermitian_matrix = positivity_matrix(k.mat());
    rep.margin = Eigen::SelfAdjointEigenSolver<CMatrix>(rep.hermitian_matrix, Eigen::EigenvaluesOnly).eigenvalues()(0);
    rep.is_strict = rep.margin > tol.pos;
    return rep;
}

PositivityClass classify(const PositivityReport& report, const Tolerances& tol) {
    if (report.margin > tol.pos) return PositivityClass::strict;
    if (report.margin >= -tol.pos) return PositivityClass::boundary;
    return PositivityClass::not_positive;
}

const char* to_string(PositivityClass c) {
    switch (c) {
        case PositivityClass::strict: return "strict";
        case PositivityClass::boundary: return "boundary";
        case PositivityClass::not_positive: return "not_positive";
    }
    return "unknown";
}

bool mehler_integrable(const CanonicalTransform& k, const Tolerances& tol) {
    const int n = k.n();
    const CMatrix id = CMatrix::Identity(2 * n, 2 * n);
    const CVector spec = Eigen::ComplexEigenSolver<CMatrix>(k.mat(), false).eigenvalues();
    for (Eigen::Index i = 0; i < spec.size(); ++i)
        if (std::abs(spec(i) + 1.0) <= tol.spec) return false;

    const CMatrix m = kI * symplectic_j(n) * (id + k.mat()).partialPivLu().solve(id - k.mat());
    return hermitian_eigenvalues(m).maxCoeff() < -tol.pos;
}

bool compactness_check(const QuadraticForm& q, const Tolerances& tol) {
    return strict_positivity(flow(q), tol).is_strict;
}

}  // namespace quadflow
