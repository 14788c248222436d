#include "quadflow/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace quadflow {

namespace {

struct Envelope {
    RVector center;
    double lambda_min;
};

Envelope envelope(const GaussianKernel& k) {
    const RMatrix h = k.hessian().imag();
    const RMatrix hs = 0.5 * (h + h.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<RMatrix>(hs, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin <= 0.0) return {RVector::Zero(hs.rows()), lmin};
    return {-hs.ldlt().solve(RVector(k.linear().imag())), lmin};
}

}  // namespace

int GridSpec::size() const noexcept {
    int s = 1;
    for (int i = 0; i < n; ++i) s *= N;
    return s;
}

CVector GridSpec::coords(int idx) const {
    CVector x(n);
    for (int a = n - 1; a >= 0; --a) {
        x(a) = point(idx % N);
        idx /= N;
    }
    return x;
}

CMatrix discretize(const std::function<cplx(const CVector&, const CVector&)>& kernel, const GridSpec& g) {
    if (g.n < 1 || g.n > 2) throw DimensionError("oracle grids support n = 1 or 2");
    if (g.N < 2 || !(g.L > 0.0)) throw Error("grid needs L > 0 and N >= 2");
    const int s = g.size();
    const double w = std::pow(g.h(), g.n);
    std::vector<CVector> pts(s);
    for (int i = 0; i < s; ++i) pts[i] = g.coords(i);
    CMatrix m(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) m(i, j) = kernel(pts[i], pts[j]) * w;
    return m;
}

CMatrix discretize(const GaussianKernel& k, const GridSpec& g, double eps_boundary) {
    if (k.n() != g.n) throw DimensionError("grid and kernel differ in dimension");
    const Envelope env = envelope(k);
    if (env.lambda_min <= 0.0) throw DivergenceError("kernel is not nondegenerate; no Gaussian envelope");
    double d = g.L;
    for (Eigen::Index i = 0; i < env.center.size(); ++i) d = std::min(d, g.L - std::abs(env.center(i)));
    if (d <= 0.0 || std::exp(-0.5 * env.lambda_min * d * d) > eps_boundary)
        throw DivergenceError("kernel envelope is not negligible at the grid boundary");
    return discretize([&k](const CVector& x, const CVector& y) { return k(x, y); }, g);
}

double operator_norm(const CMatrix& m, double rel_tol, int max_iter) {
    if (m.size() == 0) return 0.0;
    CVector v = CVector::Ones(m.cols()).normalized();
    // Deterministic perturbation so v is not orthogonal to the top singular vector.
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 1e-3 * std::sin(1.0 + 0.7 * static_cast<double>(i));
    v.normalize();
    double prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        CVector u = m.adjoint() * (m * v);
        const double lambda = u.norm();
        if (lambda == 0.0) return 0.0;
        v = u / lambda;
        if (std::abs(lambda - prev) <= rel_tol * lambda) return std::sqrt(lambda);
        prev = lambda;
    }
    throw DivergenceError("operator_norm: power iteration did not converge");
}

cplx grid_trace(const CMatrix& m) { return m.trace(); }

GridSpec auto_grid(const GaussianKernel& k, double eps_tail) {
    if (k.n() < 1 || k.n() > 2) throw DimensionError("oracle grids support n = 1 or 2");
    const Envelope env = envelope(k);
    if (env.lambda_min < 1e-4) throw DegenerateError("kernel envelope too weakly damped for a grid oracle");

    GridSpec g;
    g.n = k.n();
    g.L = std::max(6.0, env.center.cwiseAbs().maxCoeff() + std::sqrt(2.0 * std::log(1.0 / eps_tail) / env.lambda_min));
    const RMatrix re = k.hessian().real();
    const double freq = re.operatorNorm() * g.L + k.linear().real().norm();
    double h = 0.02 * g.L;
    if (freq > 0.0) h = std::min(h, std::numbers::pi / (4.0 * freq));
    g.N = std::max(64, static_cast<int>(std::ceil(2.0 * g.L / h)) + 1);
    if (g.n == 2) g.N = std::min(g.N, kMaxGridPointsTwoD);
    return g;
}

}  // namespace quadflow
