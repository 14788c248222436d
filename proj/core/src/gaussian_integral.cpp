#include "quadflow/gaussian_integral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace quadflow {

cplx GaussianExponent::operator()(const CVector& u) const {
    return amp * std::exp(cplx((u.transpose() * M * u)(0, 0)) + cplx((b.transpose() * u)(0, 0)) + c);
}

cplx inverse_sqrt_det(const CMatrix& a) {
    const CVector e = Eigen::ComplexEigenSolver<CMatrix>(a, false).eigenvalues();
    cplx r = 1.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) r /= std::sqrt(e(i));
    return r;
}

GaussianExponent integrate_out(const GaussianExponent& e, const std::vector<int>& drop, Convergence mode, double tol) {
    const int d = e.dim();
    std::vector<bool> dropped(d, false);
    for (int i : drop) {
        if (i < 0 || i >= d || dropped[i]) throw DimensionError("integrate_out: bad variable index");
        dropped[i] = true;
    }
    std::vector<int> keep;
    for (int i = 0; i < d; ++i)
        if (!dropped[i]) keep.push_back(i);
    const int k = static_cast<int>(drop.size());
    const int p = static_cast<int>(keep.size());

    const CMatrix msym = 0.5 * (e.M + e.M.transpose());
    CMatrix mss(k, k), mps(p, k), mpp(p, p);
    CVector bs(k), bp(p);
    for (int i = 0; i < k; ++i) {
        bs(i) = e.b(drop[i]);
        for (int j = 0; j < k; ++j) mss(i, j) = msym(drop[i], drop[j]);
    }
    for (int i = 0; i < p; ++i) {
        bp(i) = e.b(keep[i]);
        for (int j = 0; j < k; ++j) mps(i, j) = msym(keep[i], drop[j]);
        for (int j = 0; j < p; ++j) mpp(i, j) = msym(keep[i], keep[j]);
    }

    const RMatrix re = -mss.real();
    const double lmin = Eigen::SelfAdjointEigenSolver<RMatrix>(0.5 * (re + re.transpose()), Eigen::EigenvaluesOnly)
                            .eigenvalues()(0);
    const double scale = std::max(1.0, mss.norm());
    if (mode == Convergence::absolute ? lmin <= tol * scale : lmin < -tol * scale)
        throw DivergenceError("Gaussian integral diverges (smallest eigenvalue of Re(-M) is " + std::to_string(lmin) + ")");

    Eigen::FullPivLU<CMatrix> lu(mss);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw DivergenceError("Gaussian integral: singular quadratic part");

    GaussianExponent out;
    const CMatrix x = lu.solve(mps.transpose());  // M_ss^{-1} M_sp
    const CVector y = lu.solve(bs);               // M_ss^{-1} b_s
    out.M = mpp - mps * x;
    out.M = 0.5 * (out.M + out.M.transpose());
    out.b = bp - mps * y;
    out.c = e.c - 0.25 * cplx((bs.transpose() * y)(0, 0));
    out.amp = e.amp * std::pow(std::numbers::pi, 0.5 * k) * inverse_sqrt_det(-mss);
    return out;
}

}  // namespace quadflow
