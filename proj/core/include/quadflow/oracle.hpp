#pragma once

#include "quadflow/gaussian_kernels.hpp"

#include <functional>

namespace quadflow {

/// Tensor grid x_j = -L + j h, h = 2L/(N-1), on each of n axes.
struct GridSpec {
    int n = 1;
    double L = 8.0;
    int N = 256;

    double h() const noexcept { return 2.0 * L / (N - 1); }
    double point(int j) const noexcept { return -L + j * h(); }
    /// N^n, the side of the discretized matrix.
    int size() const noexcept;
    /// Coordinates of flat index `idx` (axis 0 is the slowest).
    CVector coords(int idx) const;
};

/// Largest N per axis used by auto_grid when n = 2 (N^4 complex entries).
inline constexpr int kMaxGridPointsTwoD = 48;

/// M_jk = kernel(x_j, y_k) h^n. Throws DivergenceError if the Gaussian
/// envelope is above `eps_boundary` (relative to its peak) on the box edge.
CMatrix discretize(const GaussianKernel& k, const GridSpec& g, double eps_boundary = 1e-5);

/// Same, for an arbitrary kernel function; no envelope check.
CMatrix discretize(const std::function<cplx(const CVector&, const CVector&)>& kernel, const GridSpec& g);

/// Largest singular value by power iteration on M* M.
double operator_norm(const CMatrix& m, double rel_tol = 1e-10, int max_iter = 10000);

/// Sum of the diagonal (the h^n weight is already in M).
cplx grid_trace(const CMatrix& m);

/// Grid that resolves both the envelope (down to eps_tail) and the phase
/// oscillation of k.
GridSpec auto_grid(const GaussianKernel& k, double eps_tail = 1e-12);

}  // namespace quadflow
