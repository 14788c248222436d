#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace quadflow {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr int kMaxDimension = 16;
inline constexpr cplx kI{0.0, 1.0};

/// Numerical thresholds shared by all modules.
///
/// Defaults follow the library's documented contract; the CLI can override
/// them through QUADFLOW_TOL (see parse_tolerances).
struct Tolerances {
    double sym = 1e-10;       // symmetry of Hessians, relative to the matrix norm
    double can = 1e-10;       // K^T J K = J, relative to max(1, |K|^2)
    double pos = 1e-9;        // strict positivity margin on eigenvalues of Pi(K)
    double spec = 1e-8;       // distance of -1 to Spec K
    double log = 1e-9;        // |exp(H) - K| after canonical_log, relative
    double deg = 1e-10;       // |det phi''_xy| relative to |phi''|^n
    double boundary = 1e-7;   // |log|lambda|| below this is a boundary case
    double pair = 1e-8;       // mu * (1/mu) pairing residue
    double residue = 1e-9;    // imaginary residue of real centers

    static const Tolerances& defaults();
};

/// Parses "key=value,key=value" (keys: sym, can, pos, spec, log, deg,
/// boundary, pair, residue) on top of the defaults. Throws ParseError.
Tolerances parse_tolerances(const std::string& text);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvariantError : public Error {
public:
    using Error::Error;
};

/// Strict positivity failed; carries the smallest eigenvalue of Pi(K).
class PositivityError : public Error {
public:
    PositivityError(const std::string& what, double margin) : Error(what), margin_(margin) {}
    double margin() const noexcept { return margin_; }

private:
    double margin_;
};

/// Eigenvalues of conj(K)^{-1} K too close to the unit circle.
class BoundaryError : public Error {
public:
    using Error::Error;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A composition left the strictly positive class.
class CompositionError : public Error {
public:
    CompositionError(const std::string& what, double margin) : Error(what), margin_(margin) {}
    double margin() const noexcept { return margin_; }

private:
    double margin_;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

void check_dimension(int n);

/// Spectral norm upper bound used for relative tolerances (Frobenius).
inline double scale_of(const CMatrix& m) { return std::max(1.0, m.norm()); }

}  // namespace quadflow
