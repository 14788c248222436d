#pragma once

#include "quadflow/positivity.hpp"

#include <vector>

namespace quadflow {

/// p(z) = q(z - v) with flow(q, 1) strictly positive.
class EvolutionSpec {
public:
    /// Throws PositivityError if flow(q, 1) is not strictly positive.
    EvolutionSpec(QuadraticForm q, PhaseVector v, const Tolerances& tol = Tolerances::defaults());
    explicit EvolutionSpec(QuadraticForm q, const Tolerances& tol = Tolerances::defaults());

    int n() const noexcept { return q_.n(); }
    const QuadraticForm& q() const noexcept { return q_; }
    const PhaseVector& v() const noexcept { return v_; }
    const CanonicalTransform& flow() const noexcept { return k_; }
    double margin() const noexcept { return margin_; }

private:
    QuadraticForm q_;
    PhaseVector v_;
    CanonicalTransform k_;
    double margin_;
};

struct DecompositionData {
    std::vector<double> mu;  // ascending, each in (0, 1)
    PhaseVector a1;
    PhaseVector a2;
    cplx phase;
    double norm = 0.0;
    RMatrix A;
    double a1_residue = 0.0;  // imaginary part of a1 before it is discarded
    double a2_residue = 0.0;
};

/// The n moduli below 1 of Spec(conj(K)^{-1} K), ascending. Throws
/// BoundaryError near the unit circle and InvariantError if the spectrum does
/// not pair into {mu, 1/mu}.
std::vector<double> singular_generators(const CanonicalTransform& k, const Tolerances& tol = Tolerances::defaults());

/// ||e^{-iQ}|| = prod mu_j^{1/4}.
double norm_quadratic(const QuadraticForm& q, const Tolerances& tol = Tolerances::defaults());
double norm_from_flow(const CanonicalTransform& k, const Tolerances& tol = Tolerances::defaults());

/// A = (Im K2)^{-1}(1 - Re K2) + (Im K)^{-1}(1 - Re K), K2 = conj(K)^{-1}.
RMatrix A_matrix(const CanonicalTransform& k, const Tolerances& tol = Tolerances::defaults());

DecompositionData decompose(const EvolutionSpec& spec, const Tolerances& tol = Tolerances::defaults());

/// exp(-1/2 sigma(Im v, A Im v)) ||e^{-iQ}||.
double norm_shifted(const EvolutionSpec& spec, const Tolerances& tol = Tolerances::defaults());

/// q_theta = 1/2 (e^{-i theta} xi^2 + e^{i theta} x^2) in one dimension.
QuadraticForm rotated_oscillator(double theta);

struct CenterSample {
    double t1 = 0.0;
    bool ok = false;  // false when the flow at (t1, t2) is not strictly positive
    double margin = 0.0;
    PhaseVector a1;
    PhaseVector a2;
};

/// Centers a1, a2 for q = (t1 + i t2) q_theta over the t1 samples.
std::vector<CenterSample> center_path(double theta, double t2, const PhaseVector& v, const std::vector<double>& t1_samples,
                                      const Tolerances& tol = Tolerances::defaults());

/// -1/2 log((1 + |sin theta|) / (1 - |sin theta|)).
double critical_time(double theta);

/// Symplectic eigenvalues of q1(z) = sigma(z, -i(1+K)^{-1}(1-K) z), for
/// strictly positive K with conj(K)^{-1} = K.
std::vector<double> real_log_williamson(const CanonicalTransform& k, const Tolerances& tol = Tolerances::defaults());

/// True iff every symplectic eigenvalue of q1 lies in (0, 2), the range
/// where arctanh(mu/2) is real.
bool real_log_exists(const CanonicalTransform& k, const Tolerances& tol = Tolerances::defaults());

}  // namespace quadflow
