#pragma once

#include "quadflow/symplectic.hpp"

namespace quadflow {

struct PositivityReport {
    double margin = 0.0;   // smallest eigenvalue of Pi(K)
    bool is_strict = false;
    CMatrix hermitian_matrix;  // Pi(K) = i(K* J K - J)
};

enum class PositivityClass { strict, boundary, not_positive };

/// Pi(K) = i(K* J K - J), Hermitized.
CMatrix positivity_matrix(const CMatrix& k);

PositivityReport strict_positivity(const CanonicalTransform& k, const Tolerances& tol = Tolerances::defaults());

/// strict if margin > tol.pos, boundary if |margin| <= tol.pos.
PositivityClass classify(const PositivityReport& report, const Tolerances& tol = Tolerances::defaults());
const char* to_string(PositivityClass c);

/// -1 outside Spec K and the Hermitian part of i J (1+K)^{-1}(1-K) negative definite.
bool mehler_integrable(const CanonicalTransform& k, const Tolerances& tol = Tolerances::defaults());

/// Whether e^{-iQ} is compact, i.e. flow(q, 1) is strictly positive.
bool compactness_check(const QuadraticForm& q, const Tolerances& tol = Tolerances::defaults());

}  // namespace quadflow
