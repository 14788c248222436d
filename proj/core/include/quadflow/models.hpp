#pragma once

#include "quadflow/evolution.hpp"

namespace quadflow {

/// e^{-i t Q_theta} with t = t1 + i t2, optionally shifted by v (n = 1).
struct RotatedHOParams {
    double theta = 0.0;
    cplx t{0.0, 0.0};
    PhaseVector v = PhaseVector::zero(1);

    QuadraticForm q() const { return rotated_oscillator(theta).scaled(t); }
};

struct RhoNorm {
    double a = 1.0;
    bool compact = false;
    double norm = 1.0;  // meaningful only when compact
};

/// a = |cos t|^2 + cos(2 theta)|sin t|^2; compact iff a > 1 and t2 < 0.
RhoNorm rho_norm(const RotatedHOParams& p);

/// ||e^{-itP}|| / ||e^{-itQ_theta}|| in closed form.
double rho_growth_factor(const RotatedHOParams& p, const Tolerances& tol = Tolerances::defaults());

struct DaviesSmallTime {
    double norm;
    double expansion;  // 1 - s^2 / (4 sqrt 3)
};

/// Q = D^2 + i x^2 taken as e^{i pi/4} Q_{pi/4}: t1 = -t2 = s / sqrt 2.
DaviesSmallTime davies_small_time(double s);

struct ShiftedDavies {
    double log_norm;   // exact, from norm_shifted
    double expansion;  // (6/s) wx^2 + (s/2) wxi^2 - s^2 / (4 sqrt 3)
};

/// P = (D - i wxi)^2 + i (x - i wx)^2, i.e. the Davies operator shifted by v = i(wx, wxi).
ShiftedDavies shifted_davies_blowup(double s, double wx, double wxi, const Tolerances& tol = Tolerances::defaults());

struct CenterGeometry {
    PhaseVector c1;
    PhaseVector c2;
    double radius;
};

/// Circle centres of a1, a2 for theta = 0: c1,2 = Re v -+ coth(t2) H Im v, radius |Im v|/|sinh t2|.
CenterGeometry ho_center_geometry(double t2, const PhaseVector& v);

}  // namespace quadflow
