// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "quadflow/models.hpp"
#include "quadflow/oracle.hpp"
#include "quadflow/positivity.hpp"

#include "test_random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace quadflow;
using namespace quadflow::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

CVector vec1(double a) { return CVector::Constant(1, a); }

CVector random_point(int n, std::mt19937_64& rng, double sd = 0.8) { return random_real_phase_vector(n, rng, sd).data().head(n); }

GaussianKernel random_kernel(int n, std::mt19937_64& rng) {
    GaussianKernel k;
    k.pxx = random_symmetric(n, rng, 0.7);
    k.pyy = random_symmetric(n, rng, 0.7);
    k.pxy = random_complex_matrix(n, n, rng, 0.8);
    k.lx = CVector::Zero(n);
    k.ly = CVector::Zero(n);
    return k;
}

GaussianSymbol scaled(GaussianSymbol a, cplx f) {
    a.c *= f;
    return a;
}

double symbol_gap(const GaussianSymbol& a, const GaussianSymbol& b, std::mt19937_64& rng, int samples = 8) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const PhaseVector z = random_real_phase_vector(a.n(), rng, 0.7);
        const cplx va = a(z), vb = b(z);
        worst = std::max(worst, std::abs(va - vb) / std::abs(va));
    }
    return worst;
}

double kernel_gap(const GaussianKernel& k1, const GaussianKernel& k2, std::mt19937_64& rng, cplx f = 1.0, int samples = 10) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const CVector x = random_point(k1.n(), rng), y = random_point(k1.n(), rng);
        const cplx a = k1(x, y), b = f * k2(x, y);
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    return worst;
}

/// a = |cos t|^2 + cos(2 theta) |sin t|^2
double rho_a(double theta, cplx t) { return std::norm(std::cos(t)) + std::cos(2.0 * theta) * std::norm(std::sin(t)); }

template <class F>
void compact_grid(F&& f) {
    for (double theta : {0.0, kPi / 8.0, -kPi / 8.0, kPi / 4.0, -kPi / 4.0, 3.0 * kPi / 8.0, -3.0 * kPi / 8.0})
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) f(theta, -kPi + 2.0 * kPi * i / 19.0, -2.0 + (2.0 - 0.05) * j / 19.0);
}

// 1. Rotated oscillator norm identity.
Outcome rotated_norm_identity() {
    double worst = 0.0;
    int compared = 0;
    compact_grid([&](double theta, double t1, double t2) {
        const QuadraticForm q = rotated_oscillator(theta).scaled(cplx(t1, t2));
        const double margin = strict_positivity(flow(q)).margin;
        if (margin < 1e-6) return;
        const double a = rho_a(theta, cplx(t1, t2));
        const double expect = std::pow(a - std::sqrt(a * a - 1.0), 0.25);
        worst = std::max(worst, std::abs(norm_quadratic(q) - expect) / expect);
        ++compared;
    });
    return {worst < 1e-10 && compared > 1000, fmt("max rel err %.2e over %d compact grid points", worst, compared)};
}

// 2. Shifted harmonic oscillator closed form plus grid oracle.
Outcome shifted_ho_closed_form() {
    double worst = 0.0, worst_oracle = 0.0;
    int cases = 0;
    for (double t1 : {0.0, kPi / 4.0, kPi / 2.0})
        for (double t2 : {-0.5, -1.0, -2.0})
            for (double b : {0.5, 1.0}) {
                const EvolutionSpec spec(rotated_oscillator(0.0).scaled(cplx(t1, t2)),
                                         PhaseVector(CVector((CVector(2) << kI * b, 0.0).finished())));
                // P_b = q0(z - v) - 1/2: the constant contributes |e^{it/2}| = e^{-t2/2}
                const double got = norm_shifted(spec) * std::exp(-t2 / 2.0);
                const double expect = std::exp((std::cos(t1) - std::cosh(t2)) / std::sinh(t2) * b * b);
                worst = std::max(worst, std::abs(got - expect) / expect);
                const GaussianKernel k = evolution_to_kernel(spec);
                const double oracle = operator_norm(discretize(k, auto_grid(k))) * std::exp(-t2 / 2.0);
                worst_oracle = std::max(worst_oracle, std::abs(oracle - expect) / expect);
                ++cases;
            }
    return {worst < 1e-10 && worst_oracle < 5e-3 && cases == 18,
            fmt("%d cases, closed form max rel err %.2e, grid oracle max rel gap %.2e", cases, worst, worst_oracle)};
}

// 3. Decomposition identities.
Outcome decomposition_identities() {
    std::mt19937_64 rng(9003);
    double worst_a = 0.0, worst_res = 0.0, worst_kernel = 0.0;
    int done = 0;
    while (done < 100) {
        const int n = 1 + done % 3;
        const EvolutionSpec spec(random_positive_form(n, rng), random_phase_vector(n, rng, 0.6));
        if (spec.margin() <= 1e-6) continue;
        const DecompositionData d = decompose(spec);
        const RVector lhs = d.a2.real() - d.a1.real();
        const RVector rhs = A_matrix(spec.flow()) * spec.v().imag();
        worst_a = std::max(worst_a, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
        worst_res = std::max({worst_res, d.a1_residue, d.a2_residue});
        // independent anchor for the centers: kernel(e^{-iP}) = phase * S_{a2} kernel(e^{-iQ}) S_{a1}^{-1}
        if (n <= 2) {
            const GaussianKernel rhs_k = real_shift_conjugate(d.a2, evolution_to_kernel(EvolutionSpec(spec.q())), d.a1);
            worst_kernel = std::max(worst_kernel, kernel_gap(evolution_to_kernel(spec), rhs_k, rng, d.phase));
        }
        ++done;
    }
    return {worst_a < 1e-10 && worst_res < 1e-9 && worst_kernel < 1e-9,
            fmt("100 instances, |a2 - a1 - A Im v| %.2e, residues %.2e, kernel anchor %.2e", worst_a, worst_res, worst_kernel)};
}

// 4. Kernel round trip.
Outcome kernel_round_trip() {
    std::mt19937_64 rng(9004);
    double worst_block = 0.0, worst_point = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + i % 2;
        const GaussianKernel k = random_nondegenerate(n, rng);
        const KernelEvolution ke = kernel_to_evolution(k);
        GaussianKernel back = evolution_to_kernel(ke.spec);
        back.amplitude *= ke.c;
        worst_block = std::max({worst_block, max_abs(back.pxx - k.pxx), max_abs(back.pxy - k.pxy), max_abs(back.pyy - k.pyy),
                                max_abs(back.lx - k.lx), max_abs(back.ly - k.ly)});
        for (int j = 0; j < 20; ++j) {
            const CVector x = random_point(n, rng), y = random_point(n, rng);
            worst_point = std::max(worst_point, std::abs(back(x, y) - k(x, y)) / std::abs(k.amplitude));
        }
    }
    return {worst_block < 1e-9 && worst_point < 1e-9,
            fmt("50 kernels, phi'' and linear blocks %.2e, pointwise / |amplitude| %.2e", worst_block, worst_point)};
}

// 5. Composition law.
Outcome composition_law() {
    std::mt19937_64 rng(9005);
    struct GridCase {
        GaussianKernel k1, k2, k3;
        cplx scale;
        GridSpec grid;
    };
    std::vector<GridCase> grid_cases;
    double worst = 0.0, worst_grid = 0.0;
    int pairs = 0;
    while (pairs < 30) {
        const int n = 1 + pairs % 2;
        const EvolutionSpec p1(random_positive_form(n, rng), random_phase_vector(n, rng, 0.5));
        const EvolutionSpec p2(random_positive_form(n, rng), random_phase_vector(n, rng, 0.5));
        if (p1.margin() <= 1e-6 || p2.margin() <= 1e-6 || strict_positivity(p1.flow() * p2.flow()).margin <= 1e-6) continue;
        const CompositionResult r = compose_evolutions(p1, p2);
        const GaussianKernel k1 = evolution_to_kernel(p1), k2 = evolution_to_kernel(p2), k3 = evolution_to_kernel(r.p3);
        const GaussianKernel lhs = kernel_compose(k1, k2);
        GaussianKernel rhs = k3;
        rhs.amplitude *= r.factor;
        // sign from one point, then every point with that sign
        const CVector x0 = random_point(n, rng), y0 = random_point(n, rng);
        const double sign = std::abs(lhs(x0, y0) - rhs(x0, y0)) <= std::abs(lhs(x0, y0) + rhs(x0, y0)) ? 1.0 : -1.0;
        worst = std::max(worst, kernel_gap(lhs, rhs, rng, sign));
        ++pairs;

        if (n == 1) {
            GridSpec g = auto_grid(k1);
            for (const GaussianKernel* k : {&k2, &k3}) {
                const GridSpec gk = auto_grid(*k);
                g.L = std::max(g.L, gk.L);
                g.N = std::max(g.N, gk.N);
            }
            grid_cases.push_back({k1, k2, k3, sign * r.factor, g});
        }
    }
    // matrix products on the 5 pairs with the cheapest common grid
    std::sort(grid_cases.begin(), grid_cases.end(), [](const GridCase& a, const GridCase& b) { return a.grid.N < b.grid.N; });
    grid_cases.resize(std::min<size_t>(grid_cases.size(), 5));
    int largest = 0;
    for (const GridCase& c : grid_cases) {
        const CMatrix prod = discretize(c.k1, c.grid) * discretize(c.k2, c.grid);
        const CMatrix direct = c.scale * discretize(c.k3, c.grid);
        worst_grid = std::max(worst_grid, (prod - direct).norm() / direct.norm());
        largest = std::max(largest, c.grid.N);
    }
    return {worst < 1e-9 && worst_grid < 1e-2 && grid_cases.size() == 5,
            fmt("30 pairs, pointwise %.2e; %zu grid products (N <= %d), Frobenius %.2e", worst, grid_cases.size(), largest,
                worst_grid)};
}

// 6. Positivity equivalences.
Outcome positivity_equivalences() {
    std::mt19937_64 rng(9006);
    int samples = 0, disagreements = 0, strict = 0;
    for (int i = 0; i < 500; ++i) {
        const int n = 1 + i % 3;
        CanonicalTransform k = CanonicalTransform::identity(n);
        if (i % 2 == 0) {
            k = kernel_to_affine(random_nondegenerate(n, rng)).linear;
        } else {
            CMatrix im = random_real_symmetric(2 * n, rng, 0.6);
            if (i % 4 == 1) im = random_spd(2 * n, rng);
            k = flow(QuadraticForm(CMatrix(random_real_symmetric(2 * n, rng, 0.5) + kI * im)));
        }
        const PositivityReport r = strict_positivity(k);
        if (std::abs(r.margin) < 1e-6) continue;
        ++samples;
        strict += r.is_strict;
        disagreements += r.is_strict != mehler_integrable(k);
    }
    for (int i = 0; i < 500; ++i) {
        const int n = 1 + i % 2;
        const GaussianKernel g = random_kernel(n, rng);
        if (!g.pxy_invertible()) continue;
        const CanonicalTransform k = kernel_to_affine(g).linear;
        const PositivityReport r = strict_positivity(k);
        if (std::abs(r.margin) < 1e-6) continue;
        ++samples;
        strict += r.is_strict;
        disagreements += (r.is_strict != g.nondegenerate()) + (r.is_strict != mehler_integrable(k));
    }
    return {samples >= 400 && disagreements == 0 && strict > 50 && samples - strict > 50,
            fmt("%d samples (%d strict), %d disagreements", samples, strict, disagreements)};
}

// 7. Crossing relation.
Outcome crossing_relation() {
    std::mt19937_64 rng(9007);
    double worst_symbol = 0.0, worst_kernel = 0.0;
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + i % 2;
        const QuadraticForm q = random_positive_form(n, rng);
        const PhaseVector v = random_phase_vector(n, rng, 0.6);
        const Crossing c = crossing(q, v);
        const GaussianSymbol m = mehler_symbol(q);
        const GaussianSymbol conj = two_sided_shift(v, m);
        worst_symbol = std::max(worst_symbol, symbol_gap(conj, scaled(shift_right(ShiftOp{c.u}, m), c.factor_u), rng));
        worst_symbol = std::max(worst_symbol, symbol_gap(conj, scaled(shift_left(ShiftOp{c.w}, m), c.factor_w), rng));
    }
    for (int i = 0; i < 10; ++i) {
        const int n = 1 + i % 2;
        const QuadraticForm q = random_positive_form(n, rng);
        const PhaseVector v = random_real_phase_vector(n, rng);
        const Crossing c = crossing(q, v);
        const GaussianKernel k = evolution_to_kernel(EvolutionSpec(q));
        const GaussianKernel lhs = real_shift_conjugate(v, k, v);
        GaussianKernel via_u = shift_kernel_right(k, -c.u);
        via_u.amplitude *= c.factor_u;
        GaussianKernel via_w = shift_kernel_left(c.w, k);
        via_w.amplitude *= c.factor_w;
        worst_kernel = std::max({worst_kernel, kernel_gap(lhs, via_u, rng), kernel_gap(lhs, via_w, rng)});
    }
    return {worst_symbol < 1e-12 && worst_kernel < 1e-9,
            fmt("symbol level %.2e on 50 instances, kernel level (real v) %.2e on 10", worst_symbol, worst_kernel)};
}

// 8. Davies asymptotics.
Outcome davies_asymptotics() {
    const double c = 1.0 / (4.0 * std::sqrt(3.0));
    const double s = 0.01;
    const cplx t = cplx(s, -s) / std::sqrt(2.0);
    const double norm = norm_quadratic(rotated_oscillator(kPi / 4.0).scaled(t));
    const double rel = std::abs((1.0 - norm) / (s * s) - c) / c;

    const double s2 = 0.05, wx = 0.1, wxi = 0.0;
    const double expansion = 6.0 / s2 * wx * wx + s2 / 2.0 * wxi * wxi - c * s2 * s2;
    const double exact = shifted_davies_blowup(s2, wx, wxi).log_norm;
    const double rel2 = std::abs(exact - expansion) / std::abs(expansion);
    return {rel < 1e-2 && rel2 < 1e-2, fmt("small-time coefficient rel gap %.2e; shifted log-norm rel gap %.2e", rel, rel2)};
}

// 9. Critical time.
Outcome critical_time_law() {
    const double theta = kPi / 4.0;
    auto min_a = [&](double t2) {
        double m = 1e300;
        for (int j = 0; j < 720; ++j) m = std::min(m, rho_a(theta, cplx(2.0 * kPi * j / 720.0, t2)));
        return m - 1.0;
    };
    double lo = -3.0, hi = -0.01;
    if (!(min_a(lo) > 0.0 && min_a(hi) < 0.0)) return {false, "bracket failed"};
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        (min_a(mid) > 0.0 ? lo : hi) = mid;
    }
    const double crossing = 0.5 * (lo + hi), closed = critical_time(theta);
    // the pipeline's compactness flag flips at the same place
    auto all_compact = [&](double t2) {
        for (int j = 0; j < 720; ++j)
            if (!compactness_check(rotated_oscillator(theta).scaled(cplx(2.0 * kPi * j / 720.0, t2)))) return false;
        return true;
    };
    const bool flips = all_compact(closed - 1e-3) && !all_compact(closed + 1e-3);
    return {std::abs(crossing - closed) < 1e-4 && flips,
            fmt("grid crossing %.8f, closed form %.8f, |diff| %.2e, compactness flips: %s", crossing, closed,
                std::abs(crossing - closed), flips ? "yes" : "no")};
}

// 10. Heat kernel trace.
Outcome heat_trace() {
    double worst = 0.0, worst_grid = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
        const GaussianKernel k = evolution_to_kernel(EvolutionSpec(QuadraticForm::harmonic_oscillator(1).scaled(cplx(0.0, -s))));
        // int amplitude e^{i(a x^2 / 2 + b x + c0)} dx
        const cplx a = k.pxx(0, 0) + 2.0 * k.pxy(0, 0) + k.pyy(0, 0), b = k.lx(0) + k.ly(0);
        const cplx analytic = k.amplitude * std::exp(kI * k.c0) * std::sqrt(2.0 * kPi / (-kI * a)) * std::exp(-kI * b * b / (2.0 * a));
        const double expect = 1.0 / (2.0 * std::sinh(s / 2.0));
        worst = std::max(worst, std::abs(analytic - expect) / expect);
        const cplx grid = grid_trace(discretize(k, auto_grid(k)));
        worst_grid = std::max(worst_grid, std::abs(grid - expect) / expect);
    }
    return {worst < 1e-10 && worst_grid < 2e-3, fmt("analytic rel err %.2e, grid rel err %.2e", worst, worst_grid)};
}

// 11. Egorov property on the oracle grid.
Outcome egorov() {
    std::mt19937_64 rng(9011);
    double worst = 0.0;
    long points = 0;
    for (int i = 0; i < 10; ++i) {
        const EvolutionSpec spec(random_positive_form(1, rng));
        const GaussianKernel k = evolution_to_kernel(spec);
        PolynomialSymbol a;
        a.S = random_symmetric(2, rng);
        a.b = random_complex_matrix(2, 1, rng);
        a.c = cplx(std::normal_distribution<double>(0.0, 1.0)(rng), 0.3);
        const PolynomialSymbol b = pullback_inverse(a, spec.flow());
        GridSpec g = auto_grid(k);
        g.N = std::min(g.N, 160);
        for (int r = 0; r < g.N; ++r) {
            for (int c = 0; c < g.N; ++c) {
                const CVector x = vec1(g.point(r)), y = vec1(g.point(c));
                const cplx lhs = polynomial_right_action(k, a, x, y);  // e^{-iQ} a^w
                const cplx rhs = polynomial_left_action(b, k, x, y);   // (a o K^{-1})^w e^{-iQ}
                const double scale = std::max(std::abs(lhs), std::abs(k(x, y)));
                if (scale == 0.0) continue;
                worst = std::max(worst, std::abs(lhs - rhs) / scale);
                ++points;
            }
        }
    }
    return {worst < 1e-9, fmt("10 symbols, %ld grid nodes, max rel gap %.2e", points, worst)};
}

// Figure properties: circle fit for the centers, broken t1-periodicity for the contours.
Outcome figure_circles() {
    const PhaseVector v(CVector((CVector(2) << cplx(0.0, 1.0), 0.0).finished()));
    double worst = 0.0;
    for (double t2 : {-0.5, -1.0, -2.0}) {
        std::vector<double> t1s;
        for (int j = 0; j < 91; ++j) t1s.push_back(-kPi / 2.0 + 1.5 * kPi * j / 90.0);
        for (int which = 0; which < 2; ++which) {
            std::vector<RVector> pts;
            for (const CenterSample& s : center_path(0.0, t2, v, t1s))
                if (s.ok) pts.push_back((which == 0 ? s.a1 : s.a2).real());
            // algebraic fit x^2 + y^2 + D x + E y + F = 0
            RMatrix m(pts.size(), 3);
            RVector rhs(pts.size());
            for (size_t i = 0; i < pts.size(); ++i) {
                m.row(i) << pts[i](0), pts[i](1), 1.0;
                rhs(i) = -pts[i].squaredNorm();
            }
            const RVector sol = m.colPivHouseholderQr().solve(rhs);
            const RVector center = -0.5 * sol.head(2);
            const double radius = std::sqrt(center.squaredNorm() - sol(2));
            for (const RVector& p : pts) worst = std::max(worst, std::abs((p - center).norm() - radius));
        }
    }
    return {worst < 1e-10, fmt("theta = 0, t2 in {-0.5, -1, -2}: max circle-fit residual %.2e", worst)};
}

Outcome figure_periodicity() {
    const PhaseVector v(CVector((CVector(2) << cplx(0.0, 1.0), 0.0).finished()));
    double min_over_theta = 1e300;
    for (double theta : {0.0, kPi / 4.0}) {
        double max_diff = 0.0;
        for (double t2 : {-0.3, -0.8, -1.5}) {
            for (int j = 0; j < 32; ++j) {
                const double t1 = -kPi + kPi * j / 32.0;
                auto value = [&](double tt) {
                    const QuadraticForm q = rotated_oscillator(theta).scaled(cplx(tt, t2));
                    const EvolutionSpec spec(q, v);
                    return std::log(std::log(norm_shifted(spec) / norm_quadratic(q)) + 1.0);
                };
                try {
                    max_diff = std::max(max_diff, std::abs(value(t1) - value(t1 + kPi)));
                } catch (const Error&) {
                }
            }
        }
        min_over_theta = std::min(min_over_theta, max_diff);
    }
    return {min_over_theta > 1e-3, fmt("max |value(t1) - value(t1 + pi)| >= %.3f on both panels", min_over_theta)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        std::function<Outcome()> run;
        double limit_s;  // <= 0: no runtime limit
    };
    const std::vector<Criterion> criteria = {
        {"criterion 1: rotated oscillator norm identity", rotated_norm_identity, 5.0},
        {"criterion 2: shifted oscillator closed form", shifted_ho_closed_form, 60.0},
        {"criterion 3: decomposition identities", decomposition_identities, 0.0},
        {"criterion 4: kernel round trip", kernel_round_trip, 0.0},
        {"criterion 5: composition law", composition_law, 0.0},
        {"criterion 6: positivity equivalences", positivity_equivalences, 0.0},
        {"criterion 7: crossing relation", crossing_relation, 0.0},
        {"criterion 8: Davies asymptotics", davies_asymptotics, 0.0},
        {"criterion 9: critical time", critical_time_law, 0.0},
        {"criterion 10: heat kernel trace", heat_trace, 0.0},
        {"criterion 11: Egorov property", egorov, 0.0},
        {"figure: center circles", figure_circles, 0.0},
        {"figure: broken t1 periodicity", figure_periodicity, 0.0},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_s > 0.0 && secs >= c.limit_s) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s limit", c.limit_s);
        }
        std::printf("%s %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.label, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
