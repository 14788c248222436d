#include "quadflow/models.hpp"

#include "test_random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace quadflow;
using namespace quadflow::testing;

namespace {

constexpr double kPi = std::numbers::pi;

double rho_a(double theta, cplx t) { return std::norm(std::cos(t)) + std::cos(2.0 * theta) * std::norm(std::sin(t)); }

template <class F>
void for_each_grid_point(F&& f) {
    for (double theta : {0.0, kPi / 8.0, -kPi / 8.0, kPi / 4.0, -kPi / 4.0, 3.0 * kPi / 8.0, -3.0 * kPi / 8.0}) {
        for (int i = 0; i < 20; ++i) {
            const double t1 = -kPi + 2.0 * kPi * i / 19.0;
            for (int j = 0; j < 20; ++j) {
                const double t2 = -2.0 + (2.0 - 0.05) * j / 19.0;
                f(theta, t1, t2);
            }
        }
    }
}

PhaseVector imaginary_shift(double x, double xi) { return PhaseVector(CVector((CVector(2) << kI * x, kI * xi).finished())); }

}  // namespace

TEST(RhoNorm, HeatSemigroup) {
    for (double s : {0.2, 1.0, 3.0}) {
        const RhoNorm r = rho_norm(RotatedHOParams{0.0, cplx(0.0, -s)});
        EXPECT_TRUE(r.compact);
        EXPECT_NEAR(r.a, std::cosh(2.0 * s), 1e-12 * r.a);
        EXPECT_NEAR(r.norm, std::exp(-s / 2.0), 1e-10);
    }
}

TEST(RhoNorm, RealTimeIsNotCompact) {
    for (double t1 : {0.0, 0.7, 2.0}) {
        const RhoNorm r = rho_norm(RotatedHOParams{0.3, cplx(t1, 0.0)});
        EXPECT_NEAR(r.a, 1.0 - (1.0 - std::cos(0.6)) * std::sin(t1) * std::sin(t1), 1e-14);
        EXPECT_FALSE(r.compact);
    }
    EXPECT_FALSE(rho_norm(RotatedHOParams{0.0, cplx(1.0, 0.0)}).compact);
}

TEST(RhoNorm, DaviesSmallTimeExpansion) {
    for (double s : {0.5, 0.2, 0.1}) {
        const double a = rho_norm(RotatedHOParams{kPi / 4.0, cplx(s / std::sqrt(2.0), -s / std::sqrt(2.0))}).a;
        EXPECT_LT(std::abs(a - 1.0 - std::pow(s, 4) / 6.0), 0.05 * std::pow(s, 8)) << s;
    }
}

TEST(RhoNorm, AgreesWithPipelineOnGrid) {
    int compared = 0;
    for_each_grid_point([&](double theta, double t1, double t2) {
        const RotatedHOParams p{theta, cplx(t1, t2)};
        const QuadraticForm q = p.q();
        const double margin = strict_positivity(flow(q)).margin;
        if (std::abs(margin) < 1e-6) return;
        const RhoNorm r = rho_norm(p);
        EXPECT_EQ(r.compact, compactness_check(q)) << theta << " " << t1 << " " << t2;
        if (!r.compact || margin <= 0.0) return;
        EXPECT_NEAR(r.norm, norm_quadratic(q), 1e-10) << theta << " " << t1 << " " << t2;
        ++compared;
    });
    EXPECT_GT(compared, 1000);
}

TEST(GrowthFactor, HarmonicOscillator) {
    for (double t1 : {0.0, 1.0, -2.0}) {
        for (double t2 : {-0.3, -1.5}) {
            const PhaseVector v = imaginary_shift(0.6, -0.8);
            const double g = rho_growth_factor(RotatedHOParams{0.0, cplx(t1, t2), v});
            EXPECT_NEAR(std::log(g), (std::cos(t1) - std::cosh(t2)) / std::sinh(t2) * 1.0, 1e-12);
        }
    }
}

TEST(GrowthFactor, RealShiftIsOne) {
    const PhaseVector v = PhaseVector::from_real((RVector(2) << 1.0, -2.0).finished());
    EXPECT_EQ(rho_growth_factor(RotatedHOParams{0.4, cplx(0.5, -1.0), v}), 1.0);
}

TEST(GrowthFactor, AgreesWithPipelineOnGrid) {
    std::mt19937_64 rng(141);
    std::normal_distribution<double> g(0.0, 0.7);
    int compared = 0;
    for_each_grid_point([&](double theta, double t1, double t2) {
        const double vx = g(rng), vxi = g(rng);
        const RotatedHOParams p{theta, cplx(t1, t2), PhaseVector(CVector((CVector(2) << cplx(g(rng), vx), cplx(g(rng), vxi)).finished()))};
        if (strict_positivity(flow(p.q())).margin < 1e-6) return;
        const double ratio = norm_shifted(EvolutionSpec(p.q(), p.v)) / norm_quadratic(p.q());
        const double gf = rho_growth_factor(p);
        EXPECT_NEAR(std::log(gf), std::log(ratio), 1e-10 * std::max(1.0, std::abs(std::log(ratio))))
            << theta << " " << t1 << " " << t2;
        ++compared;
    });
    EXPECT_GT(compared, 1000);
}

TEST(GrowthFactor, RejectsNonPositiveFlow) {
    EXPECT_THROW(rho_growth_factor(RotatedHOParams{0.0, cplx(1.0, 0.5), imaginary_shift(1.0, 0.0)}), PositivityError);
}

TEST(Davies, Identification) {
    // e^{i pi/4} Q_{pi/4} = 1/2 (D^2 + i x^2)
    const QuadraticForm q = rotated_oscillator(kPi / 4.0).scaled(std::polar(1.0, kPi / 4.0));
    EXPECT_NEAR(std::abs(q.hess()(0, 0) - kI), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(q.hess()(1, 1) - 1.0), 0.0, 1e-15);
    // e^{-sQ} = e^{-i t Q_{pi/4}} with t = -i s e^{i pi/4} = (s/sqrt 2)(1 - i)
    const double s = 0.3;
    const cplx t = -kI * s * std::polar(1.0, kPi / 4.0);
    EXPECT_NEAR(t.real(), s / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(t.imag(), -s / std::sqrt(2.0), 1e-15);
}

TEST(Davies, SmallTime) {
    const DaviesSmallTime d = davies_small_time(0.01);
    EXPECT_NEAR(d.expansion, 1.0 - 1e-4 / (4.0 * std::sqrt(3.0)), 1e-16);
    EXPECT_LT(std::abs(d.norm - d.expansion), 1e-7);
    EXPECT_LT(davies_small_time(0.5).norm, 1.0);
    EXPECT_NEAR(davies_small_time(1e-4).norm, 1.0, 1e-8);
}

TEST(Davies, ShiftedBlowup) {
    const ShiftedDavies d = shifted_davies_blowup(0.05, 0.1, 0.0);
    EXPECT_NEAR(d.expansion, 6.0 / 0.05 * 0.01 - 0.0025 / (4.0 * std::sqrt(3.0)), 1e-12);
    EXPECT_LT(std::abs(d.log_norm - d.expansion) / std::abs(d.expansion), 1e-2);

    const ShiftedDavies z = shifted_davies_blowup(0.2, 0.0, 0.0);
    EXPECT_NEAR(z.log_norm, std::log(davies_small_time(0.2).norm), 1e-12);

    // Blowup only through wx.
    const double only_x = shifted_davies_blowup(0.01, 0.1, 0.0).log_norm;
    const double only_xi = shifted_davies_blowup(0.01, 0.0, 0.1).log_norm;
    EXPECT_GT(only_x, 5.0);
    EXPECT_LT(only_xi, 1e-3);
}

TEST(CenterGeometry, MatchesCenterPath) {
    const PhaseVector v(CVector((CVector(2) << cplx(0.4, 0.7), cplx(-1.0, -0.3)).finished()));
    for (double t2 : {-0.5, -1.0, -2.0}) {
        const CenterGeometry geo = ho_center_geometry(t2, v);
        std::vector<double> t1s;
        for (int j = 0; j < 16; ++j) t1s.push_back(-kPi + 2.0 * kPi * j / 16.0);
        for (const CenterSample& s : center_path(0.0, t2, v, t1s)) {
            ASSERT_TRUE(s.ok);
            EXPECT_NEAR((s.a1.real() - geo.c1.real()).norm(), geo.radius, 1e-10);
            EXPECT_NEAR((s.a2.real() - geo.c2.real()).norm(), geo.radius, 1e-10);
        }
        EXPECT_NEAR(geo.radius, v.imag().norm() / std::abs(std::sinh(t2)), 1e-14);
    }
}

TEST(CenterGeometry, LongTimeLimit) {
    const PhaseVector v(CVector((CVector(2) << cplx(0.4, 0.7), cplx(-1.0, -0.3)).finished()));
    const CenterGeometry geo = ho_center_geometry(-5.0, v);
    RMatrix hq(2, 2);
    hq << 0.0, 1.0, -1.0, 0.0;
    const RVector lim1 = v.real() + hq * v.imag(), lim2 = v.real() - hq * v.imag();
    EXPECT_LT((geo.c1.real() - lim1).norm(), 2e-4 * v.imag().norm());
    EXPECT_LT((geo.c2.real() - lim2).norm(), 2e-4 * v.imag().norm());
}

TEST(CenterGeometry, Rejections) {
    EXPECT_THROW(ho_center_geometry(-1.0, PhaseVector::from_real((RVector(2) << 1.0, 2.0).finished())), Error);
    EXPECT_THROW(ho_center_geometry(0.5, imaginary_shift(1.0, 0.0)), Error);
    EXPECT_THROW(ho_center_geometry(0.0, imaginary_shift(1.0, 0.0)), Error);
}

TEST(CriticalTime, MinimumOfACrossesOne) {
    const double theta = kPi / 4.0;
    auto min_a = [&](double t2) {
        double m = 1e300;
        for (int j = 0; j < 720; ++j) m = std::min(m, rho_a(theta, cplx(2.0 * kPi * j / 720.0, t2)));
        return m - 1.0;
    };
    double lo = -3.0, hi = -0.01;  // min_a(lo) > 0 > min_a(hi)
    ASSERT_GT(min_a(lo), 0.0);
    ASSERT_LT(min_a(hi), 0.0);
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        (min_a(mid) > 0.0 ? lo : hi) = mid;
    }
    EXPECT_NEAR(0.5 * (lo + hi), critical_time(theta), 1e-4);
}
