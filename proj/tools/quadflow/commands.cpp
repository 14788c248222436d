#include "commands.hpp"

#include "io.hpp"

#include "quadflow/models.hpp"
#include "quadflow/positivity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace quadflow::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ProblemSpec load_problem(const std::string& path, const Tolerances& tol) { return parse_problem(read_json_file(path), tol); }

void write_model(JsonWriter& w, const ModelBlock& m) {
    w.key("model").begin_object();
    w.field("theta", m.theta);
    w.field("t1", m.t1);
    w.field("t2", m.t2);
    w.end_object();
}

/// Eigenvalues of Im phi'', ascending.
RVector im_hessian_eigenvalues(const GaussianKernel& k) {
    const RMatrix im = k.hessian().imag();
    return Eigen::SelfAdjointEigenSolver<RMatrix>(0.5 * (im + im.transpose())).eigenvalues();
}

/// Fixed evaluation points for kernel comparisons.
std::vector<CVector> probe_points(int n, int count) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<CVector> pts;
    for (int i = 0; i < count; ++i) {
        CVector p(n);
        for (int j = 0; j < n; ++j) p(j) = u(rng);
        pts.push_back(p);
    }
    return pts;
}

/// Largest relative gap between lhs and s * rhs, with the sign s fixed at the first point.
double signed_kernel_gap(const GaussianKernel& lhs, const GaussianKernel& rhs, int* sign_out) {
    const auto xs = probe_points(lhs.n(), 16), ys = probe_points(lhs.n(), 17);
    const cplx a0 = lhs(xs[0], ys[1]), b0 = rhs(xs[0], ys[1]);
    const int sign = std::abs(a0 - b0) <= std::abs(a0 + b0) ? 1 : -1;
    double worst = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const cplx a = lhs(xs[i], ys[i + 1]), b = static_cast<double>(sign) * rhs(xs[i], ys[i + 1]);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
    if (sign_out) *sign_out = sign;
    return worst;
}

int worker_count(int requested, int rows) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(t, 1, std::max(rows, 1));
}

/// Runs f(i) for i in [0, count) on `threads` workers; f writes to its own slot.
template <class F>
void parallel_rows(int count, int threads, F&& f) {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += threads) f(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

std::string run_norm(const NormOptions& o, const Tolerances& tol) {
    const ProblemSpec ps = load_problem(o.spec, tol);
    const std::optional<GridSpec> grid = !o.grid.empty() ? std::optional(parse_grid(o.grid, ps.q.n())) : ps.grid;
    const EvolutionSpec spec(ps.q, ps.v, tol);
    const DecompositionData d = decompose(spec, tol);

    JsonWriter w;
    w.begin_object();
    w.field("n", spec.n());
    if (ps.model) write_model(w, *ps.model);
    w.field("norm", d.norm);
    w.field("norm_quadratic", norm_quadratic(ps.q, tol));
    w.field("mu", d.mu);
    w.field("a1", d.a1.real());
    w.field("a2", d.a2.real());
    w.field("a1_residue", d.a1_residue);
    w.field("a2_residue", d.a2_residue);
    w.field("phase", d.phase);
    w.field("margin", spec.margin());
    if (o.verify) {
        const GaussianKernel k = evolution_to_kernel(spec, tol);
        const GridSpec g = grid ? *grid : auto_grid(k);
        const double oracle = operator_norm(discretize(k, g));
        w.field("oracle_norm", oracle);
        w.field("relative_gap", std::abs(oracle - d.norm) / d.norm);
        write_grid(w, g);
    }
    w.end_object();
    return w.str();
}

std::string run_compose(const ComposeOptions& o, const Tolerances& tol) {
    const ProblemSpec s1 = load_problem(o.spec1, tol), s2 = load_problem(o.spec2, tol);
    if (s1.q.n() != s2.q.n()) throw ParseError("specs have different dimensions");
    const EvolutionSpec p1(s1.q, s1.v, tol), p2(s2.q, s2.v, tol);
    Tolerances product_tol = tol;
    if (o.product_margin >= 0.0) product_tol.pos = o.product_margin;
    const CompositionResult r = compose_evolutions(p1, p2, product_tol);

    JsonWriter w;
    w.begin_object();
    write_form(w, r.p3.q(), r.p3.v());
    w.field("factor", r.factor);
    w.field("sign_ambiguous", r.sign_ambiguous);
    w.field("margin", r.p3.margin());
    if (o.verify) {
        const GaussianKernel lhs = kernel_compose(evolution_to_kernel(p1, tol), evolution_to_kernel(p2, tol));
        GaussianKernel rhs = evolution_to_kernel(r.p3, tol);
        rhs.amplitude *= r.factor;
        int sign = 1;
        const double gap = signed_kernel_gap(lhs, rhs, &sign);
        w.field("kernel_sign", sign);
        w.field("kernel_gap", gap);
    }
    w.end_object();
    return w.str();
}

std::string run_to_kernel(const std::string& path, bool formal, const Tolerances& tol) {
    const ProblemSpec ps = load_problem(path, tol);
    const GaussianKernel k =
        formal ? formal_evolution_to_kernel(ps.q, ps.v, tol) : evolution_to_kernel(EvolutionSpec(ps.q, ps.v, tol), tol);
    JsonWriter w;
    w.begin_object();
    write_kernel(w, k);
    w.field("formal", formal);
    w.end_object();
    return w.str();
}

std::string run_from_kernel(const std::string& path, const Tolerances& tol) {
    const GaussianKernel k = parse_kernel(read_json_file(path));
    KernelEvolution ke = [&] {
        try {
            return kernel_to_evolution(k, tol);
        } catch (const PositivityError& e) {
            std::ostringstream msg;
            msg << e.what() << "; eigenvalues of Im phi'':";
            const RVector ev = im_hessian_eigenvalues(k);
            for (Eigen::Index i = 0; i < ev.size(); ++i) msg << ' ' << format_double(ev(i));
            throw PositivityError(msg.str(), e.margin());
        }
    }();
    JsonWriter w;
    w.begin_object();
    write_form(w, ke.spec.q(), ke.spec.v());
    w.field("c", ke.c);
    w.field("margin", ke.spec.margin());
    w.end_object();
    return w.str();
}

std::string run_contour(const ContourOptions& o, const Tolerances& tol) {
    const std::vector<double> t1s = parse_range(o.t1), t2s = parse_range(o.t2);
    const PhaseVector v = parse_shift(o.v);
    const int rows = static_cast<int>(t2s.size());
    std::vector<std::vector<double>> values(rows, std::vector<double>(t1s.size(), kNaN));
    parallel_rows(rows, worker_count(o.threads, rows), [&](int i) {
        for (size_t j = 0; j < t1s.size(); ++j) {
            try {
                const QuadraticForm q = RotatedHOParams{o.theta, cplx(t1s[j], t2s[i])}.q();
                const EvolutionSpec spec(q, v, tol);
                const double log_g = std::log(norm_shifted(spec, tol) / norm_quadratic(q, tol));
                values[i][j] = std::log(log_g + 1.0);
            } catch (const Error&) {
                // non-compact or on the boundary: leave NaN
            }
        }
    });
    std::string out = "t1,t2,value\n";
    for (int i = 0; i < rows; ++i)
        for (size_t j = 0; j < t1s.size(); ++j)
            out += format_double(t1s[j]) + "," + format_double(t2s[i]) + "," + format_double(values[i][j]) + "\n";
    return out;
}

std::string run_centers(const CentersOptions& o, const Tolerances& tol) {
    const std::vector<double> t1s = parse_range(o.t1);
    const PhaseVector v = parse_shift(o.v);
    std::optional<CenterGeometry> geo;
    if (o.theta == 0.0) {
        try {
            geo = ho_center_geometry(o.t2, v);
        } catch (const Error&) {
        }
    }
    std::string out = "t1,ok,a1_x,a1_xi,a2_x,a2_xi,branch,a1_circle_residual,a2_circle_residual\n";
    for (const CenterSample& s : center_path(o.theta, o.t2, v, t1s, tol)) {
        double c[4] = {kNaN, kNaN, kNaN, kNaN};
        double r1 = kNaN, r2 = kNaN;
        if (s.ok) {
            const RVector a1 = s.a1.real(), a2 = s.a2.real();
            c[0] = a1(0), c[1] = a1(1), c[2] = a2(0), c[3] = a2(1);
            if (geo) {
                r1 = (a1 - geo->c1.real()).norm() - geo->radius;
                r2 = (a2 - geo->c2.real()).norm() - geo->radius;
            }
        }
        out += format_double(s.t1) + "," + (s.ok ? "1" : "0");
        for (double x : c) out += "," + format_double(x);
        out += std::string(",") + (s.t1 >= 0.0 ? "solid" : "dotted");
        out += "," + format_double(r1) + "," + format_double(r2) + "\n";
    }
    return out;
}

std::string run_check(const std::string& path, const Tolerances& tol) {
    const ProblemSpec ps = load_problem(path, tol);
    const CanonicalTransform k = flow(ps.q);
    const PositivityReport rep = strict_positivity(k, tol);

    JsonWriter w;
    w.begin_object();
    w.field("n", ps.q.n());
    if (ps.model) write_model(w, *ps.model);
    w.field("positivity", to_string(classify(rep, tol)));
    w.field("margin", rep.margin);
    w.field("mehler_integrable", mehler_integrable(k, tol));
    w.field("compact", compactness_check(ps.q, tol));
    // The real-log question only makes sense for conj(K)^{-1} = K.
    const CMatrix gap = k.conj_inverse().mat() - k.mat();
    if (rep.is_strict && gap.norm() <= tol.can * std::max(1.0, k.mat().squaredNorm())) {
        try {
            const std::vector<double> nu = real_log_williamson(k, tol);
            w.field("real_log_williamson", nu);
            w.field("real_log_exists", real_log_exists(k, tol));
        } catch (const Error& e) {
            w.field("real_log_error", e.what());
        }
    }
    if (ps.model) {
        const RhoNorm r = rho_norm(RotatedHOParams{ps.model->theta, cplx(ps.model->t1, ps.model->t2)});
        w.field("rho_a", r.a);
        w.field("critical_time", critical_time(ps.model->theta));
    }
    w.end_object();
    return w.str();
}

}  // namespace quadflow::cli
