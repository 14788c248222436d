#include "commands.hpp"
#include "io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>

namespace {

enum Exit { kOk = 0, kOther = 1, kPositivity = 2, kComposition = 3, kParse = 4 };

int emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return kOk;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return kOther;
    }
    out << text;
    return kOk;
}

std::string with_margin(const std::string& what, double margin) {
    return what + " [margin " + quadflow::cli::format_double(margin) + "]";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace quadflow;
    using namespace quadflow::cli;

    CLI::App app{"quadflow: quadratic evolutions, norms and Gaussian kernels"};
    app.require_subcommand(1);
    std::string out_path;
    std::function<std::string(const Tolerances&)> action;

    NormOptions norm;
    auto* c_norm = app.add_subcommand("norm", "exact norm, centers and phase of e^{-iP}");
    c_norm->add_option("spec", norm.spec, "problem spec (JSON)")->required();
    c_norm->add_flag("--verify", norm.verify, "compare with the grid oracle");
    c_norm->add_option("--grid", norm.grid, "oracle grid L,N");
    c_norm->add_option("-o,--output", out_path);
    c_norm->callback([&] { action = [&](const Tolerances& t) { return run_norm(norm, t); }; });

    ComposeOptions comp;
    auto* c_comp = app.add_subcommand("compose", "e^{-iP1} e^{-iP2} = +-c e^{-iP3}");
    c_comp->add_option("spec1", comp.spec1)->required();
    c_comp->add_option("spec2", comp.spec2)->required();
    c_comp->add_flag("--verify", comp.verify, "check the law on kernels");
    c_comp->add_option("--product-margin", comp.product_margin, "positivity threshold for K1 K2 only");
    c_comp->add_option("-o,--output", out_path);
    c_comp->callback([&] { action = [&](const Tolerances& t) { return run_compose(comp, t); }; });

    std::string kernel_in;
    bool formal = false;
    auto* c_kernel = app.add_subcommand("kernel", "convert between specs and Gaussian kernels");
    c_kernel->require_subcommand(1);
    auto* c_to = c_kernel->add_subcommand("to-kernel", "spec -> kernel");
    c_to->add_option("spec", kernel_in)->required();
    c_to->add_flag("--formal", formal, "skip the positivity certificate");
    c_to->add_option("-o,--output", out_path);
    c_to->callback([&] { action = [&](const Tolerances& t) { return run_to_kernel(kernel_in, formal, t); }; });
    auto* c_from = c_kernel->add_subcommand("from-kernel", "kernel -> spec");
    c_from->add_option("kernel", kernel_in)->required();
    c_from->add_option("-o,--output", out_path);
    c_from->callback([&] { action = [&](const Tolerances& t) { return run_from_kernel(kernel_in, t); }; });

    ContourOptions cont;
    auto* c_cont = app.add_subcommand("contour", "CSV of log(log G + 1) over (t1, t2)");
    c_cont->add_option("--theta", cont.theta);
    c_cont->add_option("--t1", cont.t1, "a:b:count")->capture_default_str();
    c_cont->add_option("--t2", cont.t2, "a:b:count")->capture_default_str();
    c_cont->add_option("--v", cont.v, "re_x,im_x,re_xi,im_xi")->capture_default_str();
    c_cont->add_option("--threads", cont.threads);
    c_cont->add_option("-o,--output", out_path);
    c_cont->callback([&] { action = [&](const Tolerances& t) { return run_contour(cont, t); }; });

    CentersOptions cent;
    auto* c_cent = app.add_subcommand("centers", "CSV paths of the centers a1, a2");
    c_cent->add_option("--theta", cent.theta);
    c_cent->add_option("--t2", cent.t2)->capture_default_str();
    c_cent->add_option("--v", cent.v, "re_x,im_x,re_xi,im_xi")->capture_default_str();
    c_cent->add_option("--t1", cent.t1, "a:b:count")->capture_default_str();
    c_cent->add_option("-o,--output", out_path);
    c_cent->callback([&] { action = [&](const Tolerances& t) { return run_centers(cent, t); }; });

    std::string check_in;
    auto* c_check = app.add_subcommand("check", "positivity class and related flags");
    c_check->add_option("spec", check_in)->required();
    c_check->add_option("-o,--output", out_path);
    c_check->callback([&] { action = [&](const Tolerances& t) { return run_check(check_in, t); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kParse;
    }

    try {
        Tolerances tol;
        if (const char* env = std::getenv("QUADFLOW_TOL")) tol = parse_tolerances(env);
        return emit(action(tol), out_path);
    } catch (const PositivityError& e) {
        std::cerr << "positivity error: " << with_margin(e.what(), e.margin()) << "\n";
        return kPositivity;
    } catch (const BoundaryError& e) {
        std::cerr << "boundary error: " << e.what() << "\n";
        return kPositivity;
    } catch (const CompositionError& e) {
        std::cerr << "composition error: " << with_margin(e.what(), e.margin()) << "\n";
        return kComposition;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
}
