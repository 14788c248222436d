#pragma once

#include "quadflow/common.hpp"

#include <optional>
#include <string>

namespace quadflow::cli {

struct NormOptions {
    std::string spec;
    bool verify = false;
    std::string grid;  // "L,N", empty for the spec's grid or auto_grid
};

struct ComposeOptions {
    std::string spec1;
    std::string spec2;
    bool verify = false;
    double product_margin = -1.0;  // stricter positivity threshold on K1 K2; < 0 keeps tol.pos
};

struct ContourOptions {
    double theta = 0.0;
    std::string t1 = "-3.14159265358979:3.14159265358979:64";
    std::string t2 = "-2:-0.05:64";
    std::string v = "0,1,0,0";
    int threads = 0;  // 0 picks hardware_concurrency
};

struct CentersOptions {
    double theta = 0.0;
    double t2 = -1.0;
    std::string v = "0,1,0,0";
    std::string t1 = "-1.5707963267948966:3.1415926535897931:121";
};

std::string run_norm(const NormOptions& o, const Tolerances& tol);
std::string run_compose(const ComposeOptions& o, const Tolerances& tol);
std::string run_to_kernel(const std::string& spec, bool formal, const Tolerances& tol);
std::string run_from_kernel(const std::string& kernel, const Tolerances& tol);
std::string run_contour(const ContourOptions& o, const Tolerances& tol);
std::string run_centers(const CentersOptions& o, const Tolerances& tol);
std::string run_check(const std::string& spec, const Tolerances& tol);

}  // namespace quadflow::cli
