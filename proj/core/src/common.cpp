#include "quadflow/common.hpp"

#include <cstdlib>
#include <sstream>

namespace quadflow {

const Tolerances& Tolerances::defaults() {
    static const Tolerances tol{};
    return tol;
}

Tolerances parse_tolerances(const std::string& text) {
    Tolerances tol = Tolerances::defaults();
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("tolerance entry without '=': " + item);
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        char* end = nullptr;
        const double x = std::strtod(val.c_str(), &end);
        if (val.empty() || *end != '\0' || !(x > 0.0)) throw ParseError("bad tolerance value for " + key + ": " + val);

        if (key == "sym") tol.sym = x;
        else if (key == "can") tol.can = x;
        else if (key == "pos") tol.pos = x;
        else if (key == "spec") tol.spec = x;
        else if (key == "log") tol.log = x;
        else if (key == "deg") tol.deg = x;
        else if (key == "boundary") tol.boundary = x;
        else if (key == "pair") tol.pair = x;
        else if (key == "residue") tol.residue = x;
        else throw ParseError("unknown tolerance key: " + key);
    }
    return tol;
}

void check_dimension(int n) {
    if (n < 1 || n > kMaxDimension)
        throw DimensionError("dimension n=" + std::to_string(n) + " outside [1, " + std::to_string(kMaxDimension) + "]");
}

}  // namespace quadflow
