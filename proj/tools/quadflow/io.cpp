#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace quadflow::cli {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    return buf;
}

void JsonWriter::newline() {
    out_.push_back('\n');
    out_.append(2 * stack_.size(), ' ');
}

void JsonWriter::before_value() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (stack_.empty()) return;
    Frame& f = stack_.back();
    if (!f.first) raw(f.inline_items ? ", " : ",");
    if (!f.inline_items) newline();
    f.first = false;
}

JsonWriter& JsonWriter::begin_object() {
    before_value();
    raw("{");
    stack_.push_back(Frame{});
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    const bool empty = stack_.back().first;
    stack_.pop_back();
    if (!empty) newline();
    raw("}");
    return *this;
}

JsonWriter& JsonWriter::begin_array(bool inline_items) {
    before_value();
    raw("[");
    stack_.push_back(Frame{true, inline_items});
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    const Frame f = stack_.back();
    stack_.pop_back();
    if (!f.inline_items && !f.first) newline();
    raw("]");
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    before_value();
    raw("\"");
    raw(k);
    raw("\": ");
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double x) {
    before_value();
    raw(std::isfinite(x) ? format_double(x) : "null");
    return *this;
}

JsonWriter& JsonWriter::value(int x) {
    before_value();
    raw(std::to_string(x));
    return *this;
}

JsonWriter& JsonWriter::value(bool x) {
    before_value();
    raw(x ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(cplx z) {
    begin_array(true);
    value(z.real());
    value(z.imag());
    return end_array();
}

JsonWriter& JsonWriter::value(std::string_view s) {
    before_value();
    raw(json(std::string(s)).dump());
    return *this;
}

JsonWriter& JsonWriter::value(const std::vector<double>& xs) {
    begin_array(true);
    for (double x : xs) value(x);
    return end_array();
}

JsonWriter& JsonWriter::value(const RVector& xs) {
    begin_array(true);
    for (Eigen::Index i = 0; i < xs.size(); ++i) value(xs(i));
    return end_array();
}

JsonWriter& JsonWriter::value(const CVector& zs) {
    begin_array(true);
    for (Eigen::Index i = 0; i < zs.size(); ++i) value(zs(i));
    return end_array();
}

JsonWriter& JsonWriter::value(const CMatrix& m) {
    begin_array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) value(CVector(m.row(r).transpose()));
    return end_array();
}

namespace {

cplx parse_complex(const json& j, const std::string& what) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    throw ParseError(what + ": expected a number or a [re, im] pair");
}

CVector parse_cvector(const json& j, int len, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != len)
        throw ParseError(what + ": expected an array of length " + std::to_string(len));
    CVector v(len);
    for (int i = 0; i < len; ++i) v(i) = parse_complex(j[i], what);
    return v;
}

CMatrix parse_cmatrix(const json& j, int rows, int cols, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw ParseError(what + ": expected " + std::to_string(rows) + " rows");
    CMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) m.row(r) = parse_cvector(j[r], cols, what).transpose();
    return m;
}

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw ParseError(std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
}

int dimension(const json& j) {
    if (!j.contains("n") || !j["n"].is_number_integer()) throw ParseError("missing integer field 'n'");
    const int n = j["n"].get<int>();
    try {
        check_dimension(n);
    } catch (const DimensionError& e) {
        throw ParseError(e.what());
    }
    return n;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError(what + ": trailing characters in '" + s + "'");
        return x;
    } catch (const std::logic_error&) {
        throw ParseError(what + ": not a number: '" + s + "'");
    }
}

}  // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

ProblemSpec parse_problem(const json& j, const Tolerances& tol) {
    if (!j.is_object()) throw ParseError("problem spec must be a JSON object");
    const int n = dimension(j);
    std::optional<ModelBlock> model;
    std::optional<QuadraticForm> q;
    try {
        if (j.contains("model")) {
            const json& m = j["model"];
            if (n != 1) throw ParseError("model block needs n = 1");
            if (j.contains("hessian")) throw ParseError("give either 'hessian' or 'model', not both");
            model = ModelBlock{number(m, "theta"), number(m, "t1"), number(m, "t2")};
            q = rotated_oscillator(model->theta).scaled(cplx(model->t1, model->t2));
        } else if (j.contains("hessian")) {
            q = QuadraticForm(parse_cmatrix(j["hessian"], 2 * n, 2 * n, "hessian"), tol);
        } else {
            throw ParseError("problem spec needs 'hessian' or 'model'");
        }
    } catch (const InvariantError& e) {
        throw ParseError(e.what());
    }
    PhaseVector v = PhaseVector::zero(n);
    if (j.contains("shift")) v = PhaseVector(parse_cvector(j["shift"], 2 * n, "shift"));

    std::optional<GridSpec> grid;
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.contains("N") || !g["N"].is_number_integer()) throw ParseError("grid block needs integer 'N'");
        grid = GridSpec{n, number(g, "L"), g["N"].get<int>()};
        if (!(grid->L > 0.0) || grid->N < 2) throw ParseError("grid needs L > 0 and N >= 2");
    }
    return ProblemSpec{*q, v, model, grid};
}

GaussianKernel parse_kernel(const json& j) {
    if (!j.is_object()) throw ParseError("kernel must be a JSON object");
    const int n = dimension(j);
    GaussianKernel k;
    for (const char* f : {"pxx", "pxy", "pyy"})
        if (!j.contains(f)) throw ParseError(std::string("kernel is missing '") + f + "'");
    k.pxx = parse_cmatrix(j["pxx"], n, n, "pxx");
    k.pxy = parse_cmatrix(j["pxy"], n, n, "pxy");
    k.pyy = parse_cmatrix(j["pyy"], n, n, "pyy");
    if ((k.pxx - k.pxx.transpose()).norm() > 1e-12 * scale_of(k.pxx) ||
        (k.pyy - k.pyy.transpose()).norm() > 1e-12 * scale_of(k.pyy))
        throw ParseError("pxx and pyy must be symmetric");
    k.lx = j.contains("lx") ? parse_cvector(j["lx"], n, "lx") : CVector::Zero(n);
    k.ly = j.contains("ly") ? parse_cvector(j["ly"], n, "ly") : CVector::Zero(n);
    if (j.contains("c0")) k.c0 = parse_complex(j["c0"], "c0");
    if (j.contains("amplitude")) k.amplitude = parse_complex(j["amplitude"], "amplitude");
    return k;
}

GridSpec parse_grid(const std::string& text, int n) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw ParseError("--grid expects L,N");
    GridSpec g{n, to_double(parts[0], "--grid L"), static_cast<int>(to_double(parts[1], "--grid N"))};
    if (!(g.L > 0.0) || g.N < 2) throw ParseError("--grid needs L > 0 and N >= 2");
    return g;
}

std::vector<double> parse_range(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ParseError("range expects a:b:count, got '" + text + "'");
    const double a = to_double(parts[0], "range"), b = to_double(parts[1], "range");
    const double c = to_double(parts[2], "range count");
    if (c < 0 || c != std::floor(c)) throw ParseError("range count must be a non-negative integer");
    const int count = static_cast<int>(c);
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    return out;
}

PhaseVector parse_shift(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) throw ParseError("shift expects re_x,im_x,re_xi,im_xi");
    CVector v(2);
    v << cplx(to_double(parts[0], "shift"), to_double(parts[1], "shift")),
        cplx(to_double(parts[2], "shift"), to_double(parts[3], "shift"));
    return PhaseVector(v);
}

void write_form(JsonWriter& w, const QuadraticForm& q, const PhaseVector& v) {
    w.field("n", q.n());
    w.field("hessian", q.hess());
    w.field("shift", v.data());
}

void write_kernel(JsonWriter& w, const GaussianKernel& k) {
    w.field("n", k.n());
    w.field("pxx", k.pxx);
    w.field("pxy", k.pxy);
    w.field("pyy", k.pyy);
    w.field("lx", k.lx);
    w.field("ly", k.ly);
    w.field("c0", k.c0);
    w.field("amplitude", k.amplitude);
    w.field("sign_ambiguous", k.sign_ambiguous);
}

void write_grid(JsonWriter& w, const GridSpec& g) {
    w.key("grid").begin_object();
    w.field("L", g.L);
    w.field("N", g.N);
    w.end_object();
}

}  // namespace quadflow::cli
