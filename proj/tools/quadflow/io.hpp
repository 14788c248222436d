#pragma once

#include "quadflow/oracle.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quadflow::cli {

/// %.17g, with "nan"/"inf" spelled out.
std::string format_double(double x);

/// Streaming JSON writer with fixed 17-digit floats. Complex numbers are
/// [re, im] pairs; NaN and infinities become null.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array(bool inline_items = false);
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);

    JsonWriter& value(double x);
    JsonWriter& value(int x);
    JsonWriter& value(bool x);
    JsonWriter& value(cplx z);
    JsonWriter& value(std::string_view s);
    JsonWriter& value(const char* s) { return value(std::string_view(s)); }
    JsonWriter& value(const std::vector<double>& xs);
    JsonWriter& value(const RVector& xs);
    JsonWriter& value(const CVector& zs);
    JsonWriter& value(const CMatrix& m);

    template <class T>
    JsonWriter& field(std::string_view k, const T& v) {
        key(k);
        return value(v);
    }

    std::string str() const { return out_ + "\n"; }

private:
    struct Frame {
        bool first = true;
        bool inline_items = false;
    };
    void before_value();
    void newline();
    void raw(std::string_view s) { out_.append(s); }

    std::string out_;
    std::vector<Frame> stack_;
    bool after_key_ = false;
};

struct ModelBlock {
    double theta = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
};

/// Parsed problem: either an explicit Hessian or a rotated-oscillator model.
struct ProblemSpec {
    QuadraticForm q;
    PhaseVector v;
    std::optional<ModelBlock> model;
    std::optional<GridSpec> grid;
};

nlohmann::json read_json_file(const std::string& path);
ProblemSpec parse_problem(const nlohmann::json& j, const Tolerances& tol);
GaussianKernel parse_kernel(const nlohmann::json& j);
/// "L,N"
GridSpec parse_grid(const std::string& text, int n);
/// "a:b:count" -> evenly spaced samples including both ends. count = 0 gives none.
std::vector<double> parse_range(const std::string& text);
/// "re,im,re,im" -> PhaseVector of dimension 1.
PhaseVector parse_shift(const std::string& text);

void write_form(JsonWriter& w, const QuadraticForm& q, const PhaseVector& v);
void write_kernel(JsonWriter& w, const GaussianKernel& k);
void write_grid(JsonWriter& w, const GridSpec& g);

}  // namespace quadflow::cli
