#include "attninv/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace attninv {

namespace {

using nlohmann::json;

MatrixXd matrix_from(const json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw IoError(what + ": expected an object with rows, cols and data");
    const auto r = j.at("rows").get<long long>();
    const auto c = j.at("cols").get<long long>();
    const auto& data = j.at("data");
    if (r < 0 || c < 0 || !data.is_array() || static_cast<long long>(data.size()) != r * c)
        throw IoError(what + ": data length does not match rows*cols");
    MatrixXd M(r, c);
    for (long long i = 0; i < r; ++i)
        for (long long k = 0; k < c; ++k) {
            const auto& v = data[static_cast<std::size_t>(i * c + k)];
            if (!v.is_number()) throw IoError(what + ": non-numeric entry");
            M(i, k) = v.get<double>();
        }
    return M;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("JSON parse error: ") + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string matrix_json(const MatrixXd& M) {
    std::string s = "{\"rows\": " + std::to_string(M.rows()) + ", \"cols\": " + std::to_string(M.cols()) +
                    ", \"data\": [";
    for (Index i = 0; i < M.rows(); ++i)
        for (Index k = 0; k < M.cols(); ++k) {
            if (i || k) s += ", ";
            s += format_double(M(i, k));
        }
    return s + "]}";
}

std::string problem_json(const ProblemSpec<double>& spec) {
    return "{\n  \"n\": " + std::to_string(spec.n) + ",\n  \"d\": " + std::to_string(spec.d) +
           ",\n  \"gamma\": " + format_double(spec.gamma) + ",\n  \"W\": " + matrix_json(spec.W) +
           ",\n  \"V\": " + matrix_json(spec.V) + ",\n  \"B\": " + matrix_json(spec.B) + "\n}\n";
}

std::string record_json(const RunRecord& r) {
    return "{\"iter\": " + std::to_string(r.iter) + ", \"loss\": " + format_double(r.loss) +
           ", \"grad_norm\": " + format_double(r.grad_norm) + ", \"step_norm\": " + format_double(r.step_norm) +
           ", \"damping_used\": " + format_double(r.damping_used) +
           ", \"wallclock_ms\": " + format_double(r.wallclock_ms) + "}";
}

MatrixXd parse_matrix(const std::string& text) { return matrix_from(parse_json(text), "matrix"); }

ProblemSpec<double> parse_problem(const std::string& text) {
    const json j = parse_json(text);
    ProblemSpec<double> p;
    try {
        p.n = j.at("n").get<long long>();
        p.d = j.at("d").get<long long>();
        p.gamma = j.at("gamma").get<double>();
        p.W = matrix_from(j.at("W"), "W");
        p.V = matrix_from(j.at("V"), "V");
        p.B = matrix_from(j.at("B"), "B");
    } catch (const json::exception& e) {
        throw IoError(std::string("problem file: ") + e.what());
    }
    try {
        p.validate();
    } catch (const PreconditionError& e) {
        throw IoError(std::string("problem file: ") + e.what());
    }
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

MatrixXd read_matrix(const std::string& path) { return parse_matrix(read_file(path)); }

void write_matrix(const std::string& path, const MatrixXd& M) { write_file(path, matrix_json(M) + "\n"); }

ProblemSpec<double> read_problem(const std::string& path) { return parse_problem(read_file(path)); }

void write_problem(const std::string& path, const ProblemSpec<double>& spec) { write_file(path, problem_json(spec)); }

void write_records(const std::string& path, const std::vector<RunRecord>& records) {
    std::string s;
    for (const auto& r : records) s += record_json(r) + "\n";
    write_file(path, s);
}

std::vector<RunRecord> parse_records(const std::string& text, std::vector<std::string>* warnings) {
    std::vector<RunRecord> out;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    auto num = [](const json& j, const char* key) {
        const auto& v = j.at(key);
        return v.is_null() ? NAN : v.get<double>();
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            RunRecord r;
            r.iter = j.at("iter").get<long>();
            r.loss = num(j, "loss");
            r.grad_norm = num(j, "grad_norm");
            r.step_norm = num(j, "step_norm");
            r.damping_used = num(j, "damping_used");
            r.wallclock_ms = num(j, "wallclock_ms");
            out.push_back(r);
        } catch (const json::exception& e) {
            if (warnings) warnings->push_back("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace attninv
