#pragma once

#include "attninv/model.hpp"
#include "attninv/solver.hpp"

#include <string>
#include <vector>

namespace attninv {

// %.17g, which round-trips every double. Non-finite values become null.
std::string format_double(double v);

// {"rows": r, "cols": c, "data": [row-major]}
std::string matrix_json(const MatrixXd& M);
std::string problem_json(const ProblemSpec<double>& spec);
std::string record_json(const RunRecord& r);

MatrixXd parse_matrix(const std::string& text);
ProblemSpec<double> parse_problem(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

MatrixXd read_matrix(const std::string& path);
void write_matrix(const std::string& path, const MatrixXd& M);
ProblemSpec<double> read_problem(const std::string& path);
void write_problem(const std::string& path, const ProblemSpec<double>& spec);

// One JSON object per line.
void write_records(const std::string& path, const std::vector<RunRecord>& records);

// Malformed lines are skipped and described in warnings.
std::vector<RunRecord> parse_records(const std::string& text, std::vector<std::string>* warnings = nullptr);

}  // namespace attninv
