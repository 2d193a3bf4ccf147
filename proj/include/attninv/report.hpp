#pragma once

#include "attninv/solver.hpp"

#include <string>
#include <vector>

namespace attninv {

// One solver run as a row of the summary table.
struct RunSummary {
    std::string instance;
    std::string solver;
    std::string status;
    long iterations = 0;
    double final_loss = 0;
    double final_grad_norm = 0;
    double distance = -1;  // ||X_out - X_true||_F, negative when unknown
    double wall_ms = 0;
};

RunSummary summarize(const std::string& instance, const std::string& solver, const std::string& status,
                     const std::vector<RunRecord>& records, double distance);

std::string summary_json(const RunSummary& s);
RunSummary parse_summary(const std::string& text);

std::string csv_header();
std::string csv_row(const RunSummary& s);
std::string csv_table(const std::vector<RunSummary>& rows);
std::string text_table(const std::vector<RunSummary>& rows);

}  // namespace attninv
