#pragma once

#include "attninv/analysis.hpp"
#include "attninv/oracle.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace attninv {

// One line of a check report: lhs is the measured error or quantity, rhs the
// tolerance or bound it must not exceed.
struct CheckEntry {
    std::string level;
    std::string name;
    double lhs = 0;
    double rhs = 0;
    bool pass = true;
    std::string kind = "tolerance";  // tolerance | explicit | big-O
    std::string detail;
};

struct CheckSuite {
    std::vector<CheckEntry> entries;

    bool pass() const;
    void append(const CheckSuite& other);
    std::string json() const;  // {"pass": ..., "checks": [...]}
};

enum class CheckLevel { Grad, Hessian, Bounds, Psd, Lipschitz, All };

CheckLevel parse_level(const std::string& text);

using GradFn = std::function<VectorXd(const ProblemSpec<double>&, const MatrixXd&)>;

// Analytic grad_L at X.
VectorXd analytic_grad(const ProblemSpec<double>& spec, const MatrixXd& X);

// Against central differences: grad_L, the residual Jacobian, softmax
// Jacobians, and the zero-sum identity of softmax derivatives.
CheckSuite grad_checks(const ProblemSpec<double>& spec, const MatrixXd& X, const GradFn& grad = analytic_grad,
                       const FdConfig& cfg = {});

// hessian_L against fd_hessian(loss) and fd_jacobian(grad_L); symmetry;
// block forms against the per-entry tables.
CheckSuite hessian_checks(const ProblemSpec<double>& spec, const MatrixXd& X, double fd_tol = 1e-4);

// Largest |block entry - d2c_entry| over every residual and block.
double block_entry_max_diff(const ProblemSpec<double>& spec, const MatrixXd& X);

CheckSuite bound_checks(const ProblemSpec<double>& spec, const MatrixXd& X);

// PSD floor at gamma = 0, Hess c spectral bound, and lambda_min > 0 with the
// automatic gamma.
CheckSuite psd_checks(const ProblemSpec<double>& spec, const MatrixXd& X);

// Lipschitz ratios over `pairs` seeded pairs of bounded inputs at spectral
// norm r_target.
CheckSuite lipschitz_checks(const ProblemSpec<double>& spec, std::uint64_t seed, int pairs, double r_target);

CheckSuite run_checks(const ProblemSpec<double>& spec, const MatrixXd& X, CheckLevel level, std::uint64_t seed,
                      double r_target);

}  // namespace attninv
