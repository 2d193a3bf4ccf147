#include "attninv/checks.hpp"

#include "attninv/generate.hpp"
#include "attninv/io.hpp"

#include <cmath>
#include <string>

namespace attninv {

bool CheckSuite::pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

void CheckSuite::append(const CheckSuite& other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

CheckEntry from_report(const std::string& level, const CheckReport& r, const std::string& where) {
    CheckEntry e;
    e.level = level;
    e.name = r.target;
    e.lhs = r.max_abs_err;
    e.rhs = r.tol_abs;
    e.pass = r.pass;
    e.detail = "max_rel_err " + format_double(r.max_rel_err) + ", tol_rel " + format_double(r.tol_rel) +
               ", worst " + where;
    return e;
}

std::string flat_name(Index k, Index d) {
    return "k=" + std::to_string(k) + " (i=" + std::to_string(k / d) + ", j=" + std::to_string(k % d) + ")";
}

VectorXd residual_vector(const ProblemSpec<double>& spec, const VectorXd& x) {
    const MatrixXd C = forward_cache(spec, unflatten(x, spec.d, spec.n)).C;
    const MatrixXd Ct = C.transpose();
    return flatten(Ct);  // index i0*d + j0
}

}  // namespace

std::string CheckSuite::json() const {
    std::string s = "{\n  \"pass\": " + std::string(pass() ? "true" : "false") + ",\n  \"checks\": [";
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        s += k ? ",\n    " : "\n    ";
        s += "{\"level\": " + quote(e.level) + ", \"name\": " + quote(e.name) + ", \"lhs\": " + format_double(e.lhs) +
             ", \"rhs\": " + format_double(e.rhs) + ", \"kind\": " + quote(e.kind) +
             ", \"pass\": " + (e.pass ? "true" : "false") + ", \"detail\": " + quote(e.detail) + "}";
    }
    return s + (entries.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

CheckLevel parse_level(const std::string& t) {
    if (t == "grad") return CheckLevel::Grad;
    if (t == "hessian") return CheckLevel::Hessian;
    if (t == "bounds") return CheckLevel::Bounds;
    if (t == "psd") return CheckLevel::Psd;
    if (t == "lipschitz") return CheckLevel::Lipschitz;
    if (t == "all") return CheckLevel::All;
    throw PreconditionError("unknown check level '" + t + "'");
}

VectorXd analytic_grad(const ProblemSpec<double>& spec, const MatrixXd& X) {
    return grad_L(forward_cache(spec, X), spec, X);
}

CheckSuite grad_checks(const ProblemSpec<double>& spec, const MatrixXd& X, const GradFn& grad, const FdConfig& cfg) {
    const Index n = spec.n, d = spec.d;
    const VectorXd x = flatten(X);
    CheckSuite out;

    const VectorXd fd = fd_grad<double>([&](const VectorXd& v) { return loss(spec, unflatten(v, d, n)); }, x, cfg);
    const CheckReport rg = check("grad_L_vs_fd", grad(spec, X), fd, cfg);
    out.entries.push_back(from_report("grad", rg, flat_name(rg.worst_row, d)));

    const ForwardCache<double> c = forward_cache(spec, X);
    const MatrixXd J = residual_jacobian(c, spec);
    const MatrixXd Jfd = fd_jacobian<double>([&](const VectorXd& v) { return residual_vector(spec, v); }, x, cfg);
    const CheckReport rj = check("grad_c_vs_fd", J, Jfd, cfg);
    out.entries.push_back(from_report(
        "grad", rj, "residual " + flat_name(rj.worst_row, d) + ", input " + flat_name(rj.worst_col, d)));

    double max_sum = 0;
    CheckReport worst_f;
    std::string where;
    for (Index i0 = 0; i0 < n; ++i0) {
        MatrixXd Jf(n, n * d);
        for (Index i1 = 0; i1 < n; ++i1)
            for (Index j1 = 0; j1 < d; ++j1) {
                const VectorXd g = grad_f_direction(c, spec, i0, i1, j1);
                Jf.col(flat_index(i1, j1, d)) = g;
                max_sum = std::max(max_sum, std::abs(g.sum()));
            }
        const MatrixXd Jf_fd = fd_jacobian<double>(
            [&](const VectorXd& v) { return VectorXd(forward_cache(spec, unflatten(v, d, n)).F.col(i0)); }, x, cfg);
        const CheckReport r = check("grad_f_vs_fd", Jf, Jf_fd, cfg);
        const bool worse = i0 == 0 || (!r.pass && worst_f.pass) ||
                           (r.pass == worst_f.pass && r.max_abs_err > worst_f.max_abs_err);
        if (worse) {
            worst_f = r;
            where = "column " + std::to_string(i0) + ", entry " + std::to_string(r.worst_row) + ", input " +
                    flat_name(r.worst_col, d);
        }
    }
    out.entries.push_back(from_report("grad", worst_f, where));

    CheckEntry zs;
    zs.level = "grad";
    zs.name = "grad_f_sum_zero";
    zs.lhs = max_sum;
    zs.rhs = 1e-12;
    zs.pass = max_sum <= 1e-12;
    zs.detail = "max |<df, 1>| over all directions";
    out.entries.push_back(zs);
    return out;
}

double block_entry_max_diff(const ProblemSpec<double>& spec, const MatrixXd& X) {
    const ForwardCache<double> c = forward_cache(spec, X);
    const Index n = spec.n, d = spec.d;
    double worst = 0;
    for (Index i0 = 0; i0 < n; ++i0)
        for (Index j0 = 0; j0 < d; ++j0) {
            const HessianBlocks<double> hb = assemble_hessian_c(c, spec, i0, j0);
            for (Index i1 = 0; i1 < n; ++i1)
                for (Index i2 = 0; i2 < n; ++i2) {
                    const MatrixXd blk = hessian_block(c, spec, i0, j0, i1, i2);
                    for (Index j1 = 0; j1 < d; ++j1)
                        for (Index j2 = 0; j2 < d; ++j2) {
                            const double e = d2c_entry(c, spec, i0, j0, i1, j1, i2, j2);
                            worst = std::max(worst, std::abs(blk(j1, j2) - e));
                            worst = std::max(worst, std::abs(hb.block(i1, i2)(j1, j2) - e));
                        }
                }
        }
    return worst;
}

CheckSuite hessian_checks(const ProblemSpec<double>& spec, const MatrixXd& X, double fd_tol) {
    const Index n = spec.n, d = spec.d;
    const VectorXd x = flatten(X);
    const ForwardCache<double> c = forward_cache(spec, X);
    const MatrixXd Hl = hessian_L(c, spec, X);
    CheckSuite out;

    const MatrixXd Hfd =
        fd_hessian<double>([&](const VectorXd& v) { return loss(spec, unflatten(v, d, n)); }, x, FdConfig{});
    const CheckReport r1 = check("hess_L_vs_fd_hessian", Hl, Hfd, fd_tol, fd_tol);
    out.entries.push_back(
        from_report("hessian", r1, flat_name(r1.worst_row, d) + " x " + flat_name(r1.worst_col, d)));

    const MatrixXd Hjac = fd_jacobian<double>(
        [&](const VectorXd& v) {
            const MatrixXd Xv = unflatten(v, d, n);
            return grad_L(forward_cache(spec, Xv), spec, Xv);
        },
        x, FdConfig{});
    const CheckReport r2 = check("hess_L_vs_fd_jacobian_grad", Hl, Hjac, fd_tol, fd_tol);
    out.entries.push_back(
        from_report("hessian", r2, flat_name(r2.worst_row, d) + " x " + flat_name(r2.worst_col, d)));

    CheckEntry sym;
    sym.level = "hessian";
    sym.name = "hess_L_symmetry";
    sym.lhs = (Hl - Hl.transpose()).cwiseAbs().maxCoeff();
    sym.rhs = 1e-8 * (1 + Hl.cwiseAbs().maxCoeff());
    sym.pass = sym.lhs <= sym.rhs;
    out.entries.push_back(sym);

    double csym = 0, cscale = 0;
    for (Index i0 = 0; i0 < n; ++i0)
        for (Index j0 = 0; j0 < d; ++j0) {
            const MatrixXd Hc = assemble_hessian_c(c, spec, i0, j0).full;
            csym = std::max(csym, (Hc - Hc.transpose()).cwiseAbs().maxCoeff());
            cscale = std::max(cscale, Hc.cwiseAbs().maxCoeff());
        }
    CheckEntry cs;
    cs.level = "hessian";
    cs.name = "hess_c_symmetry";
    cs.lhs = csym;
    cs.rhs = 1e-8 * (1 + cscale);
    cs.pass = cs.lhs <= cs.rhs;
    out.entries.push_back(cs);

    CheckEntry be;
    be.level = "hessian";
    be.name = "block_entry_equivalence";
    be.lhs = block_entry_max_diff(spec, X);
    be.rhs = 1e-10;
    be.pass = be.lhs <= be.rhs;
    be.detail = "max |block - d2c_entry| over all residuals and blocks";
    out.entries.push_back(be);
    return out;
}

CheckSuite bound_checks(const ProblemSpec<double>& spec, const MatrixXd& X) {
    const BoundReport rep = bound_suite(forward_cache(spec, X), spec, X);
    CheckSuite out;
    for (const auto& b : rep.checks) {
        CheckEntry e;
        e.level = "bounds";
        e.name = b.name;
        e.lhs = b.lhs;
        e.rhs = b.rhs;
        e.pass = b.pass;
        e.kind = b.explicit_constant ? "explicit" : "big-O";
        e.detail = "R_eff " + format_double(rep.R_eff);
        out.entries.push_back(e);
    }
    return out;
}

CheckSuite psd_checks(const ProblemSpec<double>& spec, const MatrixXd& X) {
    const PsdReport r = psd_floor(spec, X);
    CheckSuite out;
    CheckEntry fl;
    fl.level = "psd";
    fl.name = "psd_floor";
    // lambda_min >= floor written as -lambda_min <= -floor
    fl.lhs = -r.lambda_min;
    fl.rhs = -r.floor;
    fl.pass = r.pass;
    fl.kind = "big-O";
    fl.detail = "lambda_min " + format_double(r.lambda_min) + " >= floor " + format_double(r.floor) + ", R_eff " +
                format_double(r.R_eff);
    out.entries.push_back(fl);

    CheckEntry hc;
    hc.level = "psd";
    hc.name = "hess_c_spectral";
    hc.lhs = r.hess_c_max_eig;
    hc.rhs = r.hess_c_bound;
    hc.pass = r.hess_c_pass;
    hc.kind = "explicit";
    hc.detail = "max over residuals of the spectral radius of Hess c, bound 2*36 R^6";
    out.entries.push_back(hc);

    ProblemSpec<double> reg = spec;
    reg.gamma = choose_gamma(spec.n, spec.d, r.R_eff);
    const double lmin = min_eigenvalue(hessian_L(forward_cache(reg, X), reg, X));
    CheckEntry pd;
    pd.level = "psd";
    pd.name = "auto_gamma_positive_definite";
    pd.lhs = -lmin;
    pd.rhs = 0;
    pd.pass = lmin > 0;
    pd.kind = "explicit";
    pd.detail = "lambda_min " + format_double(lmin) + " with gamma " + format_double(reg.gamma);
    out.entries.push_back(pd);
    return out;
}

CheckSuite lipschitz_checks(const ProblemSpec<double>& spec, std::uint64_t seed, int pairs, double r_target) {
    SplitMix64 rng(seed);
    CheckSuite out;
    std::vector<BoundCheck> worst;
    std::vector<double> worst_margin;
    for (int k = 0; k < pairs; ++k) {
        const MatrixXd X = random_matrix(rng, spec.d, spec.n, r_target);
        const MatrixXd Y = random_matrix(rng, spec.d, spec.n, r_target);
        const BoundReport rep = lipschitz_probe(spec, X, Y);
        if (worst.empty()) {
            worst = rep.checks;
            for (const auto& b : rep.checks) worst_margin.push_back(b.lhs / b.rhs);
            continue;
        }
        for (std::size_t i = 0; i < rep.checks.size(); ++i) {
            const double m = rep.checks[i].lhs / rep.checks[i].rhs;
            if (!rep.checks[i].pass || (worst[i].pass && m > worst_margin[i])) {
                worst[i] = rep.checks[i];
                worst_margin[i] = m;
            }
        }
    }
    for (const auto& b : worst) {
        CheckEntry e;
        e.level = "lipschitz";
        e.name = b.name;
        e.lhs = b.lhs;
        e.rhs = b.rhs;
        e.pass = b.pass;
        e.kind = b.explicit_constant ? "explicit" : "big-O";
        e.detail = "worst of " + std::to_string(pairs) + " pairs by lhs/rhs";
        out.entries.push_back(e);
    }
    return out;
}

CheckSuite run_checks(const ProblemSpec<double>& spec, const MatrixXd& X, CheckLevel level, std::uint64_t seed,
                      double r_target) {
    CheckSuite out;
    const bool all = level == CheckLevel::All;
    if (all || level == CheckLevel::Grad) out.append(grad_checks(spec, X));
    if (all || level == CheckLevel::Hessian) out.append(hessian_checks(spec, X));
    if (all || level == CheckLevel::Bounds) out.append(bound_checks(spec, X));
    if (all || level == CheckLevel::Psd) out.append(psd_checks(spec, X));
    if (all || level == CheckLevel::Lipschitz) out.append(lipschitz_checks(spec, seed, 5, r_target));
    return out;
}

}  // namespace attninv
