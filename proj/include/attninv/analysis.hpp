#pragma once

#include "attninv/hessian.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace attninv {

// One measured quantity against its bound.
struct BoundCheck {
    std::string name;
    double lhs = 0;  // measured
    double rhs = 0;  // bound at R_eff
    bool explicit_constant = true;  // false for big-O checks with a chosen constant
    bool pass = true;
};

// Relative slack for bound comparisons. Inputs are scaled to norm exactly R,
// so tight bounds (d = 1) can hold with equality and miss by an ulp.
inline constexpr double kBoundSlack = 1e-12;

struct BoundReport {
    double R_eff = 1;
    std::vector<BoundCheck> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add(std::string name, double lhs, double rhs, bool explicit_constant = true) {
        checks.push_back({std::move(name), lhs, rhs, explicit_constant, lhs <= rhs * (1 + kBoundSlack)});
    }
};

template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& A) {
    if (A.size() == 0) return 0;
    const Matrix<double> Ad = A.template cast<double>();
    Eigen::JacobiSVD<Matrix<double>> svd(Ad);
    return svd.singularValues()(0);
}

// max(1, ||W||, ||V||, ||X||, sqrt(max |b|)), spectral norms.
template <typename Scalar, typename Derived>
double r_eff(const ProblemSpec<Scalar>& spec, const Eigen::MatrixBase<Derived>& X) {
    double r = 1;
    r = std::max(r, spectral_norm(spec.W));
    r = std::max(r, spectral_norm(spec.V));
    r = std::max(r, spectral_norm(X));
    if (spec.B.size() > 0) r = std::max(r, std::sqrt(static_cast<double>(spec.B.cwiseAbs().maxCoeff())));
    return r;
}

// gamma = 72 n d R^8.
inline double choose_gamma(Index n, Index d, double R) {
    if (!(R >= 1)) throw PreconditionError("choose_gamma requires R_eff >= 1");
    return 72.0 * static_cast<double>(n) * static_cast<double>(d) * std::pow(R, 8);
}

// Bounds on forward quantities, first derivatives and Hessian blocks, each
// reported as the maximum over all indices.
template <typename Scalar, typename Derived>
BoundReport bound_suite(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec,
                        const Eigen::MatrixBase<Derived>& X) {
    const Index n = spec.n, d = spec.d;
    const double R = r_eff(spec, X);
    const double R2 = R * R, R3 = R2 * R, R4 = R2 * R2, R5 = R4 * R, R6 = R3 * R3;
    const double snd = std::sqrt(static_cast<double>(n * d));
    auto dbl = [](const Scalar& v) { return static_cast<double>(v); };
    BoundReport rep;
    rep.R_eff = R;

    double f_norm = 0, h_norm = 0, p_norm = 0;
    for (Index i = 0; i < n; ++i) f_norm = std::max(f_norm, dbl(c.F.col(i).norm()));
    for (Index j = 0; j < d; ++j) h_norm = std::max(h_norm, dbl(c.H.col(j).norm()));
    for (Index j = 0; j < d; ++j) p_norm = std::max(p_norm, dbl(c.P.col(j).norm()));
    rep.add("f_norm", f_norm, 1.0);
    rep.add("h_norm", h_norm, R2);
    rep.add("c_abs", dbl(c.C.cwiseAbs().maxCoeff()), 2 * R2);
    rep.add("XtW_col_norm", p_norm, R2);
    rep.add("w_abs", dbl(c.Wsc.cwiseAbs().maxCoeff()), R2);
    rep.add("z_abs", dbl(c.Zsc.cwiseAbs().maxCoeff()), R2);
    rep.add("s_abs", dbl(c.S.cwiseAbs().maxCoeff()), R2);

    double df_entry = 0, df_fro = 0;
    for (Index i0 = 0; i0 < n; ++i0) {
        double fro2 = 0;
        for (Index i1 = 0; i1 < n; ++i1)
            for (Index j1 = 0; j1 < d; ++j1) {
                const double nv = dbl(grad_f_direction(c, spec, i0, i1, j1).norm());
                df_entry = std::max(df_entry, nv);
                fro2 += nv * nv;
            }
        df_fro = std::max(df_fro, std::sqrt(fro2));
    }
    rep.add("df_entry_norm", df_entry, 4 * R2);
    rep.add("grad_f_fro", df_fro, 4 * snd * R2);

    double dc_abs = 0, gc_norm = 0;
    double hn[5] = {0, 0, 0, 0, 0};
    for (Index i0 = 0; i0 < n; ++i0)
        for (Index j0 = 0; j0 < d; ++j0) {
            const Vector<Scalar> g = grad_c(c, spec, i0, j0);
            dc_abs = std::max(dc_abs, dbl(g.cwiseAbs().maxCoeff()));
            gc_norm = std::max(gc_norm, dbl(g.norm()));
            const HessianBlocks<Scalar> hb = assemble_hessian_c(c, spec, i0, j0);
            for (Index i1 = 0; i1 < n; ++i1)
                for (Index i2 = 0; i2 < n; ++i2) {
                    const int k = static_cast<int>(hb.case_of(i1, i2));
                    hn[k] = std::max(hn[k], spectral_norm(hb.block(i1, i2)));
                }
        }
    rep.add("dc_entry_abs", dc_abs, 5 * R4);
    rep.add("grad_c_norm", gc_norm, 5 * snd * R4);
    rep.add("H1_norm", hn[0], 23 * R6 + R5 + 12 * R3);
    rep.add("H2_norm", hn[1], 11 * R6 + 6 * R3);
    rep.add("H3_norm", hn[2], 11 * R6 + 6 * R3);
    rep.add("H4_norm", hn[3], 5 * R6 + 4 * R3);
    rep.add("H5_norm", hn[4], 4 * R6 + 2 * R3);
    return rep;
}

struct PsdReport {
    double R_eff = 1;
    double lambda_min = 0;        // of the Hessian with gamma = 0
    double floor = 0;             // -2 * 72 n d R^8
    bool pass = true;
    double hess_c_max_eig = 0;    // max over residuals of the spectral radius of Hess c
    double hess_c_bound = 0;      // 2 * 36 R^6
    bool hess_c_pass = true;
    double lambda_min_total = 0;  // with the spec's own gamma

    bool all_pass() const { return pass && hess_c_pass; }
};

template <typename Scalar>
double min_eigenvalue(const Matrix<Scalar>& A) {
    Eigen::SelfAdjointEigenSolver<Matrix<double>> es(A.template cast<double>(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericRangeError("symmetric eigensolve failed");
    return es.eigenvalues()(0);
}

template <typename Scalar, typename Derived>
PsdReport psd_floor(const ProblemSpec<Scalar>& spec, const Eigen::MatrixBase<Derived>& X) {
    require_dense_cap(spec.n, spec.d);
    PsdReport r;
    r.R_eff = r_eff(spec, X);
    const double nd = static_cast<double>(spec.n * spec.d);
    ProblemSpec<Scalar> bare = spec;
    bare.gamma = 0;
    const ForwardCache<Scalar> c = forward_cache(bare, X);
    const Matrix<Scalar> Hl = hessian_L(c, bare, X);
    r.lambda_min = min_eigenvalue(Hl);
    r.floor = -2.0 * 72.0 * nd * std::pow(r.R_eff, 8);
    r.pass = r.lambda_min >= r.floor;
    r.lambda_min_total = r.lambda_min + 2.0 * static_cast<double>(spec.gamma);
    r.hess_c_bound = 2.0 * 36.0 * std::pow(r.R_eff, 6);
    for (Index i0 = 0; i0 < spec.n; ++i0)
        for (Index j0 = 0; j0 < spec.d; ++j0) {
            const Matrix<Scalar> Hc = assemble_hessian_c(c, bare, i0, j0).full;
            Eigen::SelfAdjointEigenSolver<Matrix<double>> es(Hc.template cast<double>(), Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success) throw NumericRangeError("symmetric eigensolve failed");
            r.hess_c_max_eig = std::max(r.hess_c_max_eig, es.eigenvalues().cwiseAbs().maxCoeff());
        }
    r.hess_c_pass = r.hess_c_max_eig <= r.hess_c_bound;
    return r;
}

// Difference ratios between X and Y against the Lipschitz constants at
// R = max(R_eff(X), R_eff(Y)). Ratios are 0 when X == Y.
template <typename Scalar>
BoundReport lipschitz_probe(const ProblemSpec<Scalar>& spec, const Matrix<Scalar>& X, const Matrix<Scalar>& Y,
                            double big_o_constant = 200.0) {
    require_dense_cap(spec.n, spec.d);
    const Index n = spec.n, d = spec.d;
    const double R = std::max(r_eff(spec, X), r_eff(spec, Y));
    const double nd = static_cast<double>(n * d), snd = std::sqrt(nd);
    const double R2 = R * R, R4 = R2 * R2;
    const double dist = static_cast<double>((X - Y).norm());
    const ForwardCache<Scalar> cx = forward_cache(spec, X), cy = forward_cache(spec, Y);
    auto ratio = [&](double v) { return dist > 0 ? v / dist : 0.0; };
    auto dbl = [](const Scalar& v) { return static_cast<double>(v); };

    double f = 0, h = 0;
    for (Index i = 0; i < n; ++i) f = std::max(f, dbl((cx.F.col(i) - cy.F.col(i)).norm()));
    for (Index j = 0; j < d; ++j) h = std::max(h, dbl((cx.H.col(j) - cy.H.col(j)).norm()));
    BoundReport rep;
    rep.R_eff = R;
    rep.add("lip_f", ratio(f), 4 * snd * R2);
    rep.add("lip_c", ratio(dbl((cx.C - cy.C).cwiseAbs().maxCoeff())), 5 * snd * R4);
    rep.add("lip_h", ratio(h), R);
    rep.add("lip_w", ratio(dbl((cx.Wsc - cy.Wsc).cwiseAbs().maxCoeff())), R);
    rep.add("lip_z", ratio(dbl((cx.Zsc - cy.Zsc).cwiseAbs().maxCoeff())), 5 * snd * R4);

    const Matrix<Scalar> Jx = residual_jacobian(cx, spec), Jy = residual_jacobian(cy, spec);
    rep.add("lip_grad_c", ratio(dbl((Jx - Jy).cwiseAbs().maxCoeff())), big_o_constant * snd * std::pow(R, 6),
            false);
    double hc = 0;
    for (Index i0 = 0; i0 < n; ++i0)
        for (Index j0 = 0; j0 < d; ++j0)
            hc = std::max(hc, dbl((assemble_hessian_c(cx, spec, i0, j0).full -
                                   assemble_hessian_c(cy, spec, i0, j0).full)
                                      .cwiseAbs()
                                      .maxCoeff()));
    rep.add("lip_hes_c", ratio(hc), big_o_constant * snd * std::pow(R, 8), false);
    const double hl = dbl((hessian_L(cx, spec, X) - hessian_L(cy, spec, Y)).norm());
    rep.add("lip_hes_L", ratio(hl), big_o_constant * std::pow(nd, 3.5) * std::pow(R, 10), false);
    return rep;
}

}  // namespace attninv
