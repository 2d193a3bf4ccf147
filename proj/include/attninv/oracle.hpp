#pragma once

#include "attninv/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace attninv {

// Central finite-difference settings. With scale_step the probe for
// coordinate k is step * (1 + |x_k|).
struct FdConfig {
    double step = 1e-5;   // first derivatives
    double step2 = 1e-4;  // second derivatives
    bool scale_step = true;
    double tol_abs = 1e-6;
    double tol_rel = 1e-6;
};

struct CheckReport {
    std::string target;
    double max_abs_err = 0;
    double max_rel_err = 0;
    Index worst_row = -1;
    Index worst_col = -1;
    double tol_abs = 0;
    double tol_rel = 0;
    bool pass = true;
};

namespace detail {

template <typename Scalar>
Scalar probe_step(double base, const Scalar& x, bool scale) {
    using std::abs;
    return scale ? Scalar(base) * (Scalar(1) + abs(x)) : Scalar(base);
}

template <typename Scalar>
void require_finite(const Scalar& v, const char* what) {
    using std::isfinite;
    if (!isfinite(v)) throw NumericRangeError(std::string(what) + ": non-finite probe value");
}

}  // namespace detail

// Gradient of a scalar function of a vector by central differences.
template <typename Scalar, typename Fn>
Vector<Scalar> fd_grad(Fn&& fn, const Vector<Scalar>& x, const FdConfig& cfg = {}) {
    Vector<Scalar> g(x.size());
    Vector<Scalar> p = x;
    for (Index k = 0; k < x.size(); ++k) {
        const Scalar h = detail::probe_step(cfg.step, x(k), cfg.scale_step);
        p(k) = x(k) + h;
        const Scalar fp = fn(p);
        p(k) = x(k) - h;
        const Scalar fm = fn(p);
        p(k) = x(k);
        detail::require_finite(fp, "fd_grad");
        detail::require_finite(fm, "fd_grad");
        g(k) = (fp - fm) / (2 * h);
    }
    return g;
}

// Jacobian of a vector function; row r is output r, column k is input k.
template <typename Scalar, typename Fn>
Matrix<Scalar> fd_jacobian(Fn&& fn, const Vector<Scalar>& x, const FdConfig& cfg = {}) {
    Matrix<Scalar> J;
    Vector<Scalar> p = x;
    for (Index k = 0; k < x.size(); ++k) {
        const Scalar h = detail::probe_step(cfg.step, x(k), cfg.scale_step);
        p(k) = x(k) + h;
        const Vector<Scalar> fp = fn(p);
        p(k) = x(k) - h;
        const Vector<Scalar> fm = fn(p);
        p(k) = x(k);
        if (!fp.allFinite() || !fm.allFinite()) throw NumericRangeError("fd_jacobian: non-finite probe value");
        if (k == 0) J.resize(fp.size(), x.size());
        J.col(k) = (fp - fm) / (2 * h);
    }
    return J;
}

// Hessian of a scalar function: three-point diagonal, four-point mixed stencil,
// then symmetrized.
template <typename Scalar, typename Fn>
Matrix<Scalar> fd_hessian(Fn&& fn, const Vector<Scalar>& x, const FdConfig& cfg = {}) {
    const Index m = x.size();
    Matrix<Scalar> Hm(m, m);
    Vector<Scalar> hs(m);
    for (Index k = 0; k < m; ++k) hs(k) = detail::probe_step(cfg.step2, x(k), cfg.scale_step);
    const Scalar f0 = fn(x);
    detail::require_finite(f0, "fd_hessian");
    Vector<Scalar> p = x;
    auto eval = [&]() {
        const Scalar v = fn(p);
        detail::require_finite(v, "fd_hessian");
        return v;
    };
    for (Index a = 0; a < m; ++a) {
        p(a) = x(a) + hs(a);
        const Scalar fp = eval();
        p(a) = x(a) - hs(a);
        const Scalar fm = eval();
        p(a) = x(a);
        Hm(a, a) = (fp - 2 * f0 + fm) / (hs(a) * hs(a));
        for (Index b = a + 1; b < m; ++b) {
            p(a) = x(a) + hs(a);
            p(b) = x(b) + hs(b);
            const Scalar fpp = eval();
            p(b) = x(b) - hs(b);
            const Scalar fpm = eval();
            p(a) = x(a) - hs(a);
            const Scalar fmm = eval();
            p(b) = x(b) + hs(b);
            const Scalar fmp = eval();
            p(a) = x(a);
            p(b) = x(b);
            Hm(a, b) = (fpp - fpm - fmp + fmm) / (4 * hs(a) * hs(b));
            Hm(b, a) = Hm(a, b);
        }
    }
    return Scalar(0.5) * (Hm + Hm.transpose());
}

// Elementwise |a - o| <= tol_abs + tol_rel * max(|a|, |o|). The worst index is
// the entry with the largest error-to-allowance ratio.
template <typename DA, typename DO>
CheckReport check(const std::string& target, const Eigen::MatrixBase<DA>& analytic,
                  const Eigen::MatrixBase<DO>& oracle, double tol_abs, double tol_rel) {
    if (analytic.rows() != oracle.rows() || analytic.cols() != oracle.cols())
        throw PreconditionError("check(" + target + "): shape mismatch");
    CheckReport r;
    r.target = target;
    r.tol_abs = tol_abs;
    r.tol_rel = tol_rel;
    double worst_ratio = -1;
    for (Index j = 0; j < analytic.cols(); ++j) {
        for (Index i = 0; i < analytic.rows(); ++i) {
            const double a = static_cast<double>(analytic(i, j));
            const double o = static_cast<double>(oracle(i, j));
            const double err = std::abs(a - o);
            const double scale = std::max(std::abs(a), std::abs(o));
            const double allow = tol_abs + tol_rel * scale;
            const double rel = scale > 0 ? err / scale : 0.0;
            if (!(err <= allow)) r.pass = false;
            r.max_abs_err = std::max(r.max_abs_err, err);
            r.max_rel_err = std::max(r.max_rel_err, rel);
            const double ratio = std::isfinite(err) ? err / allow : INFINITY;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                r.worst_row = i;
                r.worst_col = j;
            }
        }
    }
    return r;
}

template <typename DA, typename DO>
CheckReport check(const std::string& target, const Eigen::MatrixBase<DA>& analytic,
                  const Eigen::MatrixBase<DO>& oracle, const FdConfig& cfg) {
    return check(target, analytic, oracle, cfg.tol_abs, cfg.tol_rel);
}

}  // namespace attninv
