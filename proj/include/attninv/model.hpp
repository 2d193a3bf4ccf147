#pragma once

#include "attninv/types.hpp"

#include <cmath>
#include <string>

namespace attninv {

// Fixed data of one inversion instance.
template <typename Scalar>
struct ProblemSpec {
    Index n = 0;
    Index d = 0;
    Matrix<Scalar> W;  // d x d, the combined weight K Q^T
    Matrix<Scalar> V;  // d x d
    Matrix<Scalar> B;  // n x d target
    Scalar gamma = 0;

    // Throws PreconditionError on bad dimensions or non-finite entries.
    void validate() const {
        if (n < 1 || d < 1) throw PreconditionError("n and d must be positive");
        if (W.rows() != d || W.cols() != d) throw PreconditionError("W must be d x d");
        if (V.rows() != d || V.cols() != d) throw PreconditionError("V must be d x d");
        if (B.rows() != n || B.cols() != d) throw PreconditionError("B must be n x d");
        if (!W.allFinite() || !V.allFinite() || !B.allFinite())
            throw PreconditionError("W, V and B must be finite");
        using std::isfinite;
        if (!isfinite(gamma) || gamma < 0) throw PreconditionError("gamma must be finite and >= 0");
    }

    // Throws PreconditionError unless X is a finite d x n matrix.
    template <typename Derived>
    void validate_input(const Eigen::MatrixBase<Derived>& X) const {
        if (X.rows() != d || X.cols() != n) throw PreconditionError("X must be d x n");
        if (!X.allFinite()) throw PreconditionError("X must be finite");
    }
};

// Forward quantities at one X. Column i0 of U and F belongs to query token i0.
template <typename Scalar>
struct ForwardCache {
    Matrix<Scalar> U;      // n x n, exp(X^T W X_{*,i0}); may overflow to inf, never used downstream
    Vector<Scalar> alpha;  // n, column sums of U
    Vector<Scalar> log_alpha;
    Matrix<Scalar> F;      // n x n, stabilized softmax columns
    Matrix<Scalar> H;      // n x d, column j0 is X^T V_{*,j0}
    Matrix<Scalar> S;      // n x d, S(i0, j0) = <f_{i0}, h_{j0}>
    Matrix<Scalar> C;      // n x d, S - B
    Matrix<Scalar> Wsc;    // n x d, row i0 is (W X_{*,i0})^T
    Matrix<Scalar> Zsc;    // n x d, row i0 is (W^T X f_{i0})^T
    Matrix<Scalar> P;      // n x d, column j is X^T W_{*,j}

    Index n() const { return F.rows(); }
    Index d() const { return H.cols(); }
};

template <typename Scalar, typename Derived>
ForwardCache<Scalar> forward_cache(const ProblemSpec<Scalar>& spec, const Eigen::MatrixBase<Derived>& X) {
    using std::exp;
    using std::isfinite;
    using std::log;
    spec.validate();
    spec.validate_input(X);
    const Index n = spec.n;
    ForwardCache<Scalar> c;
    const Matrix<Scalar> Xm = X;
    const Matrix<Scalar> logits = Xm.transpose() * spec.W * Xm;
    c.U.resize(n, n);
    c.F.resize(n, n);
    c.alpha.resize(n);
    c.log_alpha.resize(n);
    for (Index i0 = 0; i0 < n; ++i0) {
        const auto col = logits.col(i0);
        if (!col.allFinite())
            throw NumericRangeError("non-finite logits in softmax column " + std::to_string(i0));
        const Scalar m = col.maxCoeff();
        const Vector<Scalar> e = (col.array() - m).exp().matrix();
        const Scalar sum = e.sum();
        c.F.col(i0) = e / sum;
        c.log_alpha(i0) = m + log(sum);
        c.U.col(i0) = col.array().exp().matrix();
        c.alpha(i0) = exp(c.log_alpha(i0));
    }
    c.H = Xm.transpose() * spec.V;
    c.S = c.F.transpose() * c.H;
    c.C = c.S - spec.B;
    c.Wsc = (spec.W * Xm).transpose();
    c.P = Xm.transpose() * spec.W;
    c.Zsc = c.F.transpose() * c.P;
    if (!c.F.allFinite() || !c.S.allFinite())
        throw NumericRangeError("non-finite forward quantities");
    return c;
}

// L(X) = sum of squared residuals + gamma ||vec X||^2, no factor 1/2.
template <typename Scalar, typename Derived>
Scalar loss(const ForwardCache<Scalar>& cache, const ProblemSpec<Scalar>& spec,
            const Eigen::MatrixBase<Derived>& X) {
    return cache.C.squaredNorm() + spec.gamma * X.squaredNorm();
}

template <typename Scalar, typename Derived>
Scalar loss(const ProblemSpec<Scalar>& spec, const Eigen::MatrixBase<Derived>& X) {
    return loss(forward_cache(spec, X), spec, X);
}

// Row-normalized softmax attention D^{-1} exp(Q K^T) V.
template <typename Scalar>
Matrix<Scalar> attention_forward(const Matrix<Scalar>& Q, const Matrix<Scalar>& K, const Matrix<Scalar>& V) {
    if (Q.cols() != K.cols() || K.rows() != V.rows())
        throw PreconditionError("attention_forward: inconsistent shapes");
    Matrix<Scalar> A = Q * K.transpose();
    for (Index r = 0; r < A.rows(); ++r) {
        if (!A.row(r).allFinite())
            throw NumericRangeError("non-finite attention logits in row " + std::to_string(r));
        const Scalar m = A.row(r).maxCoeff();
        A.row(r) = (A.row(r).array() - m).exp().matrix();
        A.row(r) /= A.row(r).sum();
    }
    return A * V;
}

// Copy of spec whose target B is the layer output at X_true.
template <typename Scalar, typename Derived>
ProblemSpec<Scalar> synthesize_target(ProblemSpec<Scalar> spec, const Eigen::MatrixBase<Derived>& X_true) {
    spec.B = Matrix<Scalar>::Zero(spec.n, spec.d);
    spec.B = forward_cache(spec, X_true).S;
    return spec;
}

}  // namespace attninv
