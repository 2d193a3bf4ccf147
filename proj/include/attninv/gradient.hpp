#pragma once

#include "attninv/model.hpp"

#include <array>

namespace attninv {

enum class GradCase { Diagonal, OffDiagonal };

// Named summands of one dc_{i0,j0}/dx_{i1,j1}: C1..C5 (diagonal) or C6..C8.
template <typename Scalar>
struct GradEntryTerms {
    GradCase kind = GradCase::Diagonal;
    std::array<Scalar, 5> terms{};
    int count = 0;
    Scalar total = 0;

    // Term label, "C1".."C8".
    int label(int t) const { return kind == GradCase::Diagonal ? t + 1 : t + 6; }
};

namespace detail {

// <f_{i0} o P_{*,j}, h_{j0}>
template <typename Scalar>
Scalar fph(const ForwardCache<Scalar>& c, Index i0, Index j0, Index j) {
    Scalar acc = 0;
    for (Index i = 0; i < c.n(); ++i) acc += c.F(i, i0) * c.P(i, j) * c.H(i, j0);
    return acc;
}

}  // namespace detail

template <typename Scalar>
GradEntryTerms<Scalar> dc_entry(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0,
                                Index j0, Index i1, Index j1) {
    check_index(i0, spec.n, "i0");
    check_index(i1, spec.n, "i1");
    check_index(j0, spec.d, "j0");
    check_index(j1, spec.d, "j1");
    GradEntryTerms<Scalar> r;
    const Scalar s = c.S(i0, j0);
    const Scalar w1 = c.Wsc(i0, j1);
    const Scalar v = spec.V(j1, j0);
    if (i1 == i0) {
        const Scalar f = c.F(i0, i0);
        r.kind = GradCase::Diagonal;
        r.count = 5;
        r.terms[0] = -s * f * w1;
        r.terms[1] = -s * c.Zsc(i0, j1);
        r.terms[2] = f * c.H(i0, j0) * w1;
        r.terms[3] = detail::fph(c, i0, j0, j1);
        r.terms[4] = f * v;
    } else {
        const Scalar g = c.F(i1, i0);
        r.kind = GradCase::OffDiagonal;
        r.count = 3;
        r.terms[0] = -s * g * w1;
        r.terms[1] = g * c.H(i1, j0) * w1;
        r.terms[2] = g * v;
    }
    for (int t = 0; t < r.count; ++t) r.total += r.terms[t];
    return r;
}

// Gradient of c_{i0,j0} over vec(X).
template <typename Scalar>
Vector<Scalar> grad_c(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0) {
    Vector<Scalar> g(spec.n * spec.d);
    for (Index i1 = 0; i1 < spec.n; ++i1)
        for (Index j1 = 0; j1 < spec.d; ++j1) g(flat_index(i1, j1, spec.d)) = dc_entry(c, spec, i0, j0, i1, j1).total;
    return g;
}

// d f_{i0} / d x_{i1,j1}, a length-n vector summing to zero.
template <typename Scalar>
Vector<Scalar> grad_f_direction(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index i1,
                                Index j1) {
    check_index(i0, spec.n, "i0");
    check_index(i1, spec.n, "i1");
    check_index(j1, spec.d, "j1");
    const auto f = c.F.col(i0);
    const Scalar w1 = c.Wsc(i0, j1);
    // logit derivative: e_{i1} w1, plus P_{*,j1} when i1 == i0
    Vector<Scalar> delta = Vector<Scalar>::Zero(spec.n);
    delta(i1) = w1;
    if (i1 == i0) delta += c.P.col(j1);
    const Scalar mean = f.dot(delta);
    return (f.array() * (delta.array() - mean)).matrix();
}

// Residual Jacobian, row i0*d + j0 holds grad_c(i0, j0).
template <typename Scalar>
Matrix<Scalar> residual_jacobian(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec) {
    const Index m = spec.n * spec.d;
    Matrix<Scalar> J(m, m);
    for (Index i0 = 0; i0 < spec.n; ++i0)
        for (Index j0 = 0; j0 < spec.d; ++j0) J.row(flat_index(i0, j0, spec.d)) = grad_c(c, spec, i0, j0).transpose();
    return J;
}

// 2 * sum c grad_c + 2 gamma vec(X).
template <typename Scalar, typename Derived>
Vector<Scalar> grad_L(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec,
                      const Eigen::MatrixBase<Derived>& X) {
    Vector<Scalar> g = Scalar(2) * spec.gamma * flatten(X);
    for (Index i0 = 0; i0 < spec.n; ++i0)
        for (Index j0 = 0; j0 < spec.d; ++j0) g += Scalar(2) * c.C(i0, j0) * grad_c(c, spec, i0, j0);
    return g;
}

}  // namespace attninv
