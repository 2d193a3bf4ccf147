#pragma once

// Test-only reference evaluators, written without the library's derivative code.

#include "attninv/model.hpp"

#include <cmath>

namespace oracle {

using attninv::Index;
using LD = long double;
using MatLD = attninv::Matrix<LD>;

// Unstabilized column softmax of X^T W X, by explicit loops in long double.
inline MatLD softmax_columns(const attninv::ProblemSpec<double>& p, const attninv::MatrixXd& X) {
    MatLD F(p.n, p.n);
    for (Index i0 = 0; i0 < p.n; ++i0) {
        LD alpha = 0;
        for (Index i = 0; i < p.n; ++i) {
            LD logit = 0;
            for (Index a = 0; a < p.d; ++a)
                for (Index b = 0; b < p.d; ++b) logit += LD(X(a, i)) * LD(p.W(a, b)) * LD(X(b, i0));
            F(i, i0) = std::exp(logit);
            alpha += F(i, i0);
        }
        F.col(i0) /= alpha;
    }
    return F;
}

// Residual c_{i0,j0} = <f_{i0}, h_{j0}> - b_{i0,j0} by explicit loops.
inline LD residual(const attninv::ProblemSpec<double>& p, const attninv::MatrixXd& X, Index i0, Index j0) {
    const MatLD F = softmax_columns(p, X);
    LD s = 0;
    for (Index i = 0; i < p.n; ++i) {
        LD h = 0;
        for (Index j = 0; j < p.d; ++j) h += LD(X(j, i)) * LD(p.V(j, j0));
        s += F(i, i0) * h;
    }
    return s - LD(p.B(i0, j0));
}

inline LD loss(const attninv::ProblemSpec<double>& p, const attninv::MatrixXd& X) {
    LD acc = 0;
    for (Index i0 = 0; i0 < p.n; ++i0)
        for (Index j0 = 0; j0 < p.d; ++j0) {
            const LD c = residual(p, X, i0, j0);
            acc += c * c;
        }
    for (Index k = 0; k < X.size(); ++k) acc += LD(p.gamma) * LD(X.data()[k]) * LD(X.data()[k]);
    return acc;
}

// Second derivative of c_{i0,j0} from the softmax-expectation identity
//   E[h d1 d2] - E[h d1]E[d2] - E[h d2]E[d1] - s E[d1 d2] + 2 s E[d1]E[d2]
//   + E[h a12] - s E[a12] + E[h2 d1] - E[h2]E[d1] + E[h1 d2] - E[h1]E[d2]
// where E is the mean under f_{i0}, d_k the logit derivative, a12 the second
// logit derivative and h_k the derivative of h_{j0}.
inline double d2c_identity(const attninv::ProblemSpec<double>& p, const attninv::MatrixXd& X, Index i0, Index j0,
                           Index i1, Index j1, Index i2, Index j2) {
    const Index n = p.n;
    const MatLD F = softmax_columns(p, X);
    auto f = [&](Index i) { return F(i, i0); };
    auto Pcol = [&](Index i, Index j) {  // (X^T W)_{i,j}
        LD v = 0;
        for (Index a = 0; a < p.d; ++a) v += LD(X(a, i)) * LD(p.W(a, j));
        return v;
    };
    auto wv = [&](Index j) {  // (W X_{*,i0})_j
        LD v = 0;
        for (Index b = 0; b < p.d; ++b) v += LD(p.W(j, b)) * LD(X(b, i0));
        return v;
    };
    auto h = [&](Index i) {
        LD v = 0;
        for (Index j = 0; j < p.d; ++j) v += LD(X(j, i)) * LD(p.V(j, j0));
        return v;
    };
    auto delta = [&](Index ik, Index jk, Index i) {
        LD v = (i == ik) ? wv(jk) : LD(0);
        if (ik == i0) v += Pcol(i, jk);
        return v;
    };
    auto a12 = [&](Index i) {
        LD v = 0;
        if (i2 == i0 && i == i1) v += LD(p.W(j1, j2));
        if (i1 == i0 && i == i2) v += LD(p.W(j2, j1));
        return v;
    };
    auto hk = [&](Index ik, Index jk, Index i) { return i == ik ? LD(p.V(jk, j0)) : LD(0); };
    LD s = 0, E1 = 0, E2 = 0, Eh1 = 0, Eh2 = 0, E12 = 0, Eh12 = 0, Ea = 0, Eha = 0;
    LD Eh2d1 = 0, Eh2_ = 0, Eh1d2 = 0, Eh1_ = 0;
    for (Index i = 0; i < n; ++i) {
        const LD fi = f(i), hi = h(i), d1 = delta(i1, j1, i), d2 = delta(i2, j2, i), a = a12(i);
        s += fi * hi;
        E1 += fi * d1;
        E2 += fi * d2;
        Eh1 += fi * hi * d1;
        Eh2 += fi * hi * d2;
        E12 += fi * d1 * d2;
        Eh12 += fi * hi * d1 * d2;
        Ea += fi * a;
        Eha += fi * hi * a;
        Eh2d1 += fi * hk(i2, j2, i) * d1;
        Eh2_ += fi * hk(i2, j2, i);
        Eh1d2 += fi * hk(i1, j1, i) * d2;
        Eh1_ += fi * hk(i1, j1, i);
    }
    const LD t = Eh12 - Eh1 * E2 - Eh2 * E1 - s * E12 + 2 * s * E1 * E2 + Eha - s * Ea + Eh2d1 - Eh2_ * E1 +
                 Eh1d2 - Eh1_ * E2;
    return static_cast<double>(t);
}

}  // namespace oracle
