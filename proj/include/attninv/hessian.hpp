#pragma once

#include "attninv/gradient.hpp"

#include <array>

namespace attninv {

// Index case of d^2 c_{i0,j0} / dx_{i1,j1} dx_{i2,j2}.
enum class HessCaseId { Case1, Case2, Case3, Case4, Case5 };

inline HessCaseId classify(Index i0, Index i1, Index i2) {
    if (i1 == i0) return i2 == i0 ? HessCaseId::Case1 : HessCaseId::Case2;
    if (i2 == i0) return HessCaseId::Case3;
    return i1 == i2 ? HessCaseId::Case4 : HessCaseId::Case5;
}

inline const char* case_name(HessCaseId k) {
    switch (k) {
        case HessCaseId::Case1: return "Case1";
        case HessCaseId::Case2: return "Case2";
        case HessCaseId::Case3: return "Case3";
        case HessCaseId::Case4: return "Case4";
        case HessCaseId::Case5: return "Case5";
    }
    return "?";
}

// Per-entry term tables. Symbols: s = s_{i0,j0}, F = f_{i0,i0}, H = h_{j0,i0},
// w_k = w_{i0,jk}, z_k = z_{i0,jk}, q_k = (W^T X_{*,i0})_{jk}, y_k = <f_{i0} o P_{*,jk}, h_{j0}>,
// v_k = V(jk, j0), W_kl = W(jk, jl).

// Case1, i0 = i1 = i2: D1..D21.
template <typename Scalar>
std::array<Scalar, 21> terms_case1(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0,
                                   Index j0, Index j1, Index j2) {
    const Scalar s = c.S(i0, j0), F = c.F(i0, i0), H = c.H(i0, j0);
    const Scalar w1 = c.Wsc(i0, j1), w2 = c.Wsc(i0, j2);
    const Scalar z1 = c.Zsc(i0, j1), z2 = c.Zsc(i0, j2);
    const Scalar q1 = c.P(i0, j1), q2 = c.P(i0, j2);
    const Scalar y1 = detail::fph(c, i0, j0, j1), y2 = detail::fph(c, i0, j0, j2);
    const Scalar v1 = spec.V(j1, j0), v2 = spec.V(j2, j0);
    const Scalar W12 = spec.W(j1, j2), W21 = spec.W(j2, j1);
    Scalar fpp = 0, fpph = 0;
    for (Index i = 0; i < spec.n; ++i) {
        const Scalar t = c.F(i, i0) * c.P(i, j1) * c.P(i, j2);
        fpp += t;
        fpph += t * c.H(i, j0);
    }
    return {{
        2 * s * F * F * w1 * w2,            // D1
        2 * F * s * (z2 * w1 + z1 * w2),    // D2
        -F * F * H * w1 * w2,               // D3
        -F * (y2 * w1 + y1 * w2),           // D4
        -F * F * (v2 * w1 + v1 * w2),       // D5
        -s * F * w1 * w2,                   // D6
        -s * F * (q2 * w1 + q1 * w2),       // D7
        -s * F * (W12 + W21),               // D8
        s * z1 * z2,                        // D9
        -F * H * (w2 * z1 + w1 * z2),       // D10
        -(y2 * z1 + y1 * z2),               // D11
        -F * (v2 * z1 + v1 * z2),           // D12
        s * z1 * z2,                        // D13: no F factor, pairs with D9
        -s * fpp,                           // D14
        -F * F * H * w1 * w2,               // D15
        F * H * w1 * w2,                    // D16
        F * H * (q2 * w1 + q1 * w2),        // D17
        F * (v2 * w1 + v1 * w2),            // D18
        F * H * (W12 + W21),                // D19: h_{j0,i0}
        fpph,                               // D20
        F * (q2 * v1 + q1 * v2),            // D21
    }};
}

// Case2, i0 = i1 != i2: E1..E15. G = f_{i0,i2}, H2 = h_{j0,i2}, r1 = <W_{*,j1}, X_{*,i2}>.
template <typename Scalar>
std::array<Scalar, 15> terms_case2(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0,
                                   Index j0, Index i2, Index j1, Index j2) {
    const Scalar s = c.S(i0, j0), F = c.F(i0, i0), H = c.H(i0, j0);
    const Scalar G = c.F(i2, i0), H2 = c.H(i2, j0);
    const Scalar w1 = c.Wsc(i0, j1), w2 = c.Wsc(i0, j2);
    const Scalar z1 = c.Zsc(i0, j1);
    const Scalar y1 = detail::fph(c, i0, j0, j1);
    const Scalar r1 = c.P(i2, j1);
    const Scalar v1 = spec.V(j1, j0), v2 = spec.V(j2, j0);
    const Scalar W21 = spec.W(j2, j1);
    return {{
        2 * s * G * F * w1 * w2,  // E1
        -G * H2 * F * w1 * w2,    // E2: coefficient 1
        -G * v2 * F * w1,         // E3
        s * G * w2 * z1,          // E4
        -G * H2 * w2 * z1,        // E5
        -G * v2 * z1,             // E6
        s * z1 * G * w2,          // E7: f_{i0,i2}, not f_{i0,i0}
        -s * G * r1 * w2,         // E8: f_{i0,i2} and X_{*,i2}
        -s * G * W21,             // E9: f_{i0,i2}
        -F * G * w2 * H * w1,     // E10
        -y1 * G * w2,             // E11
        G * H2 * r1 * w2,         // E12
        G * H2 * W21,             // E13
        G * r1 * v2,              // E14
        -F * G * w2 * v1,         // E15
    }};
}

// Case4, i0 != i1 = i2: F1..F6. G = f_{i0,i1}, H1 = h_{j0,i1}.
template <typename Scalar>
std::array<Scalar, 6> terms_case4(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0,
                                  Index j0, Index i1, Index j1, Index j2) {
    const Scalar s = c.S(i0, j0), G = c.F(i1, i0), H1 = c.H(i1, j0);
    const Scalar w1 = c.Wsc(i0, j1), w2 = c.Wsc(i0, j2);
    const Scalar v1 = spec.V(j1, j0), v2 = spec.V(j2, j0);
    return {{
        2 * s * G * G * w1 * w2,         // F1
        -2 * G * G * H1 * w1 * w2,       // F2: coefficient 2
        -G * G * (v2 * w1 + v1 * w2),    // F3
        -s * G * w1 * w2,                // F4
        G * H1 * w1 * w2,                // F5
        G * (v2 * w1 + v1 * w2),         // F6
    }};
}

// Case5, i0, i1, i2 distinct: G1..G3. Gk = f_{i0,ik}, Hk = h_{j0,ik}.
template <typename Scalar>
std::array<Scalar, 3> terms_case5(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0,
                                  Index j0, Index i1, Index i2, Index j1, Index j2) {
    const Scalar s = c.S(i0, j0), G1 = c.F(i1, i0), G2 = c.F(i2, i0);
    const Scalar H1 = c.H(i1, j0), H2 = c.H(i2, j0);
    const Scalar w1 = c.Wsc(i0, j1), w2 = c.Wsc(i0, j2);
    const Scalar v1 = spec.V(j1, j0), v2 = spec.V(j2, j0);
    return {{
        2 * s * G1 * G2 * w1 * w2,           // G1
        -G1 * G2 * w1 * w2 * (H1 + H2),      // G2
        -G1 * G2 * (v2 * w1 + v1 * w2),      // G3
    }};
}

namespace detail {

template <typename Scalar, std::size_t N>
Scalar sum_terms(const std::array<Scalar, N>& t) {
    Scalar acc = 0;
    for (const Scalar& v : t) acc += v;
    return acc;
}

}  // namespace detail

// d^2 c_{i0,j0} / dx_{i1,j1} dx_{i2,j2} from the term tables.
template <typename Scalar>
Scalar d2c_entry(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0, Index i1,
                 Index j1, Index i2, Index j2) {
    check_index(i0, spec.n, "i0");
    check_index(i1, spec.n, "i1");
    check_index(i2, spec.n, "i2");
    check_index(j0, spec.d, "j0");
    check_index(j1, spec.d, "j1");
    check_index(j2, spec.d, "j2");
    switch (classify(i0, i1, i2)) {
        case HessCaseId::Case1: return detail::sum_terms(terms_case1(c, spec, i0, j0, j1, j2));
        case HessCaseId::Case2: return detail::sum_terms(terms_case2(c, spec, i0, j0, i2, j1, j2));
        case HessCaseId::Case3: return detail::sum_terms(terms_case2(c, spec, i0, j0, i1, j2, j1));
        case HessCaseId::Case4: return detail::sum_terms(terms_case4(c, spec, i0, j0, i1, j1, j2));
        case HessCaseId::Case5: return detail::sum_terms(terms_case5(c, spec, i0, j0, i1, i2, j1, j2));
    }
    return 0;
}

namespace detail {

// Vectors shared by the block forms of one residual (i0, j0).
template <typename Scalar>
struct BlockContext {
    Scalar s, F, H;
    Vector<Scalar> w;   // W X_{*,i0}
    Vector<Scalar> z;   // W^T X f_{i0}
    Vector<Scalar> q;   // W^T X_{*,i0}
    Vector<Scalar> v0;  // V_{*,j0}

    BlockContext(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0)
        : s(c.S(i0, j0)),
          F(c.F(i0, i0)),
          H(c.H(i0, j0)),
          w(c.Wsc.row(i0).transpose()),
          z(c.Zsc.row(i0).transpose()),
          q(c.P.row(i0).transpose()),
          v0(spec.V.col(j0)) {}
};

template <typename Scalar>
void check_residual(const ProblemSpec<Scalar>& spec, Index i0, Index j0) {
    check_index(i0, spec.n, "i0");
    check_index(j0, spec.d, "j0");
}

}  // namespace detail

// H1 = sum B1..B21. M = W^T X diag(f_{i0}) X^T W, Mh uses diag(f_{i0} o h_{j0}).
template <typename Scalar>
Matrix<Scalar> block_case1(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0) {
    detail::check_residual(spec, i0, j0);
    const detail::BlockContext<Scalar> k(c, spec, i0, j0);
    const auto& w = k.w;
    const auto& z = k.z;
    const auto& q = k.q;
    const auto& v0 = k.v0;
    const Scalar s = k.s, F = k.F, H = k.H;
    const Vector<Scalar> fh = c.F.col(i0).cwiseProduct(c.H.col(j0));
    const Vector<Scalar> y = c.P.transpose() * fh;
    const Matrix<Scalar> M = c.P.transpose() * c.F.col(i0).asDiagonal() * c.P;
    const Matrix<Scalar> Mh = c.P.transpose() * fh.asDiagonal() * c.P;
    const Matrix<Scalar> ww = w * w.transpose();
    const Matrix<Scalar> WWt = spec.W + spec.W.transpose();

    Matrix<Scalar> B = 2 * s * F * F * ww;                               // B1
    B += 2 * F * s * (w * z.transpose() + z * w.transpose());           // B2
    B -= F * F * H * ww;                                                  // B3
    B -= F * (y * w.transpose() + w * y.transpose());                   // B4
    B -= F * F * (w * v0.transpose() + v0 * w.transpose());             // B5
    B -= s * F * ww;                                                      // B6
    B -= s * F * (w * q.transpose() + q * w.transpose());               // B7
    B -= s * F * WWt;                                                     // B8: -(W + W^T)
    B += s * z * z.transpose();                                           // B9
    B -= F * H * (z * w.transpose() + w * z.transpose());               // B10
    B -= z * y.transpose() + y * z.transpose();                           // B11: both terms negative
    B -= F * (z * v0.transpose() + v0 * z.transpose());                 // B12: negative
    B += s * z * z.transpose();                                           // B13: no F factor
    B -= s * M;                                                           // B14
    B -= F * F * H * ww;                                                  // B15
    B += F * H * ww;                                                      // B16
    B += F * H * (w * q.transpose() + q * w.transpose());               // B17
    B += F * (w * v0.transpose() + v0 * w.transpose());                 // B18: V column j0
    B += F * H * WWt;                                                     // B19
    B += Mh;                                                              // B20: trailing W included
    B += F * (q * v0.transpose() + v0 * q.transpose());                 // B21
    return B;
}

// H2 at (i0, i2) = sum J1..J15; row index j1 belongs to x_{i0}, column j2 to x_{i2}.
template <typename Scalar>
Matrix<Scalar> block_case2(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0,
                           Index i2) {
    detail::check_residual(spec, i0, j0);
    check_index(i2, spec.n, "i2");
    if (i2 == i0) throw PreconditionError("block_case2 requires i2 != i0");
    const detail::BlockContext<Scalar> k(c, spec, i0, j0);
    const auto& w = k.w;
    const auto& z = k.z;
    const auto& v0 = k.v0;
    const Scalar s = k.s, F = k.F, H = k.H;
    const Scalar G = c.F(i2, i0), H2 = c.H(i2, j0);
    const Vector<Scalar> y = c.P.transpose() * c.F.col(i0).cwiseProduct(c.H.col(j0));
    const Vector<Scalar> r = c.P.row(i2).transpose();  // W^T X_{*,i2}
    const Matrix<Scalar> ww = w * w.transpose();
    const Matrix<Scalar> zw = z * w.transpose();
    const Matrix<Scalar> rw = r * w.transpose();
    const Matrix<Scalar> Wt = spec.W.transpose();

    Matrix<Scalar> J = 2 * s * F * G * ww;      // J1
    J -= F * G * H2 * ww;                       // J2: coefficient 1
    J -= F * G * w * v0.transpose();            // J3
    J += s * G * zw;                            // J4
    J -= G * H2 * zw;                           // J5
    J -= G * z * v0.transpose();                // J6
    J += s * G * zw;                            // J7: G, not F
    J -= s * G * rw;                            // J8: r = W^T X_{*,i2}
    J -= s * G * Wt;                            // J9: G, not F
    J -= F * G * H * ww;                        // J10
    J -= G * y * w.transpose();                 // J11
    J += G * H2 * rw;                           // J12
    J += G * H2 * Wt;                           // J13
    J += G * r * v0.transpose();                // J14
    J -= F * G * v0 * w.transpose();            // J15
    return J;
}

// H3 at (i1, i0): transpose of the Case2 block at (i0, i1).
template <typename Scalar>
Matrix<Scalar> block_case3(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0,
                           Index i1) {
    return block_case2(c, spec, i0, j0, i1).transpose();
}

// H4 at (i1, i1), i1 != i0: sum K1..K6. G = f_{i0,i1}, H1 = h_{j0,i1}.
template <typename Scalar>
Matrix<Scalar> block_case4(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0,
                           Index i1) {
    detail::check_residual(spec, i0, j0);
    check_index(i1, spec.n, "i1");
    if (i1 == i0) throw PreconditionError("block_case4 requires i1 != i0");
    const detail::BlockContext<Scalar> k(c, spec, i0, j0);
    const Scalar s = k.s, G = c.F(i1, i0), H1 = c.H(i1, j0);
    const Matrix<Scalar> ww = k.w * k.w.transpose();
    const Matrix<Scalar> wv = k.w * k.v0.transpose() + k.v0 * k.w.transpose();

    Matrix<Scalar> K = 2 * s * G * G * ww;  // K1
    K -= 2 * G * G * H1 * ww;               // K2: coefficient 2
    K -= G * G * wv;                        // K3
    K -= s * G * ww;                        // K4
    K += G * H1 * ww;                       // K5
    K += G * wv;                            // K6
    return K;
}

// H5 at (i1, i2), all three indices distinct: sum N1..N3.
template <typename Scalar>
Matrix<Scalar> block_case5(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0,
                           Index i1, Index i2) {
    detail::check_residual(spec, i0, j0);
    check_index(i1, spec.n, "i1");
    check_index(i2, spec.n, "i2");
    if (i1 == i0 || i2 == i0 || i1 == i2) throw PreconditionError("block_case5 requires distinct i0, i1, i2");
    const detail::BlockContext<Scalar> k(c, spec, i0, j0);
    const Scalar s = k.s, G1 = c.F(i1, i0), G2 = c.F(i2, i0);
    const Scalar H1 = c.H(i1, j0), H2 = c.H(i2, j0);
    const Matrix<Scalar> ww = k.w * k.w.transpose();

    Matrix<Scalar> N = 2 * s * G1 * G2 * ww;                                  // N1
    N -= G1 * G2 * (H1 + H2) * ww;                                            // N2
    N -= G1 * G2 * (k.w * k.v0.transpose() + k.v0 * k.w.transpose());        // N3
    return N;
}

// Block (i1, i2) of the Hessian of c_{i0,j0}.
template <typename Scalar>
Matrix<Scalar> hessian_block(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0, Index j0,
                             Index i1, Index i2) {
    switch (classify(i0, i1, i2)) {
        case HessCaseId::Case1: return block_case1(c, spec, i0, j0);
        case HessCaseId::Case2: return block_case2(c, spec, i0, j0, i2);
        case HessCaseId::Case3: return block_case3(c, spec, i0, j0, i1);
        case HessCaseId::Case4: return block_case4(c, spec, i0, j0, i1);
        case HessCaseId::Case5: return block_case5(c, spec, i0, j0, i1, i2);
    }
    return {};
}

// Hessian of one residual c_{i0,j0} as an n x n grid of d x d blocks.
template <typename Scalar>
struct HessianBlocks {
    Index i0 = 0, j0 = 0, n = 0, d = 0;
    Matrix<Scalar> full;  // nd x nd, block (i1, i2) at rows i1*d, cols i2*d

    auto block(Index i1, Index i2) const { return full.block(i1 * d, i2 * d, d, d); }
    HessCaseId case_of(Index i1, Index i2) const { return classify(i0, i1, i2); }
};

template <typename Scalar>
HessianBlocks<Scalar> assemble_hessian_c(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec, Index i0,
                                         Index j0) {
    detail::check_residual(spec, i0, j0);
    const Index n = spec.n, d = spec.d;
    HessianBlocks<Scalar> hb;
    hb.i0 = i0;
    hb.j0 = j0;
    hb.n = n;
    hb.d = d;
    hb.full.resize(n * d, n * d);
    // Case1 row and column blocks share one computation per i.
    hb.full.block(i0 * d, i0 * d, d, d) = block_case1(c, spec, i0, j0);
    for (Index i = 0; i < n; ++i) {
        if (i == i0) continue;
        const Matrix<Scalar> J = block_case2(c, spec, i0, j0, i);
        hb.full.block(i0 * d, i * d, d, d) = J;
        hb.full.block(i * d, i0 * d, d, d) = J.transpose();
    }
    for (Index i1 = 0; i1 < n; ++i1) {
        if (i1 == i0) continue;
        for (Index i2 = 0; i2 < n; ++i2) {
            if (i2 == i0) continue;
            hb.full.block(i1 * d, i2 * d, d, d) =
                i1 == i2 ? block_case4(c, spec, i0, j0, i1) : block_case5(c, spec, i0, j0, i1, i2);
        }
    }
    return hb;
}

// 2 sum (grad_c grad_c^T + c Hess c) + 2 gamma I.
template <typename Scalar, typename Derived>
Matrix<Scalar> hessian_L(const ForwardCache<Scalar>& c, const ProblemSpec<Scalar>& spec,
                         const Eigen::MatrixBase<Derived>& X) {
    spec.validate_input(X);
    require_dense_cap(spec.n, spec.d);
    const Index m = spec.n * spec.d;
    const Matrix<Scalar> J = residual_jacobian(c, spec);
    Matrix<Scalar> Hs = Matrix<Scalar>::Zero(m, m);
    for (Index i0 = 0; i0 < spec.n; ++i0)
        for (Index j0 = 0; j0 < spec.d; ++j0) Hs += c.C(i0, j0) * assemble_hessian_c(c, spec, i0, j0).full;
    Matrix<Scalar> out = Scalar(2) * (J.transpose() * J + Hs);
    out.diagonal().array() += Scalar(2) * spec.gamma;
    return out;
}

}  // namespace attninv
