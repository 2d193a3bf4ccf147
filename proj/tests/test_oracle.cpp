#include <doctest.h>

#include "helpers.hpp"

using namespace attninv;
using helpers::max_abs;

TEST_CASE("fd_grad: cubic truncation error and constants") {
    FdConfig cfg;
    cfg.step = 1e-3;
    cfg.scale_step = false;
    const VectorXd x = VectorXd::Constant(1, 1.0);
    const VectorXd g = fd_grad<double>([](const VectorXd& v) { return v(0) * v(0) * v(0); }, x, cfg);
    CHECK(g(0) == doctest::Approx(3.000001).epsilon(1e-12));
    const VectorXd z = fd_grad<double>([](const VectorXd&) { return 4.0; }, VectorXd::Ones(3));
    CHECK(max_abs(z) == 0.0);
}

TEST_CASE("fd_grad: quadratic form") {
    MatrixXd A(3, 3);
    A << 2, 0.5, -1, 0.5, 3, 0.2, -1, 0.2, 1;
    VectorXd x(3);
    x << 0.3, -0.7, 1.1;
    const VectorXd g = fd_grad<double>([&](const VectorXd& v) { return v.dot(A * v); }, x);
    CHECK(max_abs(g - 2 * A * x) < 1e-9);
}

TEST_CASE("fd_jacobian: identity and linear maps") {
    VectorXd x(3);
    x << 1, -2, 0.5;
    const MatrixXd I = fd_jacobian<double>([](const VectorXd& v) { return v; }, x);
    CHECK(max_abs(I - MatrixXd::Identity(3, 3)) < 1e-10);
    MatrixXd A(2, 3);
    A << 1, 2, 3, -4, 5, 0.25;
    const MatrixXd J = fd_jacobian<double>([&](const VectorXd& v) { return VectorXd(A * v); }, x);
    CHECK(max_abs(J - A) < 1e-9);
}

TEST_CASE("fd_hessian: bilinear and quadratic") {
    VectorXd x(2);
    x << 0.4, -1.3;
    const MatrixXd H = fd_hessian<double>([](const VectorXd& v) { return v(0) * v(1); }, x);
    MatrixXd E(2, 2);
    E << 0, 1, 1, 0;
    CHECK(max_abs(H - E) < 1e-8);
    MatrixXd A(3, 3);
    A << 2, 0.5, -1, 0.5, 3, 0.2, -1, 0.2, 1;
    const MatrixXd Q = fd_hessian<double>([&](const VectorXd& v) { return v.dot(A * v); }, VectorXd::Ones(3));
    CHECK(max_abs(Q - 2 * A) < 1e-6);
    CHECK((Q.array() == Q.transpose().array()).all());
}

TEST_CASE("fd: non-finite probes throw") {
    CHECK_THROWS_AS(fd_grad<double>([](const VectorXd&) { return NAN; }, VectorXd::Ones(1)), NumericRangeError);
    CHECK_THROWS_AS(fd_hessian<double>([](const VectorXd& v) { return v(0) > 1 ? INFINITY : 0.0; }, VectorXd::Ones(1)),
                    NumericRangeError);
}

TEST_CASE("check: pass, fail and worst index") {
    MatrixXd a = MatrixXd::Ones(3, 2);
    CHECK(check("same", a, a, 1e-12, 0).pass);
    MatrixXd b = a;
    b(2, 1) += 1e-2;
    const CheckReport r = check("off", a, b, 1e-4, 1e-4);
    CHECK_FALSE(r.pass);
    CHECK(r.worst_row == 2);
    CHECK(r.worst_col == 1);
    CHECK(r.max_abs_err == doctest::Approx(1e-2));
    CHECK_THROWS_AS(check("shape", a, MatrixXd::Ones(2, 3), 1, 1), PreconditionError);
}

TEST_CASE("check: mixed tolerance keeps near-zero entries from failing") {
    VectorXd a(2), o(2);
    a << 1e-9, 1000.0;
    o << 0.0, 1000.0005;
    CHECK(check("mixed", a, o, 1e-6, 1e-6).pass);
}
