#include <doctest.h>

#include "helpers.hpp"

using namespace attninv;

namespace {

ProblemSpec<double> line_problem() {
    ProblemSpec<double> p;
    p.n = p.d = 1;
    p.W = MatrixXd::Constant(1, 1, 0.6);
    p.V = MatrixXd::Constant(1, 1, 1.0);
    p.B = MatrixXd::Constant(1, 1, 0.5);
    return p;
}

MatrixXd perturbed(const helpers::Case& k, std::uint64_t seed, double radius) {
    SplitMix64 rng(seed);
    return k.X_true + random_perturbation(rng, k.spec.d, k.spec.n, radius);
}

}  // namespace

TEST_CASE("newton_solve: one-dimensional linear residual") {
    const auto p = line_problem();
    const auto r = newton_solve(p, MatrixXd::Constant(1, 1, 0.4), NewtonConfig{});
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.iterations() <= 3);
    CHECK(r.X(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.records.back().loss < 1e-24);
}

TEST_CASE("newton_solve: recovers a synthesized instance") {
    const auto k = helpers::make_case(0, 3, 2);
    NewtonConfig cfg;
    cfg.eps = 1e-12;
    const auto r = newton_solve(k.spec, perturbed(k, 1, 0.01), cfg);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.records.back().loss <= 1e-16);
    CHECK((r.X - k.X_true).norm() <= 1e-6);
    for (std::size_t i = 1; i < r.records.size(); ++i) {
        CHECK(r.records[i].iter == r.records[i - 1].iter + 1);
        CHECK(r.records[i].loss <= r.records[i - 1].loss);
    }
}

TEST_CASE("newton_solve: automatic gamma converges in logarithmically many steps") {
    auto k = helpers::make_case(0, 3, 2);
    k.spec.gamma = choose_gamma(3, 2, r_eff(k.spec, k.X_true));
    const MatrixXd X0 = perturbed(k, 1, 0.01);
    NewtonConfig tight;
    tight.eps = 1e-14;
    const auto star = newton_solve(k.spec, X0, tight);
    REQUIRE(star.status == SolveStatus::Converged);
    NewtonConfig cfg;
    cfg.eps = 1e-8;
    const auto r = newton_solve(k.spec, X0, cfg);
    CHECK(r.status == SolveStatus::Converged);
    const double dist0 = (X0 - star.X).norm();
    CHECK(r.iterations() <= 2 * std::log2(dist0 / cfg.eps) + 10);
}

TEST_CASE("newton_solve: quadratic tail with gamma > 0") {
    auto k = helpers::make_case(2, 3, 2, 0.5);
    NewtonConfig cfg;
    cfg.eps = 1e-15;
    const auto r = newton_solve(k.spec, perturbed(k, 3, 0.05), cfg);
    REQUIRE(r.status == SolveStatus::Converged);
    REQUIRE(r.records.size() >= 3);
    const std::size_t m = r.records.size();
    const double g0 = r.records[m - 3].grad_norm, g1 = r.records[m - 2].grad_norm;
    CHECK(std::isfinite(g1 / (g0 * g0)));
    CHECK(g1 < g0);
}

TEST_CASE("newton_solve: damping handles an indefinite start") {
    const auto k = helpers::make_case(5, 3, 2);
    SplitMix64 rng(99);
    const MatrixXd far = random_matrix(rng, 2, 3, 1.2);
    NewtonConfig cfg;
    cfg.max_iter = 200;
    const auto r = newton_solve(k.spec, far, cfg);
    CHECK(r.status != SolveStatus::NumericalFailure);
    for (std::size_t i = 1; i < r.records.size(); ++i) CHECK(r.records[i].loss <= r.records[i - 1].loss);
}

TEST_CASE("gd_solve: contraction and divergence on the line") {
    const auto p = line_problem();
    GdConfig cfg;
    cfg.eta = 0.4;
    cfg.max_iter = 200;
    const auto r = gd_solve(p, MatrixXd::Constant(1, 1, 0.4), cfg);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.X(0, 0) == doctest::Approx(0.5).epsilon(1e-9));
    cfg.eta = 2.0;
    CHECK(gd_solve(p, MatrixXd::Constant(1, 1, 0.4), cfg).status == SolveStatus::NumericalFailure);
    cfg.eta = 1e-9;
    cfg.max_iter = 5;
    CHECK(gd_solve(p, MatrixXd::Constant(1, 1, 0.4), cfg).status == SolveStatus::MaxIter);
}

TEST_CASE("gd_solve: slower than Newton on a synthesized instance") {
    const auto k = helpers::make_case(0, 3, 2);
    const MatrixXd X0 = perturbed(k, 1, 0.01);
    const MatrixXd H = hessian_L(forward_cache(k.spec, X0), k.spec, X0);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    GdConfig cfg;
    cfg.eta = 1.0 / es.eigenvalues().maxCoeff();
    cfg.max_iter = 5000;
    cfg.loss_target = 1e-8;
    const auto g = gd_solve(k.spec, X0, cfg);
    CHECK(g.status == SolveStatus::Converged);
    CHECK(g.records.back().loss <= 1e-8);
    const auto n = newton_solve(k.spec, X0, NewtonConfig{});
    CHECK(g.iterations() > n.iterations());
}

TEST_CASE("solvers: identical inputs give identical records") {
    const auto k = helpers::make_case(6, 3, 2);
    NewtonConfig cfg;
    cfg.record_time = false;
    const MatrixXd X0 = perturbed(k, 2, 0.01);
    const auto a = newton_solve(k.spec, X0, cfg), b = newton_solve(k.spec, X0, cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].loss == b.records[i].loss);
        CHECK(a.records[i].grad_norm == b.records[i].grad_norm);
        CHECK(a.records[i].wallclock_ms == 0.0);
    }
    CHECK((a.X.array() == b.X.array()).all());
}

TEST_CASE("solvers: reject bad configuration") {
    const auto p = line_problem();
    NewtonConfig n;
    n.eps = 0;
    CHECK_THROWS_AS(newton_solve(p, MatrixXd::Zero(1, 1), n), PreconditionError);
    GdConfig g;
    g.eta = -1;
    CHECK_THROWS_AS(gd_solve(p, MatrixXd::Zero(1, 1), g), PreconditionError);
    CHECK_THROWS_AS(newton_solve(p, MatrixXd::Zero(2, 1), NewtonConfig{}), PreconditionError);
}
