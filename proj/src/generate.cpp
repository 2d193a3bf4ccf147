#include "attninv/generate.hpp"

#include "attninv/analysis.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>

namespace attninv {

GammaMode parse_gamma(const std::string& text) {
    GammaMode g;
    if (text == "auto") {
        g.automatic = true;
        return g;
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno != 0 || !std::isfinite(v) || v < 0)
        throw PreconditionError("gamma must be 'auto' or a nonnegative number, got '" + text + "'");
    g.value = v;
    return g;
}

namespace {

MatrixXd uniform_matrix(SplitMix64& rng, Index rows, Index cols) {
    MatrixXd M(rows, cols);
    for (Index k = 0; k < cols; ++k)
        for (Index i = 0; i < rows; ++i) M(i, k) = rng.uniform(-0.5, 0.5);
    return M;
}

}  // namespace

MatrixXd random_matrix(SplitMix64& rng, Index rows, Index cols, double norm) {
    MatrixXd M = uniform_matrix(rng, rows, cols);
    const double s = spectral_norm(M);
    if (s > 0) M *= norm / s;
    return M;
}

MatrixXd random_perturbation(SplitMix64& rng, Index rows, Index cols, double radius) {
    MatrixXd M = uniform_matrix(rng, rows, cols);
    const double s = M.norm();
    if (s > 0) M *= radius / s;
    return M;
}

Instance generate_instance(std::uint64_t seed, Index n, Index d, double r_target, GammaMode gamma) {
    if (n < 1 || d < 1) throw PreconditionError("n and d must be positive");
    if (!(r_target > 0) || !std::isfinite(r_target)) throw PreconditionError("r_target must be positive");
    SplitMix64 rng(seed);
    Instance inst;
    ProblemSpec<double>& p = inst.spec;
    p.n = n;
    p.d = d;
    p.W = random_matrix(rng, d, d, r_target);
    p.V = random_matrix(rng, d, d, r_target);
    inst.X_true = random_matrix(rng, d, n, r_target);
    p.B = MatrixXd::Zero(n, d);
    p = synthesize_target(p, inst.X_true);
    p.gamma = gamma.automatic ? choose_gamma(n, d, r_eff(p, inst.X_true)) : gamma.value;
    return inst;
}

}  // namespace attninv
