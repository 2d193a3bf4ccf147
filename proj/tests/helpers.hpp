#pragma once

#include "attninv/attninv.hpp"

namespace helpers {

using namespace attninv;

// Seeded instance plus an evaluation point away from X_true.
struct Case {
    ProblemSpec<double> spec;
    MatrixXd X_true;
    MatrixXd X;
};

inline Case make_case(std::uint64_t seed, Index n, Index d, double gamma = 0.0, double r = 1.2) {
    Instance inst = generate_instance(seed, n, d, r, GammaMode{false, gamma});
    SplitMix64 rng(seed ^ 0x5eedULL);
    Case c{inst.spec, inst.X_true, random_matrix(rng, d, n, r)};
    return c;
}

inline double max_abs(const MatrixXd& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace helpers
