#pragma once

#include "attninv/model.hpp"
#include "attninv/rng.hpp"

#include <cstdint>
#include <string>

namespace attninv {

struct GammaMode {
    bool automatic = false;
    double value = 0;
};

// "auto" or a nonnegative float.
GammaMode parse_gamma(const std::string& text);

struct Instance {
    ProblemSpec<double> spec;
    MatrixXd X_true;
};

// Entries uniform on [-0.5, 0.5) in column-major order, then scaled to
// spectral norm `norm` (left as drawn if all zero).
MatrixXd random_matrix(SplitMix64& rng, Index rows, Index cols, double norm);

// Entries uniform on [-0.5, 0.5), scaled to Frobenius norm `radius`.
MatrixXd random_perturbation(SplitMix64& rng, Index rows, Index cols, double radius);

// Draws W, V (d x d) and X_true (d x n) in that order from SplitMix64(seed),
// each at spectral norm r_target, and sets B to the layer output at X_true.
// Automatic gamma is choose_gamma(n, d, R_eff(spec, X_true)).
Instance generate_instance(std::uint64_t seed, Index n, Index d, double r_target = 1.2, GammaMode gamma = {});

}  // namespace attninv
