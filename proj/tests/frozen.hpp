#pragma once

// Literal n = 3, d = 2 instance and reference values from
// tests/oracles/frozen_values.py (mpmath, 50 digits). Do not edit by hand.

#include "attninv/model.hpp"

namespace frozen {

inline attninv::ProblemSpec<double> spec() {
    attninv::ProblemSpec<double> p;
    p.n = 3;
    p.d = 2;
    p.W.resize(2, 2);
    p.W << 0.3, -0.7, 0.5, 0.2;
    p.V.resize(2, 2);
    p.V << 0.9, 0.1, -0.4, 0.6;
    p.B.resize(3, 2);
    p.B << 0.1, -0.2, 0.3, 0.05, -0.15, 0.25;
    p.gamma = 0.3;
    return p;
}

inline attninv::MatrixXd X() {
    attninv::MatrixXd x(2, 3);
    x << 0.2, -0.5, 0.8, 0.7, 0.3, -0.6;
    return x;
}

inline constexpr double kLoss = 0.96509052580883432268;
inline constexpr double kGrad[6] = {0.032700877504155211498, 0.62128911170258239952, -0.61977865952127902365, 0.56138427675120432865, 0.75659842752111444777, -0.51853769856892208997};
inline constexpr double kHess[6][6] = {
    {1.4229130085728495942, -0.37447269833132003819, 0.47067070629145310825, -0.32082838481362698457, 0.2070533977091016748, -0.089024531661338442358},
    {-0.37447269833132003819, 1.2423879302330097358, -0.3798696925350117709, 0.74787333401411622806, -0.20596252984452377294, 0.3681351232687477188},
    {0.47067070629145310825, -0.3798696925350117709, 1.8512485006995851257, -0.7552220954187369205, 0.13552518405044102422, -0.078161186500216038394},
    {-0.32082838481362698457, 0.74787333401411622806, -0.7552220954187369205, 1.5588547592724195009, -0.048462459242010060551, 0.33474064886532863216},
    {0.2070533977091016748, -0.20596252984452377294, 0.13552518405044102422, -0.048462459242010060551, 1.4988364472438218138, -0.57274067198520451405},
    {-0.089024531661338442358, 0.3681351232687477188, -0.078161186500216038394, 0.33474064886532863216, -0.57274067198520451405, 1.4361478503405764746},
};

// d2 c_{1,0} / dx_{i1,j1} dx_{i2,j2}, probes (i1, j1, i2, j2)
struct D2Probe {
    int i1, j1, i2, j2;
    double value;
};
inline constexpr D2Probe kD2c[5] = {
    {1, 0, 1, 1, 0.24883603701849107835},
    {1, 0, 2, 1, 0.16724670733723574333},
    {0, 1, 1, 0, -0.045375010376106008884},
    {2, 0, 2, 1, 0.0019334619934535327558},
    {0, 1, 2, 0, -0.0024578599769824724966},
};

}  // namespace frozen
