#pragma once

#include <string>

#include "bandspec/errors.hpp"

namespace bandspec {
namespace oracles {

// Bottom of the essential spectrum, pi^2 / (2 d^2).
double strip_threshold(double d);

// Dirichlet ground state of the band rectangle of diagonal width d and
// length w: pi^2/(2 d^2) + pi^2/(2 w^2).
double rect_ground_state(double d, double w);

// Smallest eigenvalue of -u'' on [0,d] with Robin ends
// u'(0) + gamma u(0) = 0, -u'(d) + gamma u(d) = 0, for gamma <= 0.
// Root of (k^2 - gamma^2) sin(kd) + 2 gamma k cos(kd) = 0 on (0, pi/d);
// gamma = 0 returns 0 (Neumann).
double robin_interval_lambda0(double gamma, double d);

// Ground state of the square [0,d]^2 with the same Robin condition on all
// sides: 2 * robin_interval_lambda0(gamma, d) by separation of variables.
double square_robin_ground_state(double gamma, double d);

// Finite-difference cross-check for robin_interval_lambda0: lowest
// eigenvalue of the (-1,2,-1)/h^2 operator on n grid points with the Robin
// condition closed by ghost-point elimination.
double fdm_1d_robin(double gamma, double d, int n);

// Literature ground-state energy of the Dirichlet L-shape of arm width b:
// 0.93 * (pi/b)^2 (two significant digits).
double lshape_reference(double b);

// The secular-equation value at wavenumber k (exposed for tests).
double robin_secular(double k, double gamma, double d);

} // namespace oracles
} // namespace bandspec
