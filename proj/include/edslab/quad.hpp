#pragma once

/// @file quad.hpp
/// @brief Adaptive quadrature helpers used by the kernel weights.

#include <functional>

namespace edslab::quad {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, int max_depth = 15);

/// Integrates lambda^q * g(lambda) over (0, upper] for q > -1. The integrable
/// endpoint singularity is removed exactly by the substitution u = lambda^{q+1},
/// so g only ever sees strictly positive arguments of a smooth integrand.
QuadResult integrate_power_weighted(const std::function<double(double)>& g, double q,
                                    double upper, double rel_tol = 1e-8, int max_depth = 15);

}  // namespace edslab::quad
