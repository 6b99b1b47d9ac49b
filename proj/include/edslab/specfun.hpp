#pragma once

/// @file specfun.hpp
/// @brief Modified Bessel functions I_nu, K_nu of arbitrary real order and the
///        Yordanov-Zhang eigenfunction phi (Delta phi = phi).
///
/// Everything the time kernels need is exposed in exponentially scaled form
/// (e^{-z} I_nu, e^{+z} K_nu) so that products of growing and decaying factors
/// can be assembled in log space without overflow.

#include <utility>

namespace edslab::specfun {

/// Unscaled values and z-derivatives at (nu, z).
struct BesselIK {
    double i;   ///< I_nu(z)
    double k;   ///< K_nu(z)
    double di;  ///< I_nu'(z)
    double dk;  ///< K_nu'(z)
};

/// Exponentially scaled values: i = e^{-z} I_nu(z), k = e^{z} K_nu(z),
/// di = e^{-z} I_nu'(z), dk = e^{z} K_nu'(z).
struct BesselIKScaled {
    double i;
    double k;
    double di;
    double dk;
};

/// Core evaluation, any real nu, z > 0. Throws std::domain_error for z <= 0.
BesselIKScaled bessel_ik_scaled(double nu, double z);

/// Unscaled values; throws std::overflow_error once e^z cannot be represented.
BesselIK bessel_ik(double nu, double z);

double bessel_I(double nu, double z);
double bessel_K(double nu, double z);
double bessel_I_scaled(double nu, double z);
double bessel_K_scaled(double nu, double z);

/// Derivatives assembled through the order recurrences
///   I_nu' = -(nu/z) I_nu + I_{nu-1},   K_nu' = -(nu/z) K_nu - K_{nu-1},
/// i.e. through evaluations at order nu-1 rather than the direct output of the
/// core routine. Returns (I_nu', K_nu').
std::pair<double, double> bessel_derivatives(double nu, double z);

/// Surface measure of the unit sphere S^{n-1} in R^n.
double sphere_surface_measure(int n);

/// Yordanov-Zhang function: radial value of  int_{S^{n-1}} e^{x . w} dsigma_w
/// for n >= 2, cosh r for n = 1. Positive, and satisfies Delta phi = phi.
double yz_phi(double r, int n);

/// e^{-r} phi(r): bounded for all r, the form used inside kernel quadratures.
double yz_phi_scaled(double r, int n);

/// phi_lambda(x) = phi(lambda x), radial value at radius r.
double yz_phi_lambda(double lambda, double r, int n);

}  // namespace edslab::specfun
