#include "edslab/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace edslab::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-290;
constexpr int kMaxIter = 200000;

// Taylor coefficients of 1/Gamma(z) = sum c_k z^k (DLMF 5.7.1).
constexpr double kRecipGamma[] = {
    +1.00000000000000000000e+00, +5.77215664901532860607e-01, -6.55878071520253881077e-01,
    -4.20026350340952355290e-02, +1.66538611382291489502e-01, -4.21977345555443367482e-02,
    -9.62197152787697356211e-03, +7.21894324666309954024e-03, -1.16516759185906511211e-03,
    -2.15241674114950972816e-04, +1.28050282388116186153e-04, -2.01348547807882386557e-05,
    -1.25049348214267065735e-06, +1.13302723198169588237e-06, -2.05633841697760710345e-07,
    +6.11609510448141581786e-09, +5.00200764446922293006e-09, -1.18127457048702014459e-09,
    +1.04342671169110051049e-10, +7.78226343990507125405e-12, -3.69680561864220570819e-12,
    +5.10037028745447597902e-13, -2.05832605356650678322e-14, -5.34812253942301798237e-15,
    +1.22677862823826079016e-15, -1.18125930169745876951e-16, +1.18669225475160033258e-18,
    +1.41238065531803178156e-18, -2.29874568443537020659e-19, +1.71440632192733743338e-20};

// gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), gam2 = the mean of the two;
// both evaluated as series in mu^2 so they stay accurate through mu = 0.
// Uses 1/Gamma(1+mu) = sum_j c_{j+1} mu^j.
void gamma_temme(double mu, double& gam1, double& gam2, double& one_over_gamma_1_plus,
                 double& one_over_gamma_1_minus) {
    const double m2 = mu * mu;
    double g1 = 0.0, g2 = 0.0, pw = 1.0;
    for (int j = 0; j + 1 < static_cast<int>(sizeof(kRecipGamma) / sizeof(double)); j += 2) {
        g2 += kRecipGamma[j] * pw;      // c_{j+1} mu^j, j even
        g1 += kRecipGamma[j + 1] * pw;  // c_{j+2} mu^j
        pw *= m2;
    }
    gam1 = -g1;
    gam2 = g2;
    one_over_gamma_1_plus = gam2 - mu * gam1;
    one_over_gamma_1_minus = gam2 + mu * gam1;
}

// Temme's series for K_mu(z), K_{mu+1}(z); valid for z <= 2, |mu| <= 1/2.
// Returns unscaled values (e^z stays representable on this range).
void temme_k(double mu, double z, double& kmu, double& kmu1) {
    const double x2 = 0.5 * z;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < 1e-14 ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < 1e-14 ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    gamma_temme(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    const double mu2 = mu * mu;
    for (int i = 1; i <= kMaxIter; ++i) {
        ff = (i * ff + p + q) / (i * i - mu2);
        c *= d / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * ff;
        sum += del;
        sum1 += c * (p - i * ff);
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    kmu = sum;
    kmu1 = sum1 * (2.0 / z);
}

// Steed's continued fraction CF2 for e^z K_mu(z), e^z K_{mu+1}(z); z > 2.
void steed_k_scaled(double mu, double z, double& kmu, double& kmu1) {
    double b = 2.0 * (1.0 + z);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu * mu;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(kPi / (2.0 * z)) / s;
    kmu1 = kmu * (mu + z + 0.5 - h) / z;
}

// sin(pi a) with exact zeros at integer a.
double sinpi(double a) {
    const double m = std::round(a);
    const double f = a - m;
    const double s = std::sin(kPi * f);
    return (static_cast<long long>(m) % 2 == 0) ? s : -s;
}

// Core evaluation for nu >= 0 following the classic CF1 / Temme / CF2 scheme
// with Wronskian normalization (Thompson & Barnett; Temme 1975).
BesselIKScaled bessel_ik_scaled_nonneg(double nu, double z) {
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl;  // in [-1/2, 1/2]
    const double xi = 1.0 / z;
    const double xi2 = 2.0 * xi;

    // CF1: h -> I_nu'(z)/I_nu(z) by modified Lentz.
    double h = std::max(nu * xi, kTiny);
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    bool converged = false;
    for (int i = 0; i < kMaxIter; ++i) {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            converged = true;
            break;
        }
    }
    if (!converged) throw std::runtime_error("bessel_ik: CF1 failed to converge");

    // Downward recurrence in order from nu to mu, unnormalized.
    double ril = kTiny;
    double ripl = h * ril;
    const double ril1 = ril, rip1 = ripl;
    double fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const double ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    const double f = ripl / ril;  // I_mu'/I_mu

    double kmu, k1;
    if (z <= 2.0) {
        temme_k(mu, z, kmu, k1);
        const double ez = std::exp(z);
        kmu *= ez;
        k1 *= ez;
    } else {
        steed_k_scaled(mu, z, kmu, k1);
    }
    const double kpmu = mu * xi * kmu - k1;   // e^z K_mu'
    const double imu = xi / (f * kmu - kpmu); // e^{-z} I_mu via the Wronskian

    BesselIKScaled out;
    out.i = imu * (ril1 / ril);
    out.di = imu * (rip1 / ril);
    double ka = kmu, kb = k1;
    for (int l = 1; l <= nl; ++l) {
        const double ktemp = (mu + l) * xi2 * kb + ka;
        ka = kb;
        kb = ktemp;
    }
    out.k = ka;
    out.dk = nu * xi * ka - kb;
    return out;
}

}  // namespace

BesselIKScaled bessel_ik_scaled(double nu, double z) {
    if (!(z > 0.0)) throw std::domain_error("bessel_ik: argument must be positive");
    if (nu >= 0.0) return bessel_ik_scaled_nonneg(nu, z);
    const double a = -nu;
    const BesselIKScaled base = bessel_ik_scaled_nonneg(a, z);
    // K is even in the order; I picks up a K contribution:
    //   I_{-a} = I_a + (2/pi) sin(a pi) K_a.
    const double s = (2.0 / kPi) * sinpi(a);
    const double e2z = z > 350.0 ? 0.0 : std::exp(-2.0 * z);
    BesselIKScaled out;
    out.i = base.i + s * base.k * e2z;
    out.di = base.di + s * base.dk * e2z;
    out.k = base.k;
    out.dk = base.dk;
    return out;
}

BesselIK bessel_ik(double nu, double z) {
    const BesselIKScaled s = bessel_ik_scaled(nu, z);
    if (z > 700.0) throw std::overflow_error("bessel_ik: e^z not representable, use scaled form");
    const double ez = std::exp(z);
    return {s.i * ez, s.k / ez, s.di * ez, s.dk / ez};
}

double bessel_I(double nu, double z) { return bessel_ik(nu, z).i; }
double bessel_K(double nu, double z) { return bessel_ik(nu, z).k; }
double bessel_I_scaled(double nu, double z) { return bessel_ik_scaled(nu, z).i; }
double bessel_K_scaled(double nu, double z) { return bessel_ik_scaled(nu, z).k; }

std::pair<double, double> bessel_derivatives(double nu, double z) {
    const BesselIK at_nu = bessel_ik(nu, z);
    const BesselIK below = bessel_ik(nu - 1.0, z);
    return {-(nu / z) * at_nu.i + below.i, -(nu / z) * at_nu.k - below.k};
}

double sphere_surface_measure(int n) {
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double yz_phi(double r, int n) {
    if (r < 0.0) throw std::domain_error("yz_phi: radius must be >= 0");
    if (n == 1) return std::cosh(r);
    if (r < 1e-8) return sphere_surface_measure(n) * (1.0 + r * r / (2.0 * n));
    const double m = 0.5 * (n - 2);
    return std::pow(2.0 * kPi, 0.5 * n) * std::pow(r, -m) * bessel_I(m, r);
}

double yz_phi_scaled(double r, int n) {
    if (r < 0.0) throw std::domain_error("yz_phi: radius must be >= 0");
    if (n == 1) return 0.5 * (1.0 + std::exp(-2.0 * r));
    if (r < 1e-8) return sphere_surface_measure(n) * (1.0 + r * r / (2.0 * n)) * std::exp(-r);
    const double m = 0.5 * (n - 2);
    return std::pow(2.0 * kPi, 0.5 * n) * std::pow(r, -m) * bessel_I_scaled(m, r);
}

double yz_phi_lambda(double lambda, double r, int n) {
    if (!(lambda > 0.0)) throw std::domain_error("yz_phi_lambda: lambda must be > 0");
    return yz_phi(lambda * r, n);
}

}  // namespace edslab::specfun
