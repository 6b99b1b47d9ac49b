#pragma once

/// @file model.hpp
/// @brief Critical exponents, dominance classification and lifespan-bound
///        formulas for the damped wave equation
///            u_tt - t^{-2k} \Delta u + (mu/t) u_t = |u|^p
///        posed at initial time t = 1 with data of size eps.

#include <optional>
#include <stdexcept>

namespace edslab {

/// Finite real or +infinity. The generalized Strauss exponent degenerates to
/// +infinity when the leading coefficient of its defining quadratic is <= 0;
/// a tagged value keeps that case out of ordinary arithmetic.
class ExtendedReal {
  public:
    static ExtendedReal finite(double v) { return ExtendedReal(v, true); }
    static ExtendedReal infinity() { return ExtendedReal(0.0, false); }

    bool is_finite() const { return finite_; }

    /// Finite value; throws std::logic_error when infinite.
    double value() const {
        if (!finite_) throw std::logic_error("ExtendedReal: value() on infinity");
        return value_;
    }

    /// Finite value, or +inf as a double (for printing / plotting only).
    double value_or_inf() const;

    bool operator>(double x) const { return !finite_ || value_ > x; }
    bool operator>=(double x) const { return !finite_ || value_ >= x; }
    bool operator<(double x) const { return finite_ && value_ < x; }
    bool operator<=(double x) const { return finite_ && value_ <= x; }

  private:
    ExtendedReal(double v, bool f) : value_(v), finite_(f) {}
    double value_;
    bool finite_;
};

/// Problem instance (n, k, mu, p, R, eps).
struct ModelParams {
    int n = 1;         ///< spatial dimension, >= 1
    double k = 0.0;    ///< metric exponent, in [0, 1)
    double mu = 0.0;   ///< damping constant, >= 0
    double p = 2.0;    ///< nonlinearity exponent, > 1
    double R = 1.0;    ///< support radius of the initial data, > 0
    double eps = 0.1;  ///< data size, > 0

    /// Throws std::invalid_argument when any invariant fails.
    void validate() const;

    /// Effective dimension n + mu/(1-k) entering the shifted Strauss root.
    double shifted_dimension() const { return n + mu / (1.0 - k); }
};

enum class Dominant { P0, P1, Tie };

struct ExponentReport {
    ExtendedReal p0_shifted = ExtendedReal::infinity();  ///< p0(k, n + mu/(1-k))
    double p1 = 0.0;
    double mu0 = 0.0;
    Dominant dominant = Dominant::P0;
    std::optional<double> theta;  ///< set when p < p0_shifted
};

enum class LifespanRegime { SubcriticalP0, SubcriticalP1, CriticalP0, CriticalP1 };
enum class LifespanForm { PowerLaw, ExpPowerLaw };

/// T(eps) <= C eps^exponent (PowerLaw) or T(eps) <= exp(C eps^exponent)
/// (ExpPowerLaw, `exponent` is the inner exponent).
struct LifespanBound {
    LifespanRegime regime;
    double exponent;
    LifespanForm form;
};

/// Transformed problem v = t^{mu-1} u: damping constant flips to 2-mu and the
/// nonlinearity picks up the factor t^{(1-mu)(p-1)}.
struct DissipativeTransform {
    double mu_prime;         ///< 2 - mu
    double weight_exponent;  ///< (1-mu)(p-1)
    double v1_shift;         ///< v1 = u1 + v1_shift * u0, equal to mu - 1
};

/// Positive root of ((n_eff-1)/2 - k/(2(1-k))) p^2 - ((n_eff+1)/2 + 3k/(2(1-k))) p - 1 = 0,
/// or +infinity when the leading coefficient is <= 0.
ExtendedReal p0(double k, double n_eff);

/// Fujita-type exponent 1 + 2/((1-k) n).
double p1(double k, double n);

/// Damping threshold separating p0-dominant from p1-dominant regimes.
double mu0(double k, double n);

/// theta(n,k,mu,p) = 1-k + ((1-k)(n+1)/2 + (mu+3k)/2) p - ((1-k)(n-1)/2 + (mu-k)/2) p^2.
/// Vanishes at the shifted Strauss root, positive below it.
double theta(double n, double k, double mu, double p);

ExponentReport classify(const ModelParams& params);

/// Matching blow-up regime and eps-exponent. Throws std::invalid_argument for
/// strictly supercritical p (no theorem applies there).
LifespanBound lifespan_bound(const ModelParams& params);

DissipativeTransform dissipative_transform(const ModelParams& params);

}  // namespace edslab
