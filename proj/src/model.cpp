#include "edslab/model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace edslab {

namespace {
constexpr double kTieTol = 1e-12;       // dominance tie tolerance
constexpr double kCriticalTol = 1e-9;   // p == p0 / p == p1 detection
}  // namespace

double ExtendedReal::value_or_inf() const {
    return finite_ ? value_ : std::numeric_limits<double>::infinity();
}

void ModelParams::validate() const {
    if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
    if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("ModelParams: k must lie in [0,1)");
    if (!(mu >= 0.0)) throw std::invalid_argument("ModelParams: mu must be >= 0");
    if (!(p > 1.0)) throw std::invalid_argument("ModelParams: p must be > 1");
    if (!(R > 0.0)) throw std::invalid_argument("ModelParams: R must be > 0");
    if (!(eps > 0.0)) throw std::invalid_argument("ModelParams: eps must be > 0");
}

ExtendedReal p0(double k, double n_eff) {
    if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("p0: k must lie in [0,1)");
    if (!(n_eff >= 1.0)) throw std::domain_error("p0: effective dimension must be >= 1");
    const double half_shift = 0.5 * k / (1.0 - k);
    const double a = 0.5 * (n_eff - 1.0) - half_shift;
    const double b = -(0.5 * (n_eff + 1.0) + 1.5 * k / (1.0 - k));
    const double c = -1.0;
    // A leading coefficient within roundoff of zero (e.g. the Einstein-de
    // Sitter point k=2/3, n=3, mu=0) is the degenerate case, not a genuine
    // root near 1/a.
    const double degenerate_tol =
        64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, half_shift);
    if (a <= degenerate_tol) return ExtendedReal::infinity();
    // b < 0 and c < 0 always, so the roots have opposite signs; form the
    // larger-magnitude intermediate first to avoid cancellation when a is tiny.
    const double disc = b * b - 4.0 * a * c;
    const double s = 0.5 * (-b + std::sqrt(disc));
    return ExtendedReal::finite(s / a);
}

double p1(double k, double n) {
    return 1.0 + 2.0 / ((1.0 - k) * n);
}

double mu0(double k, double n) {
    const double om = 1.0 - k;
    return (om * om * n * n + om * (1.0 + 2.0 * k) * n + 2.0) / (n * om + 2.0);
}

double theta(double n, double k, double mu, double p) {
    const double om = 1.0 - k;
    return om + (om * 0.5 * (n + 1.0) + 0.5 * (mu + 3.0 * k)) * p -
           (om * 0.5 * (n - 1.0) + 0.5 * (mu - k)) * p * p;
}

ExponentReport classify(const ModelParams& params) {
    params.validate();
    ExponentReport rep;
    rep.p0_shifted = p0(params.k, params.shifted_dimension());
    rep.p1 = p1(params.k, params.n);
    rep.mu0 = mu0(params.k, params.n);
    if (std::abs(params.mu - rep.mu0) <= kTieTol) {
        rep.dominant = Dominant::Tie;
    } else {
        rep.dominant = params.mu > rep.mu0 ? Dominant::P1 : Dominant::P0;
    }
    if (rep.p0_shifted > params.p) {
        rep.theta = theta(params.n, params.k, params.mu, params.p);
    }
    return rep;
}

LifespanBound lifespan_bound(const ModelParams& params) {
    params.validate();
    const ExtendedReal p0s = p0(params.k, params.shifted_dimension());
    const double pf = p1(params.k, params.n);
    const double m0 = mu0(params.k, params.n);
    const double p = params.p;

    const bool at_p1 = std::abs(p - pf) <= kCriticalTol * pf;
    const bool at_p0 = p0s.is_finite() && std::abs(p - p0s.value()) <= kCriticalTol * p0s.value();

    if (at_p1 && params.mu >= m0 - kCriticalTol) {
        return {LifespanRegime::CriticalP1, -(p - 1.0), LifespanForm::ExpPowerLaw};
    }
    if (at_p0 && params.mu <= m0 + kCriticalTol) {
        return {LifespanRegime::CriticalP0, -p * (p - 1.0), LifespanForm::ExpPowerLaw};
    }
    if (p < pf) {
        const double denom = 2.0 / (p - 1.0) - (1.0 - params.k) * params.n;
        return {LifespanRegime::SubcriticalP1, -1.0 / denom, LifespanForm::PowerLaw};
    }
    if (p0s > p) {
        const double th = theta(params.n, params.k, params.mu, p);
        return {LifespanRegime::SubcriticalP0, -p * (p - 1.0) / th, LifespanForm::PowerLaw};
    }
    throw std::invalid_argument(
        "lifespan_bound: p = " + std::to_string(p) +
        " is strictly supercritical; no blow-up theorem applies");
}

DissipativeTransform dissipative_transform(const ModelParams& params) {
    return {2.0 - params.mu, (1.0 - params.mu) * (params.p - 1.0), params.mu - 1.0};
}

}  // namespace edslab
