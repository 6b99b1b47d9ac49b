#include "edslab/kernels.hpp"

#include "edslab/quad.hpp"
#include "edslab/specfun.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace edslab::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LogSigned to_log(double x) {
    if (x == 0.0) return {-kInf, 0};
    return {std::log(std::abs(x)), x > 0.0 ? 1 : -1};
}

LogSigned log_add(LogSigned a, LogSigned b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    if (a.log_abs < b.log_abs) std::swap(a, b);
    const double d = b.log_abs - a.log_abs;  // <= 0
    if (a.sign == b.sign) return {a.log_abs + std::log1p(std::exp(d)), a.sign};
    const double m = -std::expm1(d);  // 1 - e^d in [0, 1]
    if (m <= 0.0) return {-kInf, 0};
    return {a.log_abs + std::log(m), a.sign};
}

double log_cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0); }
double log_sinh(double x) {
    if (x <= 0.0) return -kInf;
    return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

void require_times(double t, double s) {
    if (!(s >= 1.0) || !(t >= s))
        throw std::domain_error("kernel times must satisfy t >= s >= 1");
}

}  // namespace

double CosmologyTime::phi(double t) const { return std::pow(t, 1.0 - k) / (1.0 - k); }

double CosmologyTime::log_A(double t) const {
    const double e = (1.0 - k) * std::log(t);
    if (e > 700.0) return e - std::log(1.0 - k);
    return std::log(std::expm1(e)) - std::log(1.0 - k);
}

DerivedOrders DerivedOrders::from(double k, double mu) {
    const double d = 2.0 * (1.0 - k);
    return {(mu - 1.0) / d, (1.0 - mu) / d, (1.0 + mu) / d,
            std::pow(1.0 - k, (k - mu) / (1.0 - k))};
}

double LogSigned::value() const {
    if (sign == 0) return 0.0;
    if (log_abs > 709.0) throw std::overflow_error("LogSigned: value exceeds double range");
    return sign * std::exp(log_abs);
}

double log_rho(double s, double k, double mu) {
    const CosmologyTime ct{k};
    const DerivedOrders ord = DerivedOrders::from(k, mu);
    const double phi = ct.phi(s);
    return 0.5 * (1.0 + mu) * std::log(s) +
           std::log(specfun::bessel_K_scaled(ord.gamma, phi)) - phi;
}

double rho(double s, double k, double mu) { return std::exp(log_rho(s, k, mu)); }

double rho_prime(double s, double k, double mu) {
    const CosmologyTime ct{k};
    const DerivedOrders ord = DerivedOrders::from(k, mu);
    const double phi = ct.phi(s);
    const double e = std::exp(-phi);
    return mu * std::pow(s, 0.5 * (mu - 1.0)) * specfun::bessel_K_scaled(ord.gamma, phi) * e -
           std::pow(s, 0.5 * (1.0 + mu) - k) * specfun::bessel_K_scaled(ord.gamma + 1.0, phi) * e;
}

double psi(double s, double r, double k, double mu, int n) {
    return rho(s, k, mu) * specfun::yz_phi(r, n);
}

LogSigned y0_log(double t, double s, double lambda, double k, double mu) {
    require_times(t, s);
    if (!(lambda > 0.0)) throw std::domain_error("y0: lambda must be > 0");
    if (t == s) return {0.0, 1};
    const CosmologyTime ct{k};
    const DerivedOrders ord = DerivedOrders::from(k, mu);
    const double a = lambda * ct.phi(s);
    const double b = lambda * ct.phi(t);
    // The bracket I_{nu-1}(a) K_nu(b) + K_{nu-1}(a) I_nu(b) is invariant under
    // nu -> -nu (the connection-formula K x K cross terms cancel exactly), so
    // for nu <= 0 it is evaluated at positive orders (1-nu, -nu). Otherwise
    // I_{nu-1} at a negative order dominated by its K component wipes out the
    // I information and the bracket loses all accuracy.
    const double order_a = ord.nu <= 0.0 ? 1.0 - ord.nu : ord.nu - 1.0;
    const double order_b = std::abs(ord.nu);
    const auto at_a = specfun::bessel_ik_scaled(order_a, a);
    const auto at_b = specfun::bessel_ik_scaled(order_b, b);
    LogSigned t1 = to_log(at_a.i);
    if (t1.sign != 0) t1.log_abs += std::log(at_b.k) + (a - b);
    LogSigned t2 = to_log(at_b.i);
    if (t2.sign != 0) t2.log_abs += std::log(at_a.k) + (b - a);
    LogSigned sum = log_add(t1, t2);
    if (sum.sign == 0) return sum;
    sum.log_abs += std::log(lambda) + std::log(ct.phi(s)) + 0.5 * (mu - 1.0) * std::log(s) +
                   0.5 * (1.0 - mu) * std::log(t);
    return sum;
}

LogSigned y1_log(double t, double s, double lambda, double k, double mu) {
    require_times(t, s);
    if (!(lambda > 0.0)) throw std::domain_error("y1: lambda must be > 0");
    if (t == s) return {-kInf, 0};
    const CosmologyTime ct{k};
    const DerivedOrders ord = DerivedOrders::from(k, mu);
    const double a = lambda * ct.phi(s);
    const double b = lambda * ct.phi(t);
    // K_nu(a) I_nu(b) - I_nu(a) K_nu(b) is even in nu; evaluate at |nu|.
    const auto at_a = specfun::bessel_ik_scaled(std::abs(ord.nu), a);
    const auto at_b = specfun::bessel_ik_scaled(std::abs(ord.nu), b);
    // K_nu(a) I_nu(b) - I_nu(a) K_nu(b)
    LogSigned t1 = to_log(at_b.i);
    if (t1.sign != 0) t1.log_abs += std::log(at_a.k) + (b - a);
    LogSigned t2 = to_log(at_a.i);
    if (t2.sign != 0) {
        t2.log_abs += std::log(at_b.k) + (a - b);
        t2.sign = -t2.sign;
    }
    LogSigned sum = log_add(t1, t2);
    if (sum.sign == 0) return sum;
    sum.log_abs += -std::log(1.0 - k) + 0.5 * (1.0 + mu) * std::log(s) +
                   0.5 * (1.0 - mu) * std::log(t);
    return sum;
}

double y0(double t, double s, double lambda, double k, double mu) {
    return y0_log(t, s, lambda, k, mu).value();
}

double y1(double t, double s, double lambda, double k, double mu) {
    return y1_log(t, s, lambda, k, mu).value();
}

std::pair<double, double> integrate_cauchy_state(int j, double t, double s, double lambda,
                                                 double k, double mu, double rel_tol) {
    require_times(t, s);
    if (j != 0 && j != 1) throw std::domain_error("integrate_cauchy: j must be 0 or 1");
    using State = std::array<double, 2>;
    State x{j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0};
    if (t == s) return {x[0], x[1]};

    auto sys = [lambda, k, mu](const State& y, State& dydt, double tau) {
        dydt[0] = y[1];
        dydt[1] = lambda * lambda * std::pow(tau, -2.0 * k) * y[0] - mu / tau * y[1];
    };

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(1e-14, rel_tol, ode::runge_kutta_fehlberg78<State>());
    double tau = s;
    double dt = std::min(1e-3, (t - s) * 0.5);
    while (tau < t) {
        if (tau + dt > t) dt = t - tau;
        ode::controlled_step_result r;
        int attempts = 0;
        do {
            r = stepper.try_step(sys, x, tau, dt);
            if (++attempts > 200 || dt < 1e-15 * std::max(tau, 1.0))
                throw std::runtime_error("integrate_cauchy: step size underflow");
        } while (r == ode::fail);
    }
    return {x[0], x[1]};
}

double integrate_cauchy(int j, double t, double s, double lambda, double k, double mu,
                        double rel_tol) {
    return integrate_cauchy_state(j, t, s, lambda, k, mu, rel_tol).first;
}

std::pair<double, double> ds_identity_residuals(double t, double s, double lambda, double k,
                                                double mu) {
    if (!(t > s)) throw std::domain_error("ds_identity_residuals: needs t > s");
    auto y1_at = [&](double ss) { return y1(t, ss, lambda, k, mu); };
    const double h1 = 6e-6 * s;
    const double h2 = 1.2e-4 * s;
    const double v1 = y1_at(s);
    const double v0 = y0(t, s, lambda, k, mu);
    const double d1 = (y1_at(s + h1) - y1_at(s - h1)) / (2.0 * h1);
    const double r1_num = d1 + v0 - mu / s * v1;
    const double r1_scale = std::abs(d1) + std::abs(v0) + std::abs(mu / s * v1);

    const double d1b = (y1_at(s + h2) - y1_at(s - h2)) / (2.0 * h2);
    const double d2 = (y1_at(s + h2) - 2.0 * v1 + y1_at(s - h2)) / (h2 * h2);
    const double term_l = lambda * lambda * std::pow(s, -2.0 * k) * v1;
    const double r2_num = d2 - term_l - mu / s * d1b + mu / (s * s) * v1;
    const double r2_scale =
        std::abs(d2) + std::abs(term_l) + std::abs(mu / s * d1b) + std::abs(mu / (s * s) * v1);
    return {std::abs(r1_num) / r1_scale, std::abs(r2_num) / r2_scale};
}

ComparisonCheck comparison_bounds(double t, double s, double lambda, double k, double mu) {
    require_times(t, s);
    const CosmologyTime ct{k};
    const double dphi = ct.phi(t) - ct.phi(s);
    ComparisonCheck out;
    const LogSigned l0 = y0_log(t, s, lambda, k, mu);
    const LogSigned l1 = y1_log(t, s, lambda, k, mu);
    out.log_y0 = l0.sign > 0 ? l0.log_abs : -kInf;
    out.log_y1 = l1.sign > 0 ? l1.log_abs : -kInf;
    out.log_w0 = 0.5 * (mu - k) * std::log(s) + 0.5 * (k - mu) * std::log(t) +
                 log_cosh(lambda * dphi);
    out.log_w1 = 0.5 * (mu + k) * std::log(s) + 0.5 * (k - mu) * std::log(t) +
                 log_sinh(lambda * dphi) - std::log(lambda);
    constexpr double kSlack = 1e-9;
    const bool mu_high = mu >= 2.0 - k - 1e-12;
    const bool mu_low = mu <= k + 1e-12;
    if (mu_high) {
        out.y0_bound_holds = out.log_y0 >= out.log_w0 - kSlack;
    }
    if (mu_low || mu_high) {
        // t == s: both sides vanish, equality
        out.y1_bound_holds = (out.log_w1 == -kInf) || (out.log_y1 >= out.log_w1 - kSlack);
    }
    return out;
}

ComparisonScan scan_comparison_bounds(double k, double mu, int samples, std::uint64_t seed,
                                      double t_max, double lambda_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    ComparisonScan scan;
    for (int i = 0; i < samples; ++i) {
        const double t = std::exp(uni(rng) * std::log(t_max));
        const double s = 1.0 + uni(rng) * (t - 1.0);
        const double lambda = 0.05 * std::pow(lambda_max / 0.05, uni(rng));
        const ComparisonCheck c = comparison_bounds(t, s, lambda, k, mu);
        if (c.y0_bound_holds.has_value()) {
            ++scan.checked0;
            if (!*c.y0_bound_holds) ++scan.violations0;
            scan.worst_log_deficit = std::min(scan.worst_log_deficit, c.log_y0 - c.log_w0);
        }
        if (c.y1_bound_holds.has_value()) {
            ++scan.checked1;
            if (!*c.y1_bound_holds) ++scan.violations1;
            if (c.log_w1 != -kInf)
                scan.worst_log_deficit = std::min(scan.worst_log_deficit, c.log_y1 - c.log_w1);
        }
    }
    return scan;
}

double angle(double y) { return 3.0 + std::abs(y); }

namespace {

// Shared integrand plumbing: returns the xi/eta integrand without the lambda^q
// factor, everything assembled in log space before the final exponential.
WeightEval weight_integral(double t, double s, double r, const WeightParams& w, double k,
                           double mu, int n, bool eta, double rel_tol) {
    require_times(t, s);
    if (!(r >= 0.0)) throw std::domain_error("weights: r must be >= 0");
    if (!(w.q > -1.0)) throw std::domain_error("weights: q must be > -1");
    const CosmologyTime ct{k};
    const double decay = ct.A(t) + w.R;
    const double dphi = ct.phi(t) - ct.phi(s);
    // Within ~1e-8 of the diagonal the y1/dphi ratio loses all digits to
    // cancellation while the analytic limit t^k is accurate to O(dphi).
    const bool diagonal = dphi <= 1e-8 * ct.phi(t);
    const double diag_log_kernel = k * std::log(t);

    auto g = [&](double lam) -> double {
        lam = std::max(lam, 1e-12);  // g extends continuously to lambda = 0
        LogSigned kernel;
        if (!eta) {
            kernel = y0_log(t, s, lam, k, mu);
        } else if (diagonal) {
            kernel = {diag_log_kernel, 1};
        } else {
            kernel = y1_log(t, s, lam, k, mu);
            kernel.log_abs -= std::log(dphi);
        }
        if (kernel.sign == 0) return 0.0;
        const double z = lam * r;
        const double log_phi = z + std::log(specfun::yz_phi_scaled(z, n));
        const double le = -lam * decay + kernel.log_abs + log_phi;
        if (le < -700.0) return 0.0;
        return kernel.sign * std::exp(le);
    };
    const quad::QuadResult res = quad::integrate_power_weighted(g, w.q, w.lambda0, rel_tol);
    return {res.value, res.error_estimate, res.converged};
}

double checked_value(const WeightEval& e, const char* what) {
    if (!e.converged)
        throw std::runtime_error(std::string(what) + ": quadrature did not converge, achieved " +
                                 std::to_string(e.error_estimate));
    return e.value;
}

}  // namespace

WeightEval xi_q_checked(double t, double s, double r, const WeightParams& w, double k, double mu,
                        int n, double rel_tol) {
    return weight_integral(t, s, r, w, k, mu, n, false, rel_tol);
}

WeightEval eta_q_checked(double t, double s, double r, const WeightParams& w, double k, double mu,
                         int n, double rel_tol) {
    return weight_integral(t, s, r, w, k, mu, n, true, rel_tol);
}

double xi_q(double t, double s, double r, const WeightParams& w, double k, double mu, int n) {
    return checked_value(xi_q_checked(t, s, r, w, k, mu, n), "xi_q");
}

double eta_q(double t, double s, double r, const WeightParams& w, double k, double mu, int n) {
    return checked_value(eta_q_checked(t, s, r, w, k, mu, n), "eta_q");
}

std::vector<WeightGridPoint> weight_grid(double k, double R, int level, double t_max) {
    const CosmologyTime ct{k};
    std::vector<double> ts, sf, rf;
    if (level == 0) {
        for (int i = 0; i < 6; ++i) ts.push_back(std::pow(t_max, i / 5.0));
        sf = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
        rf = {0.0, 0.35, 0.75, 1.0};
    } else {
        for (int i = 0; i < 11; ++i) ts.push_back(1.12 * std::pow(t_max / 1.3, i / 10.0));
        sf = {0.15, 0.45, 0.6, 0.85};
        rf = {0.1, 0.5, 0.65, 0.9};
    }
    std::vector<WeightGridPoint> pts;
    for (double t : ts)
        for (double f : sf) {
            const double s = 1.0 + f * (t - 1.0);
            for (double g : rf) pts.push_back({t, s, g * (ct.A(s) + R)});
        }
    return pts;
}

namespace {

double xi_lower_rhs(double t, double s, double q, double k, double mu) {
    const CosmologyTime ct{k};
    return std::pow(s, 0.5 * (mu - k)) * std::pow(t, 0.5 * (k - mu)) *
           std::pow(angle(ct.A(s)), -q - 1.0);
}

double eta_lower_rhs(double t, double s, double q, double k, double mu) {
    const CosmologyTime ct{k};
    return std::pow(s, 0.5 * (mu + k)) * std::pow(t, 0.5 * (k - mu)) / angle(ct.A(t)) *
           std::pow(angle(ct.A(s)), -q);
}

double xi_upper_rhs(double t, double r, double q, double k, int n) {
    const CosmologyTime ct{k};
    return std::pow(angle(ct.A(t)), -0.5 * (n - 1)) *
           std::pow(angle(ct.A(t) - r), 0.5 * (n - 3) - q);
}

}  // namespace

WeightCalibration calibrate_weight_bounds(double k, double mu, int n, const WeightParams& w) {
    if (!(mu >= 2.0 - k - 1e-12))
        throw std::invalid_argument("calibrate_weight_bounds: lower bounds need mu >= 2-k");
    if (!(w.q > 0.5 * (n - 3)))
        throw std::invalid_argument("calibrate_weight_bounds: upper bound needs q > (n-3)/2");
    const CosmologyTime ct{k};
    WeightCalibration cal;
    double r0 = 1e300, r1 = 1e300, r2 = 0.0;
    for (const auto& p : weight_grid(k, w.R, 0)) {
        r0 = std::min(r0, xi_q(p.t, p.s, p.r, w, k, mu, n) / xi_lower_rhs(p.t, p.s, w.q, k, mu));
        r1 = std::min(r1, eta_q(p.t, p.s, p.r, w, k, mu, n) / eta_lower_rhs(p.t, p.s, w.q, k, mu));
        const double rd = p.r / (ct.A(p.s) + w.R) * (ct.A(p.t) + w.R);
        r2 = std::max(r2, xi_q(p.t, p.t, rd, w, k, mu, n) / xi_upper_rhs(p.t, rd, w.q, k, n));
    }
    cal.B0 = 0.9 * r0;
    cal.B1 = 0.9 * r1;
    cal.B2 = 1.1 * r2;
    return cal;
}

WeightValidation validate_weight_lower_bounds(double k, double mu, int n, const WeightParams& w,
                                              const WeightCalibration& cal, int level) {
    WeightValidation v;
    for (const auto& p : weight_grid(k, w.R, level)) {
        const double m0 =
            xi_q(p.t, p.s, p.r, w, k, mu, n) / (cal.B0 * xi_lower_rhs(p.t, p.s, w.q, k, mu));
        const double m1 =
            eta_q(p.t, p.s, p.r, w, k, mu, n) / (cal.B1 * eta_lower_rhs(p.t, p.s, w.q, k, mu));
        for (double m : {m0, m1}) {
            ++v.checked;
            if (m < 1.0 - 1e-9) ++v.violations;
            v.worst_margin = std::min(v.worst_margin, m);
        }
    }
    return v;
}

WeightValidation validate_weight_upper_bound(double k, double mu, int n, const WeightParams& w,
                                             const WeightCalibration& cal, int level) {
    const CosmologyTime ct{k};
    WeightValidation v;
    for (const auto& p : weight_grid(k, w.R, level)) {
        const double rd = p.r / (ct.A(p.s) + w.R) * (ct.A(p.t) + w.R);
        const double m = cal.B2 * xi_upper_rhs(p.t, rd, w.q, k, n) / xi_q(p.t, p.t, rd, w, k, mu, n);
        ++v.checked;
        if (m < 1.0 - 1e-9) ++v.violations;
        v.worst_margin = std::min(v.worst_margin, m);
    }
    return v;
}

bool xi_diag_upper_check(double t, double r, const WeightParams& w, double k, double mu, int n,
                         double B2) {
    return xi_q(t, t, r, w, k, mu, n) <= B2 * xi_upper_rhs(t, r, w.q, k, n) * (1.0 + 1e-9);
}

}  // namespace edslab::kernels
