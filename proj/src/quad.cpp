#include "edslab/quad.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace edslab::quad {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, int max_depth) {
    QuadResult res;
    double l1 = 0.0;
    res.value = GK::integrate(f, a, b, max_depth, rel_tol, &res.error_estimate, &l1);
    res.converged = res.error_estimate <= rel_tol * std::max(l1, 1e-300) * 10.0 ||
                    res.error_estimate <= 1e-300;
    return res;
}

QuadResult integrate_power_weighted(const std::function<double(double)>& g, double q,
                                    double upper, double rel_tol, int max_depth) {
    if (!(q > -1.0)) throw std::domain_error("integrate_power_weighted: q must be > -1");
    if (!(upper > 0.0)) throw std::domain_error("integrate_power_weighted: upper must be > 0");
    // Substitute lambda = v^m:  int_0^U lambda^q g dlambda
    //   = m int_0^{U^{1/m}} v^{m(q+1)-1} g(v^m) dv.
    // m is chosen so the endpoint weight exponent is >= 4, which restores
    // high-order Gauss-Kronrod convergence for any q > -1 (the raw weight has
    // unbounded derivatives at 0 whenever q is not a nonnegative integer).
    const double e = q + 1.0;
    const int m = std::max(1, static_cast<int>(std::ceil(5.0 / e)));
    const double alpha = m * e - 1.0;
    const double v_hi = std::pow(upper, 1.0 / m);
    auto h = [&, m, alpha](double v) {
        if (v <= 0.0) return 0.0;
        return std::pow(v, alpha) * g(std::pow(v, m));
    };
    QuadResult res = integrate(h, 0.0, v_hi, rel_tol, max_depth);
    res.value *= m;
    res.error_estimate *= m;
    return res;
}

}  // namespace edslab::quad
