#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "edslab/model.hpp"

#include <cmath>
#include <vector>

using namespace edslab;

namespace {
// Independent quadratic-formula oracle for the p0 examples: solve
// a p^2 + b p + c = 0 directly with long-double arithmetic.
double quadratic_positive_root(double a, double b, double c) {
    const long double disc = (long double)b * b - 4.0L * (long double)a * c;
    const long double r1 = (-b + std::sqrt((double)disc)) / (2.0L * a);
    const long double r2 = (-b - std::sqrt((double)disc)) / (2.0L * a);
    return (double)(r1 > 0 ? r1 : r2);
}
}  // namespace

TEST_CASE("p0: flat case n=3 recovers the Strauss exponent 1+sqrt(2)") {
    // oracle: p^2 - 2p - 1 = 0
    const double expect = quadratic_positive_root(1.0, -2.0, -1.0);
    CHECK(expect == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
    const ExtendedReal r = p0(0.0, 3.0);
    REQUIRE(r.is_finite());
    CHECK(r.value() == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("p0: degenerate leading coefficient gives infinity") {
    // k=1/2, n_eff=1: leading coefficient (n-1)/2 - k/(2(1-k)) = -1/2 <= 0
    const ExtendedReal r = p0(0.5, 1.0);
    CHECK(!r.is_finite());
    CHECK(r > 1e12);  // +infinity dominates any finite exponent
}

TEST_CASE("p0: k=2/3, n_eff=9 solves 3p^2-8p-1=0") {
    // (n-1)/2 - k/(2(1-k)) = 4 - 1 = 3; (n+1)/2 + 3k/(2(1-k)) = 5 + 3 = 8
    const double expect = quadratic_positive_root(3.0, -8.0, -1.0);
    CHECK(expect == doctest::Approx((4.0 + std::sqrt(19.0)) / 3.0).epsilon(1e-14));
    const ExtendedReal r = p0(2.0 / 3.0, 9.0);
    REQUIRE(r.is_finite());
    CHECK(r.value() == doctest::Approx(expect).epsilon(1e-13));
    // residual of the defining quadratic
    const double p = r.value();
    CHECK(std::abs(3.0 * p * p - 8.0 * p - 1.0) < 1e-10);
}

TEST_CASE("p0 rejects k outside [0,1)") {
    CHECK_THROWS_AS(p0(1.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(p0(-0.1, 3.0), std::domain_error);
}

TEST_CASE("p1 values and the Fujita identity") {
    CHECK(p1(0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p1(2.0 / 3.0, 3.0) == doctest::Approx(3.0).epsilon(1e-14));
    // p1(k,n) = p1(0,(1-k)n)
    CHECK(p1(0.5, 4.0) == doctest::Approx(p1(0.0, 2.0)).epsilon(1e-14));
    CHECK(p1(0.5, 4.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("p1 strictly decreasing in n and in (1-k)n") {
    const std::vector<double> ks = {0.0, 0.2, 0.5, 2.0 / 3.0, 0.9};
    for (double k : ks)
        for (int n = 1; n < 6; ++n) CHECK(p1(k, n) > p1(k, n + 1));
    // depends on n only through (1-k)n
    CHECK(p1(0.5, 6.0) == doctest::Approx(p1(0.0, 3.0)).epsilon(1e-14));
}

TEST_CASE("mu0 evaluations") {
    CHECK(mu0(0.0, 3.0) == doctest::Approx(14.0 / 5.0).epsilon(1e-15));
    CHECK(mu0(2.0 / 3.0, 3.0) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("mu0 root identity: p0(k, n + mu0/(1-k)) == p1(k,n)") {
    const std::vector<double> ks = {0.0, 0.2, 0.5, 2.0 / 3.0, 0.9};
    for (double k : ks) {
        for (int n = 1; n <= 6; ++n) {
            const double m0 = mu0(k, n);
            const ExtendedReal ps = p0(k, n + m0 / (1.0 - k));
            REQUIRE(ps.is_finite());
            CHECK(std::abs(ps.value() - p1(k, n)) < 1e-10);
        }
    }
}

TEST_CASE("theta vanishes at the shifted p0 root and is positive below it") {
    {
        const double n = 3, k = 0, mu = 2;
        const ExtendedReal ps = p0(k, n + mu / (1.0 - k));
        REQUIRE(ps.is_finite());
        CHECK(std::abs(theta(n, k, mu, ps.value())) < 1e-9);
    }
    CHECK(theta(1, 0, 0, 2) == doctest::Approx(3.0).epsilon(1e-15));
    {
        const double n = 3, k = 1.0 / 3.0, mu = 1;
        const double ps = p0(k, n + mu / (1.0 - k)).value();
        CHECK(theta(n, k, mu, 0.99 * ps) > 0.0);
    }
}

TEST_CASE("theta root residual across the parameter grid") {
    const std::vector<double> ks = {0.0, 0.2, 0.5, 2.0 / 3.0, 0.9};
    const std::vector<double> mus = {0.0, 0.5, 1.0, 2.0, 3.5};
    for (double k : ks)
        for (int n = 1; n <= 6; ++n)
            for (double mu : mus) {
                const ExtendedReal ps = p0(k, n + mu / (1.0 - k));
                if (!ps.is_finite()) continue;
                CHECK(std::abs(theta(n, k, mu, ps.value())) < 1e-9);
                // residual of the shifted quadratic itself
                const double neff = n + mu / (1.0 - k);
                const double a = 0.5 * (neff - 1.0) - 0.5 * k / (1.0 - k);
                const double b = -(0.5 * (neff + 1.0) + 1.5 * k / (1.0 - k));
                const double p = ps.value();
                CHECK(std::abs(a * p * p + b * p - 1.0) < 1e-10);
            }
}

TEST_CASE("classify: dominance by mu against mu0") {
    ModelParams eds{3, 2.0 / 3.0, 2.0, 3.0, 1.0, 0.1};
    auto rep = classify(eds);
    CHECK(rep.dominant == Dominant::P1);
    CHECK(rep.p1 == doctest::Approx(3.0));

    ModelParams strauss{3, 0.0, 0.0, 2.0, 1.0, 0.1};
    rep = classify(strauss);
    CHECK(rep.dominant == Dominant::P0);
    REQUIRE(rep.p0_shifted.is_finite());
    CHECK(rep.p0_shifted.value() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-13));

    ModelParams tie{3, 0.0, mu0(0.0, 3.0), 2.0, 1.0, 0.1};
    rep = classify(tie);
    CHECK(rep.dominant == Dominant::Tie);
}

TEST_CASE("lifespan_bound selects the matching regime") {
    // p < p1 branch: exponent -(2/(p-1) - (1-k)n)^{-1} = -1
    ModelParams a{1, 0.0, 0.0, 2.0, 1.0, 0.1};
    auto lb = lifespan_bound(a);
    CHECK(lb.regime == LifespanRegime::SubcriticalP1);
    CHECK(lb.form == LifespanForm::PowerLaw);
    CHECK(lb.exponent == doctest::Approx(-1.0).epsilon(1e-14));

    // critical p = p1, mu above mu0: Theorem 3, inner exponent -(p-1)
    ModelParams b{3, 2.0 / 3.0, 2.0, 3.0, 1.0, 0.1};
    lb = lifespan_bound(b);
    CHECK(lb.regime == LifespanRegime::CriticalP1);
    CHECK(lb.form == LifespanForm::ExpPowerLaw);
    CHECK(lb.exponent == doctest::Approx(-2.0).epsilon(1e-12));

    // critical p = p0 shifted: Theorem 2, inner exponent -p(p-1)
    const double pstr = 1.0 + std::sqrt(2.0);
    ModelParams c{3, 0.0, 0.0, pstr, 1.0, 0.1};
    lb = lifespan_bound(c);
    CHECK(lb.regime == LifespanRegime::CriticalP0);
    CHECK(lb.form == LifespanForm::ExpPowerLaw);
    CHECK(lb.exponent == doctest::Approx(-pstr * (pstr - 1.0)).epsilon(1e-12));
}

TEST_CASE("lifespan_bound rejects strictly supercritical p") {
    ModelParams sup{3, 0.0, 0.0, 4.0, 1.0, 0.1};  // p > max(p0, p1)
    CHECK_THROWS_AS(lifespan_bound(sup), std::invalid_argument);
}

TEST_CASE("dissipative transform maps mu -> 2-mu and is an involution") {
    ModelParams a{3, 0.5, 0.0, 2.0, 1.0, 0.1};
    auto tr = dissipative_transform(a);
    CHECK(tr.mu_prime == doctest::Approx(2.0));
    CHECK(tr.weight_exponent == doctest::Approx(a.p - 1.0));

    ModelParams b = a;
    b.mu = 1.0;  // self-dual point
    tr = dissipative_transform(b);
    CHECK(tr.mu_prime == doctest::Approx(1.0));
    CHECK(tr.weight_exponent == doctest::Approx(0.0));

    ModelParams c = a;
    c.mu = 2.0;
    tr = dissipative_transform(c);
    CHECK(tr.mu_prime == doctest::Approx(0.0));
    CHECK(tr.weight_exponent == doctest::Approx(-(c.p - 1.0)));

    // involution: applying the transform twice restores mu, the weight
    // exponent cancels, and the data shift cancels
    for (double mu : {0.0, 0.3, 1.0, 1.7, 2.5}) {
        ModelParams x{3, 0.25, mu, 1.5, 1.0, 0.1};
        auto t1 = dissipative_transform(x);
        ModelParams y = x;
        y.mu = t1.mu_prime;
        auto t2 = dissipative_transform(y);
        CHECK(t2.mu_prime == doctest::Approx(mu).epsilon(1e-15));
        CHECK(t1.weight_exponent + t2.weight_exponent == doctest::Approx(0.0));
        // v1 = u1 + s1 u0, w1 = v1 + s2 v0 = u1 + (s1+s2) u0 must return u1
        CHECK(t1.v1_shift + t2.v1_shift == doctest::Approx(0.0));
    }
}

TEST_CASE("ModelParams validation") {
    ModelParams bad{0, 0.0, 0.0, 2.0, 1.0, 0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {1, 1.0, 0.0, 2.0, 1.0, 0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {1, 0.0, -1.0, 2.0, 1.0, 0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {1, 0.0, 0.0, 1.0, 1.0, 0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {1, 0.0, 0.0, 2.0, 0.0, 0.1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {1, 0.0, 0.0, 2.0, 1.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
