#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "mmcache/quadrature.hpp"

using namespace mmcache;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Quadrature, PolynomialsAreExactOnOnePanel) {
    // GK15 integrates degree <= 22 exactly.
    auto r = integrate([](double x) { return std::pow(x, 10) - 3 * x * x + 1; }, -1.0, 2.0);
    const double exact = (std::pow(2.0, 11) + 1.0) / 11.0 - (8.0 + 1.0) + 3.0;
    EXPECT_NEAR(r.value, exact, 1e-12 * std::abs(exact));
    EXPECT_EQ(r.evaluations, 15);
}

TEST(Quadrature, SemiInfiniteKnownIntegrals) {
    EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, kInf).value, 1.0, 1e-10);
    EXPECT_NEAR(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, kInf).value, std::numbers::pi / 2, 1e-9);
    QuadratureSpec s;
    s.scale = 100.0;
    EXPECT_NEAR(integrate([](double x) { return x * std::exp(-x / 100.0); }, 0.0, kInf, s).value, 1e4, 1e-5);
}

TEST(Quadrature, MatchesBoostOnPeakedIntegrand) {
    auto f = [](double r) { return 2 * std::numbers::pi * r * std::exp(-0.008 * r) / (1.0 + std::pow(r / 30.0, 4)); };
    QuadratureSpec s;
    s.scale = 30.0;
    s.rel_tol = 1e-11;
    const double ours = integrate(f, 0.0, kInf, s).value;
    boost::math::quadrature::exp_sinh<double> es;
    const double ref = es.integrate(f, 0.0, kInf);
    EXPECT_NEAR(ours, ref, 1e-9 * ref);
}

TEST(Quadrature, FiniteCompactifiedAgreesWithIdentity) {
    auto f = [](double x) { return std::sin(x) * std::exp(-x / 5); };
    QuadratureSpec c;
    c.transform = Transform::RationalCompactify;
    c.scale = 3.0;
    const double a = integrate(f, 0.5, 12.0).value;
    const double b = integrate(f, 0.5, 12.0, c).value;
    const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.5, 12.0, 15, 1e-13);
    EXPECT_NEAR(a, ref, 1e-10);
    EXPECT_NEAR(b, ref, 1e-10);
}

TEST(Quadrature, ReportsErrorBoundWithinTolerance) {
    QuadratureSpec s;
    s.rel_tol = 1e-6;
    auto r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, s);
    EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-6);
    EXPECT_LE(r.error, 1e-6 * r.value);
}

TEST(Quadrature, DivergentIntegralThrowsWithEstimate) {
    QuadratureSpec s;
    s.max_depth = 12;
    try {
        integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, s);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_GT(e.estimate(), 0.0);
        EXPECT_GT(e.error_bound(), 0.0);
    }
}

TEST(Quadrature, RejectsBadBounds) {
    auto f = [](double) { return 1.0; };
    EXPECT_THROW(integrate(f, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(integrate(f, std::nan(""), 1.0), std::invalid_argument);
    EXPECT_EQ(integrate(f, 2.0, 2.0).value, 0.0);
}
