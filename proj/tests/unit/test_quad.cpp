#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "frozen_values.hpp"
#include "vacuum/errors.hpp"
#include "vacuum/quad.hpp"
#include "vacuum/specfun.hpp"

namespace q = vacuum::quad;
using vacuum::specfun::pi;

namespace {

TEST(IntegrateFinite, Basics) {
    const auto a = q::integrate_finite([](double x) { return x * x; }, 0, 1);
    EXPECT_TRUE(a.converged);
    EXPECT_NEAR(a.value, 1.0 / 3, 1e-12);
    EXPECT_GT(a.evaluations, 0u);
    EXPECT_LE(a.error_estimate, q::Tolerance{}.target(a.value));

    const auto b = q::integrate_finite([](double x) { return 1 / std::sqrt(x); }, 0, 1, {},
                                       q::EndpointSingularity::left);
    EXPECT_TRUE(b.converged);
    EXPECT_NEAR(b.value, 2.0, 1e-10);

    EXPECT_NEAR(q::integrate_finite([](double x) { return std::sin(x); }, 0, pi).value, 2.0, 1e-12);
}

TEST(IntegrateFinite, RightAndBothSingularEndpoints) {
    EXPECT_NEAR(q::integrate_finite([](double x) { return 1 / std::sqrt(1 - x); }, 0, 1, {},
                                    q::EndpointSingularity::right).value, 2.0, 1e-10);
    EXPECT_NEAR(q::integrate_finite([](double x) { return 1 / std::sqrt(x * (1 - x)); }, 0, 1, {},
                                    q::EndpointSingularity::both).value, pi, 1e-9);
}

TEST(IntegrateFinite, Errors) {
    EXPECT_THROW(q::integrate_finite([](double) { return std::nan(""); }, 0, 1), vacuum::EvaluationError);
    EXPECT_THROW(q::integrate_finite([](double x) { return x; }, 1, 0), vacuum::PreconditionError);
    EXPECT_THROW(q::integrate_finite([](double x) { return x; }, 0, 1, {0.0, 1e-9, 1000}), vacuum::PreconditionError);
    EXPECT_THROW(q::integrate_finite([](double x) { return x; }, 0, 1, {1e-9, 1e-9, 10}), vacuum::PreconditionError);
}

TEST(IntegrateFinite, BudgetExhaustionReturnsBestEstimate) {
    const auto r = q::integrate_finite([](double x) { return std::sin(1 / x); }, 1e-6, 1, {1e-15, 1e-15, 200});
    EXPECT_FALSE(r.converged);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_LE(r.evaluations, 200u + 30u);
}

TEST(IntegrateFinite, Additivity) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto f = [](double x) { return std::exp(-x) * std::cos(3 * x); };
    for (int i = 0; i < 50; ++i) {
        const double a = -2 + 2 * u(rng), c = 1 + 3 * u(rng), b = a + (c - a) * u(rng);
        const auto ab = q::integrate_finite(f, a, b), bc = q::integrate_finite(f, b, c), ac = q::integrate_finite(f, a, c);
        EXPECT_LE(std::fabs(ab.value + bc.value - ac.value),
                  2 * (ab.error_estimate + bc.error_estimate + ac.error_estimate) + 1e-15);
    }
}

TEST(IntegrateFinite, ErrorEstimatesAreHonest) {
    struct Case {
        q::Integrand f;
        double a, b, exact;
        q::EndpointSingularity s = q::EndpointSingularity::none;
    };
    const std::vector<Case> battery{
        {[](double x) { return std::exp(x); }, 0, 1, std::exp(1.0) - 1},
        {[](double x) { return 1 / (1 + x * x); }, 0, 1, pi / 4},
        {[](double x) { return std::log(x); }, 0, 1, -1, q::EndpointSingularity::left},
        {[](double x) { return std::sqrt(x); }, 0, 1, 2.0 / 3},
        {[](double x) { return std::cos(20 * x); }, 0, pi / 2, std::sin(10 * pi) / 20},
        {[](double x) { return x * std::sin(x); }, 0, pi, pi},
        {[](double x) { return 1 / (x + 0.01); }, 0, 1, std::log(101.0)},
        {[](double x) { return std::exp(-x * x); }, -3, 3, std::sqrt(pi) * std::erf(3.0)},
        {[](double x) { return std::pow(x, 0.25); }, 0, 1, 0.8},
        {[](double x) { return std::fabs(x - 0.3); }, 0, 1, 0.5 * (0.09 + 0.49)},
    };
    int honest = 0;
    for (const auto& c : battery) {
        const auto r = q::integrate_finite(c.f, c.a, c.b, {1e-11, 1e-11, 200000}, c.s);
        if (std::fabs(r.value - c.exact) <= 5 * r.error_estimate + 1e-15) ++honest;
    }
    EXPECT_GE(honest, 9);
}

TEST(IntegrateDecaying, Basics) {
    EXPECT_NEAR(q::integrate_decaying([](double x) { return std::exp(-x); }, 0, 1).value, 1.0, 1e-10);
    EXPECT_NEAR(q::integrate_decaying([](double x) { return x * std::exp(-2 * x); }, 0, 2).value, 0.25, 1e-10);
    EXPECT_NEAR(q::integrate_decaying([](double x) { return std::exp(-x * x); }, 0, 1).value, std::sqrt(pi) / 2, 1e-10);
    EXPECT_THROW(q::integrate_decaying([](double x) { return x; }, 0, 0), vacuum::PreconditionError);
}

TEST(BesselOscillatory, LaplaceTransforms) {
    const auto r0 = q::integrate_bessel_oscillatory([](double w) { return std::exp(-w); }, 0, 1.0);
    EXPECT_TRUE(r0.converged);
    EXPECT_NEAR(r0.value, oracle::laplace_j0, 1e-10);
    const auto r1 = q::integrate_bessel_oscillatory([](double w) { return std::exp(-w); }, 1, 1.0);
    EXPECT_NEAR(r1.value, oracle::laplace_j1, 1e-10);
}

TEST(BesselOscillatory, AlgebraicEnvelopeGivesK0) {
    // int_0^inf w J0(m w) / (w^2 + 1) dw = K0(m)
    for (double m : {0.5, 1.0, 2.0}) {
        const auto r = q::integrate_bessel_oscillatory([](double w) { return w / (w * w + 1); }, 0, m,
                                                       {1e-12, 1e-11, 2'000'000});
        EXPECT_NEAR(r.value, std::cyl_bessel_k(0.0, m), 1e-9) << m;
    }
}

TEST(BesselOscillatory, SmallFrequencyRecoversPlainIntegral) {
    const auto r = q::integrate_bessel_oscillatory([](double w) { return std::exp(-w); }, 0, 1e-4);
    EXPECT_NEAR(r.value, 1.0, 1e-6);
}

TEST(BesselOscillatory, Preconditions) {
    EXPECT_THROW(q::integrate_bessel_oscillatory([](double) { return 1.0; }, 2, 1.0), vacuum::PreconditionError);
    EXPECT_THROW(q::integrate_bessel_oscillatory([](double) { return 1.0; }, 0, 0.0), vacuum::PreconditionError);
}

TEST(LevinU, AcceleratesAlternatingSeries) {
    // ln 2 = 1 - 1/2 + 1/3 - ...
    std::vector<double> partial;
    double s = 0;
    for (int k = 1; k <= 12; ++k) {
        s += (k % 2 ? 1.0 : -1.0) / k;
        partial.push_back(s);
    }
    EXPECT_NEAR(q::levin_u(partial, 0.0, 0), std::log(2.0), 1e-10);
}

TEST(Budget, EnvironmentCapsEvaluations) {
    ASSERT_EQ(setenv("VACUUM_MAX_EVALS", "500", 1), 0);
    EXPECT_EQ(q::effective_budget({1e-10, 1e-9, 2'000'000}), 500u);
    const auto r = q::integrate_finite([](double x) { return std::sin(1 / x); }, 1e-8, 1, {1e-15, 1e-15, 2'000'000});
    EXPECT_FALSE(r.converged);
    EXPECT_LE(r.evaluations, 600u);
    unsetenv("VACUUM_MAX_EVALS");
    EXPECT_EQ(q::effective_budget({1e-10, 1e-9, 2'000'000}), 2'000'000u);
}

}  // namespace
