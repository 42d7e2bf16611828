#include <gtest/gtest.h>

#include <cmath>

#include "frozen_values.hpp"
#include "vacuum/errors.hpp"
#include "vacuum/kernels.hpp"
#include "vacuum/mass_transform.hpp"
#include "vacuum/specfun.hpp"

namespace k = vacuum::kernels;
namespace tr = vacuum::transform;
namespace quad = vacuum::quad;
using tr::TransformMethod;
using vacuum::specfun::pi;

namespace {

const TransformMethod all_methods[] = {TransformMethod::derivative_form, TransformMethod::boundary_part_form,
                                       TransformMethod::shifted_variable_form};

double spectral(double L, double m, double t) { return k::spectral_trace(k::Spectrum::dirichlet_interval(L, m * m), t); }

TEST(ToMassive, FreeKernelReferenceValue) {
    const auto p = k::free_massless_profile(1, 0);
    EXPECT_NEAR(tr::to_massive(p, 1, 1), oracle::k1_at_1_over_pi, 1e-8 * oracle::k1_at_1_over_pi);
}

TEST(ToMassive, AllMethodsMatchClosedForm) {
    for (auto method : all_methods)
        for (int d : {1, 2, 3})
            for (double z : {0.0, 1.0})
                for (double m : {0.5, 2.0})
                    for (double t : {0.25, 4.0}) {
                        const double exact = k::free_massive_cylinder(d, z, m, t);
                        const double v = tr::to_massive(k::free_massless_profile(d, z), m, t, method);
                        EXPECT_NEAR(v, exact, 1e-8 * exact)
                            << tr::to_string(method) << " d=" << d << " z=" << z << " m=" << m << " t=" << t;
                    }
}

TEST(ToMassive, IntervalTraceMatchesSpectralSum) {
    const auto p = k::interval_trace_profile(1);
    EXPECT_NEAR(tr::to_massive(p, 1, 0.1), 2.689, 1e-3);
    EXPECT_NEAR(tr::to_massive(p, 1, 0.1), spectral(1, 1, 0.1), 1e-7);
    for (double m : {0.5, 1.0, 2.0})
        for (double t : {0.1, 0.5, 1.0}) {
            const double shifted = tr::to_massive(p, m, t, TransformMethod::shifted_variable_form);
            const double boundary = tr::to_massive(p, m, t, TransformMethod::boundary_part_form);
            EXPECT_NEAR(shifted, boundary, 1e-8);
            EXPECT_NEAR(shifted, spectral(1, m, t), 1e-9);
        }
}

TEST(ToMassive, HalfLineMatchesImageSum) {
    const auto p = k::halfline_profile(1, 0.7, 1.2);
    for (double m : {0.5, 1.5})
        for (double t : {0.3, 1.0}) EXPECT_NEAR(tr::to_massive(p, m, t), k::image_sum_halfline(0.7, 1.2, 1, m, t), 1e-9);
}

TEST(ToMassive, ZeroMassIsIdentity) {
    const std::vector<k::KernelProfile> profiles{k::free_massless_profile(1, 0), k::free_massless_profile(3, 1),
                                                 k::interval_trace_profile(1), k::interval_bracket_profile(2),
                                                 k::halfline_profile(2, 1, 1)};
    for (const auto& p : profiles)
        for (double t : {0.2, 1.0}) {
            EXPECT_EQ(tr::to_massive(p, 0, t), p(t));
            EXPECT_NEAR(tr::to_massive(p, 1e-8, t), p(t), 1e-10 * std::max(1.0, std::fabs(p(t))));
        }
    // A non-decaying constant moves at first order in m: c e^{-m t}.
    const auto c = k::constant_profile(-0.5);
    EXPECT_NEAR(tr::to_massive(c, 1e-12, 1.0), -0.5, 1e-12);
}

TEST(ToMassive, ConstantProfileMapsToExponential) {
    EXPECT_NEAR(tr::to_massive(k::constant_profile(-0.5), 1.0, 0.5), -0.5 * std::exp(-0.5), 1e-12);
}

TEST(ToMassive, BoundaryConditionAtLargeT) {
    EXPECT_LT(std::fabs(tr::to_massive(k::interval_trace_profile(1), 1, 20)), 1e-8);
}

TEST(ToMassive, Preconditions) {
    EXPECT_THROW(tr::to_massive(k::free_massive_profile(1, 0, 1), 1, 1), vacuum::PreconditionError);
    const k::KernelProfile undecayed(k::Geometry::free_space(1, 0), 0, {[](double t) { return 1 / t; }});
    EXPECT_THROW(tr::to_massive(undecayed, 1, 1), vacuum::PreconditionError);
    EXPECT_THROW(tr::to_massive(undecayed, 1, 1, TransformMethod::derivative_form), vacuum::PreconditionError);
    EXPECT_THROW(tr::to_massive(k::interval_trace_profile(1), 1, 0), vacuum::DomainError);
    EXPECT_THROW(tr::to_massive(k::interval_trace_profile(1), -1, 1), vacuum::DomainError);
}

TEST(ToMassive, TinyBudgetReportsNonConvergence) {
    const auto p = k::free_massless_profile(1, 0);
    const quad::Tolerance tight{1e-16, 1e-16, 100};
    const auto r = tr::to_massive_result(p, 1, 1, TransformMethod::shifted_variable_form, tight);
    EXPECT_FALSE(r.converged);
    EXPECT_THROW(tr::to_massive(p, 1, 1, TransformMethod::shifted_variable_form, tight), vacuum::ConvergenceError);
}

TEST(ToMassive, MethodNames) {
    for (auto m : all_methods) EXPECT_EQ(tr::parse_method(tr::to_string(m)), m);
    EXPECT_EQ(tr::parse_method("shifted"), TransformMethod::shifted_variable_form);
    EXPECT_EQ(tr::parse_method("boundary"), TransformMethod::boundary_part_form);
    EXPECT_EQ(tr::parse_method("derivative"), TransformMethod::derivative_form);
    EXPECT_ANY_THROW(tr::parse_method("fourier"));
}

TEST(Subtracted, SplitReassemblesFullTransform) {
    const auto full = k::interval_trace_profile(1);
    const auto free = k::interval_free_part_profile(1);
    const auto r = tr::to_massive_subtracted(full, free, 1, 0.1);
    EXPECT_NEAR(r.total(), tr::to_massive(full, 1, 0.1), 1e-8);
    EXPECT_NEAR(r.free_result, std::cyl_bessel_k(1.0, 0.1) / pi, 1e-15);

    const auto zero = tr::to_massive_subtracted(full, free, 0, 0.3);
    EXPECT_NEAR(zero.free_result, 1 / (pi * 0.3), 1e-15);
    EXPECT_NEAR(zero.bracket_result, k::dirichlet_interval_bracket(1, 0.3), 1e-15);

    EXPECT_THROW(tr::to_massive_subtracted(full, k::interval_bracket_profile(1), 1, 0.1), vacuum::PreconditionError);
}

TEST(PdeResidual, ClosedFormsAndSpectralSum) {
    const tr::MassiveKernel free1 = [](double mu, double t) { return k::free_massive_cylinder(1, 0, std::sqrt(mu), t); };
    const tr::MassiveKernel free3 = [](double mu, double t) { return k::free_massive_cylinder(3, 0, std::sqrt(mu), t); };
    const tr::MassiveKernel interval = [](double mu, double t) {
        return k::spectral_trace(k::Spectrum::dirichlet_interval(1, mu), t);
    };
    EXPECT_LT(tr::pde_residual(free1, 1, 1, 1e-4, 1e-4), 1e-6);
    EXPECT_LT(tr::pde_residual(free3, 4, 0.5, 1e-4, 1e-4), 1e-5);
    EXPECT_LT(tr::pde_residual(interval, 1, 0.5, 1e-4, 1e-4), 1e-5);
}

TEST(PdeResidual, DetectsAWrongKernel) {
    const tr::MassiveKernel wrong = [](double mu, double t) { return std::exp(-t * mu); };
    EXPECT_GT(tr::pde_residual(wrong, 1, 1, 1e-4, 1e-4), 1e-2);
}

TEST(PdeResidual, TransformOutputSatisfiesTheEquation) {
    const auto p = k::interval_trace_profile(1);
    const quad::Tolerance tight{1e-15, 1e-13, 2'000'000};
    const tr::MassiveKernel kernel = [&](double mu, double t) {
        return tr::to_massive(p, std::sqrt(mu), t, TransformMethod::shifted_variable_form, tight);
    };
    for (double mu : {0.5, 2.0})
        for (double t : {0.3, 1.0}) EXPECT_LT(tr::pde_residual(kernel, mu, t, 1e-4, 1e-4), 1e-5);
}

TEST(PdeResidual, StepErrors) {
    const tr::MassiveKernel f = [](double, double t) { return t; };
    EXPECT_THROW(tr::pde_residual(f, 1, 1, 0, 1e-4), vacuum::DomainError);
    EXPECT_THROW(tr::pde_residual(f, 1, 1, 1e-4, -1), vacuum::DomainError);
    EXPECT_THROW(tr::pde_residual(f, 1, 1, 1e-30, 1e-4), vacuum::DomainError);
    EXPECT_THROW(tr::pde_residual(f, 1, 1e-5, 1e-4, 1e-4), vacuum::DomainError);
}

TEST(LaplaceConsistency, BothSidesAgree) {
    const auto a = tr::laplace_consistency(k::free_massless_profile(1, 0), 1, 1);
    EXPECT_NEAR(a.lhs, a.rhs, 1e-5);
    const auto b = tr::laplace_consistency(k::interval_trace_profile(1), 2, 0.5);
    EXPECT_NEAR(b.lhs, b.rhs, 1e-5);
    const auto c = tr::laplace_consistency(k::interval_trace_profile(1), 1, 20);
    EXPECT_LT(std::fabs(c.rhs), 1e-8);
}

}  // namespace
