#pragma once

#include <functional>
#include <string_view>

#include "vacuum/kernels.hpp"
#include "vacuum/quad.hpp"

namespace vacuum::transform {

// Three equivalent integral representations of the massless-to-massive map.
enum class TransformMethod {
    derivative_form,      // J0 weight against d/dv (T0(v)/v); needs an analytic derivative
    boundary_part_form,   // integral over v in (t, inf) against J1(m sqrt(v^2 - t^2))
    shifted_variable_form // same integral in w = sqrt(v^2 - t^2); the default
};

std::string_view to_string(TransformMethod method);
// Accepts "derivative", "boundary", "shifted" (and the full enumerator names).
TransformMethod parse_method(std::string_view name);

/// T(m^2, t) from a massless profile, with the quadrature diagnostics. Never throws on
/// non-convergence; check `converged`.
quad::QuadratureResult to_massive_result(const kernels::KernelProfile& profile, double m, double t,
                                         TransformMethod method = TransformMethod::shifted_variable_form,
                                         const quad::Tolerance& tol = {});

/// T(m^2, t). Throws PreconditionError when the profile is massive or lacks decay metadata,
/// ConvergenceError when the quadrature does not meet tol.
double to_massive(const kernels::KernelProfile& profile, double m, double t,
                  TransformMethod method = TransformMethod::shifted_variable_form, const quad::Tolerance& tol = {});

struct SubtractedResult {
    double free_result = 0.0;     // closed-form transform of the free part
    double bracket_result = 0.0;  // numerical transform of profile - free part
    double total() const { return free_result + bracket_result; }
};

/// Splits the profile into a part with a known massive counterpart and a remainder, and
/// transforms only the remainder numerically.
SubtractedResult to_massive_subtracted(const kernels::KernelProfile& profile, const kernels::KernelProfile& free_part,
                                       double m, double t, const quad::Tolerance& tol = {},
                                       TransformMethod method = TransformMethod::shifted_variable_form);

// (mu, t) -> T(mu, t)
using MassiveKernel = std::function<double(double, double)>;

/// |d^2/(dmu dt) (T/t) - T/2| from a centred four-point stencil with steps h_mu, h_t.
/// Throws DomainError when a step is not representable at (mu, t) or leaves the domain.
double pde_residual(const MassiveKernel& kernel, double mu, double t, double h_mu, double h_t);

struct LaplaceComparison {
    double lhs = 0.0;  // int_0^inf e^{-s mu} T(mu, t)/t dmu, by quadrature over transformed values
    double rhs = 0.0;  // closed expression in the massless profile alone
};

/// Laplace-domain diagnostic; both sides are computed independently.
LaplaceComparison laplace_consistency(const kernels::KernelProfile& profile, double s, double t,
                                      const quad::Tolerance& tol = {});

}  // namespace vacuum::transform
