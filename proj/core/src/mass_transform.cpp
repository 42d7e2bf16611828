#include "vacuum/mass_transform.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "vacuum/errors.hpp"
#include "vacuum/specfun.hpp"

namespace vacuum::transform {

namespace {

using kernels::KernelProfile;

void check_inputs(const KernelProfile& profile, double m, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("to_massive: t must be positive");
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("to_massive: m must be >= 0");
    if (profile.mass_squared() != 0.0) throw PreconditionError("to_massive: profile must be massless");
    if (!profile.decay()) throw PreconditionError("to_massive: profile has no decay metadata");
}

// m J1(m w) / w, continuous at w = 0.
double j1_over_w(double m, double w) {
    const double x = m * w;
    if (x < 1e-8) return 0.5 * m * m;
    return m * specfun::bessel_j1(x) / w;
}

quad::QuadratureResult shifted(const KernelProfile& profile, double m, double t, const quad::Tolerance& tol) {
    auto envelope = [&](double w) {
        const double r = std::hypot(w, t);
        return m * t * profile(r) / r;
    };
    auto r = quad::integrate_bessel_oscillatory(envelope, 1, m, tol);
    r.value = profile(t) - r.value;
    return r;
}

quad::QuadratureResult boundary_part(const KernelProfile& profile, double m, double t, const quad::Tolerance& tol) {
    auto integrand = [&](double v) {
        // (v - t)(v + t) keeps w accurate near the lower limit.
        const double w = std::sqrt(std::max(0.0, (v - t) * (v + t)));
        return t * j1_over_w(m, w) * profile(v);
    };
    auto breakpoint = [m, t](std::size_t k) {
        if (k == 0) return t;
        const double w = specfun::bessel_zero(1, k) / m;
        return std::sqrt(w * w + t * t);
    };
    quad::LobeOptions options;
    options.first_lobe_singularity = quad::EndpointSingularity::left;
    auto r = quad::integrate_lobes(integrand, breakpoint, tol, options);
    r.value = profile(t) - r.value;
    return r;
}

quad::QuadratureResult derivative_form(const KernelProfile& profile, double m, double t, const quad::Tolerance& tol) {
    if (!profile.has_derivative())
        throw PreconditionError("to_massive: the derivative form needs a profile with an analytic derivative");
    auto envelope = [&](double w) {
        const double v = std::hypot(w, t);
        const double d = profile.derivative(v) / v - profile(v) / (v * v);
        return -t * d * w / v;
    };
    return quad::integrate_bessel_oscillatory(envelope, 0, m, tol);
}

}  // namespace

std::string_view to_string(TransformMethod method) {
    switch (method) {
        case TransformMethod::derivative_form: return "derivative";
        case TransformMethod::boundary_part_form: return "boundary";
        case TransformMethod::shifted_variable_form: return "shifted";
    }
    return "unknown";
}

TransformMethod parse_method(std::string_view name) {
    if (name == "derivative" || name == "derivative_form") return TransformMethod::derivative_form;
    if (name == "boundary" || name == "boundary_part_form") return TransformMethod::boundary_part_form;
    if (name == "shifted" || name == "shifted_variable_form") return TransformMethod::shifted_variable_form;
    throw PreconditionError("unknown transform method '" + std::string(name) + "'");
}

quad::QuadratureResult to_massive_result(const KernelProfile& profile, double m, double t, TransformMethod method,
                                         const quad::Tolerance& tol) {
    check_inputs(profile, m, t);
    tol.validate();
    if (m == 0.0) return {profile(t), 0.0, 1, true};
    switch (method) {
        case TransformMethod::derivative_form: return derivative_form(profile, m, t, tol);
        case TransformMethod::boundary_part_form: return boundary_part(profile, m, t, tol);
        case TransformMethod::shifted_variable_form: return shifted(profile, m, t, tol);
    }
    return {};
}

double to_massive(const KernelProfile& profile, double m, double t, TransformMethod method,
                  const quad::Tolerance& tol) {
    const auto r = to_massive_result(profile, m, t, method, tol);
    if (!r.converged) {
        throw ConvergenceError("to_massive: quadrature did not converge (m=" + std::to_string(m) +
                                   ", t=" + std::to_string(t) + ")",
                               r.value, r.error_estimate);
    }
    return r.value;
}

SubtractedResult to_massive_subtracted(const KernelProfile& profile, const KernelProfile& free_part, double m,
                                       double t, const quad::Tolerance& tol, TransformMethod method) {
    check_inputs(profile, m, t);
    if (!free_part.has_massive_counterpart())
        throw PreconditionError("to_massive_subtracted: free part has no closed-form massive counterpart");
    // The remainder inherits the slower of the two decays; an algebraic free part dominates.
    std::optional<kernels::Decay> decay = profile.decay();
    if (free_part.decay() && std::holds_alternative<kernels::AlgebraicDecay>(*free_part.decay()))
        decay = free_part.decay();
    const KernelProfile bracket = profile.minus(free_part, decay);
    return {free_part.massive_counterpart(m, t), to_massive(bracket, m, t, method, tol)};
}

double pde_residual(const MassiveKernel& kernel, double mu, double t, double h_mu, double h_t) {
    if (!(h_mu > 0.0) || !(h_t > 0.0)) throw DomainError("pde_residual: steps must be positive");
    if (!(mu > 0.0) || !(t > 0.0)) throw DomainError("pde_residual: mu and t must be positive");
    if (mu + h_mu == mu || mu - h_mu == mu || t + h_t == t || t - h_t == t)
        throw DomainError("pde_residual: step underflows at this (mu, t)");
    if (mu - h_mu < 0.0 || t - h_t <= 0.0) throw DomainError("pde_residual: stencil leaves the domain");

    auto ratio = [&](double m2, double tt) { return kernel(m2, tt) / tt; };
    const double mixed = (ratio(mu + h_mu, t + h_t) - ratio(mu + h_mu, t - h_t) - ratio(mu - h_mu, t + h_t) +
                          ratio(mu - h_mu, t - h_t)) /
                         (4.0 * h_mu * h_t);
    return std::fabs(mixed - 0.5 * kernel(mu, t));
}

LaplaceComparison laplace_consistency(const KernelProfile& profile, double s, double t, const quad::Tolerance& tol) {
    if (!(s > 0.0) || !(t > 0.0)) throw DomainError("laplace_consistency: s and t must be positive");
    if (!profile.decay()) throw PreconditionError("laplace_consistency: profile has no decay metadata");
    tol.validate();

    // mu = m^2 turns the e^{-s mu} weight into a Gaussian in m.
    quad::Tolerance inner = tol;
    inner.abs_tol = tol.abs_tol * 0.01;
    inner.rel_tol = tol.rel_tol * 0.01;
    auto lhs_integrand = [&](double m) {
        const double weight = std::exp(-s * m * m);
        if (weight == 0.0) return 0.0;
        return 2.0 * m * weight * to_massive(profile, m, t, TransformMethod::shifted_variable_form, inner) / t;
    };
    const auto lhs = quad::integrate_decaying(lhs_integrand, 0.0, 1.0 / std::sqrt(s), tol);

    // Combined exponent (t^2 - v^2)/(4s) avoids overflow of e^{t^2/4s}.
    auto rhs_integrand = [&](double v) { return std::exp((t - v) * (t + v) / (4.0 * s)) * profile(v); };
    const double rate = std::max(t / (2.0 * s), 0.5 / std::sqrt(s));
    const auto tail = quad::integrate_decaying(rhs_integrand, t, rate, tol);

    if (!lhs.converged || !tail.converged) {
        throw ConvergenceError("laplace_consistency: quadrature did not converge", lhs.value,
                               lhs.error_estimate + tail.error_estimate);
    }
    const double rhs = profile(t) / (s * t) - tail.value / (2.0 * s * s);
    return {lhs.value, rhs};
}

}  // namespace vacuum::transform
