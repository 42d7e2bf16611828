#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace vacuum::quad {

using Integrand = std::function<double(double)>;

// Requested accuracy and evaluation budget. A result is accepted once its error
// estimate is at most max(abs_tol, rel_tol * |value|).
struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    std::size_t max_evaluations = 2'000'000;

    // Throws PreconditionError unless both tolerances are positive and the budget is >= 100.
    void validate() const;

    double target(double value) const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

enum class EndpointSingularity { none, left, right, both };

/// Budget actually granted to a call: tol.max_evaluations, capped by the VACUUM_MAX_EVALS
/// environment variable when it is set.
std::size_t effective_budget(const Tolerance& tol);

/// Adaptive Gauss-Kronrod (7/15) bisection on [a, b]. Flagged endpoints are handled with
/// x = a + u^2 (or b - u^2), which removes inverse-square-root endpoint behaviour.
/// Throws EvaluationError if f returns a non-finite value.
QuadratureResult integrate_finite(const Integrand& f, double a, double b, const Tolerance& tol = {},
                                  EndpointSingularity singular = EndpointSingularity::none);

/// Integral over [a, inf) of an integrand bounded by C e^{-decay_rate x} for large x.
/// Panels have width 2/decay_rate; integration stops once the geometric tail bound from the
/// last panel is below the target.
QuadratureResult integrate_decaying(const Integrand& f, double a, double decay_rate, const Tolerance& tol = {});

// Partition point generator for lobe summation: breakpoint(0) is the lower limit and
// breakpoint(k) must increase without bound.
using Breakpoints = std::function<double(std::size_t)>;

struct LobeOptions {
    std::size_t max_lobes = 4000;
    // Subdivide the first lobe geometrically towards its left end; needed when the envelope
    // lives on a much shorter scale than the first oscillation.
    bool refine_first_lobe = true;
    EndpointSingularity first_lobe_singularity = EndpointSingularity::none;
};

/// Sums lobe integrals over consecutive breakpoints. Partial sums are accelerated with the
/// Levin u-transform; when lobes fall below the target the direct sum is used instead.
QuadratureResult integrate_lobes(const Integrand& f, const Breakpoints& breakpoint, const Tolerance& tol = {},
                                 const LobeOptions& options = {});

/// Integral over [0, inf) of g(w) J_order(freq w), order 0 or 1, partitioned at the zeros
/// of J_order.
QuadratureResult integrate_bessel_oscillatory(const Integrand& g, int order, double freq, const Tolerance& tol = {});

// Levin u-transform of the partial sums S_{n0}, ..., S_{n0+k}. `previous` is S_{n0-1}
// (0 when n0 = 0) so that every term a_j = S_j - S_{j-1} is available.
// Returns NaN when a remainder estimate vanishes.
double levin_u(std::span<const double> partial_sums, double previous, std::size_t first_index);

}  // namespace vacuum::quad
