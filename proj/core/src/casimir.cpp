#include "vacuum/casimir.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "least_squares.hpp"
#include "vacuum/kernels.hpp"
#include "vacuum/specfun.hpp"

namespace vacuum::casimir {

namespace {

using specfun::euler_gamma;
using specfun::pi;

void require_length(double length, const char* who) {
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError(std::string(who) + ": L must be positive");
}

void require_mass(double m, const char* who, bool allow_zero) {
    const bool ok = allow_zero ? m >= 0.0 : m > 0.0;
    if (!ok || !std::isfinite(m))
        throw DomainError(std::string(who) + (allow_zero ? ": m must be >= 0" : ": m must be positive"));
}

// (coth(u/2) - 2/u) / u, written with expm1; series below u = 0.1.
double coth_envelope(double u) {
    if (u < 0.1) {
        const double u2 = u * u;
        return 1.0 / 6.0 + u2 * (-1.0 / 360.0 + u2 * (1.0 / 15120.0 - u2 / 604800.0));
    }
    return (1.0 + 2.0 / std::expm1(u) - 2.0 / u) / u;
}

// t Tr T(0, t) continued through t = 0: (L/pi) x / expm1(x) with x = pi t / L.
double t_times_trace(double length, double t) {
    const double x = pi * t / length;
    if (x == 0.0) return length / pi;
    return (length / pi) * x / std::expm1(x);
}

// -(m / 2 pi) sum_s K1(2 m L s) / s, the force-relevant energy.
double k1_series(double m, double length, double tol) {
    const double step = 2.0 * m * length;
    const double ratio_bound = -std::expm1(-step);
    constexpr std::size_t max_terms = 1'000'000;
    double sum = 0.0;
    for (std::size_t s = 1;; ++s) {
        const double ds = static_cast<double>(s);
        sum += specfun::bessel_k(1.0, step * ds) / ds;
        // e^x K1(x) decreases, so later terms shrink at least geometrically by e^{-2 m L}.
        const double next = specfun::bessel_k(1.0, step * (ds + 1.0)) / (ds + 1.0);
        const double tail = next / ratio_bound;
        if (m / (2.0 * pi) * tail < tol) break;
        if (s >= max_terms) {
            throw ConvergenceError("mass_casimir_sum: more than 1e6 terms needed; use the integral form",
                                   -m / (2.0 * pi) * sum, m / (2.0 * pi) * tail);
        }
    }
    return -m / (2.0 * pi) * sum;
}

}  // namespace

std::string to_string(MassRoute route) {
    switch (route) {
        case MassRoute::none: return "none";
        case MassRoute::integral: return "integral";
        case MassRoute::sum: return "sum";
    }
    return "unknown";
}

double massless_casimir_energy(double length) {
    require_length(length, "massless_casimir_energy");
    return -pi / (24.0 * length);
}

double massless_casimir_from_trace_expansion(double length) {
    require_length(length, "massless_casimir_from_trace_expansion");
    // Second central difference of t Tr T at 0, then two Richardson steps in h^2.
    auto second_coeff = [length](double h) {
        return (t_times_trace(length, h) + t_times_trace(length, -h) - 2.0 * t_times_trace(length, 0.0)) /
               (2.0 * h * h);
    };
    const double h = 0.05 * length;
    const double a0 = second_coeff(h), a1 = second_coeff(h / 2), a2 = second_coeff(h / 4);
    const double b0 = (4.0 * a1 - a0) / 3.0, b1 = (4.0 * a2 - a1) / 3.0;
    const double c2 = (16.0 * b1 - b0) / 15.0;
    return -0.5 * c2;
}

double boundary_interaction_energy(double m) {
    require_mass(m, "boundary_interaction_energy", true);
    return m == 0.0 ? 0.0 : -m / 4.0;
}

double boundary_interaction_energy_numeric(double m, double t) {
    require_mass(m, "boundary_interaction_energy_numeric", true);
    if (!(t > 0.0)) throw DomainError("boundary_interaction_energy_numeric: t must be positive");
    auto f = [m](double s) { return -std::expm1(-m * s); };
    auto slope = [&](double at) {
        const double h = 0.5 * at;
        return (f(at + h) - f(at - h)) / (2.0 * h);
    };
    // The slope at t carries an O(m^2 t) offset from the limit; one Richardson step removes it.
    return -0.25 * (2.0 * slope(0.5 * t) - slope(t));
}

double mass_casimir_integral(double m, double length, const quad::Tolerance& tol) {
    require_mass(m, "mass_casimir_integral", false);
    require_length(length, "mass_casimir_integral");
    const auto r = quad::integrate_bessel_oscillatory(coth_envelope, 1, m * length / pi, tol);
    if (!r.converged) {
        throw ConvergenceError("mass_casimir_integral: quadrature did not converge", m / 4.0 * r.value,
                               m / 4.0 * r.error_estimate);
    }
    return m / 4.0 * r.value;
}

double mass_casimir_sum(double m, double length, double tol) {
    require_mass(m, "mass_casimir_sum", false);
    require_length(length, "mass_casimir_sum");
    return k1_series(m, length, tol) + pi / (24.0 * length);
}

double mass_casimir(double m, double length, MassRoute* route, const quad::Tolerance& tol) {
    require_mass(m, "mass_casimir", true);
    require_length(length, "mass_casimir");
    MassRoute chosen = MassRoute::none;
    double value = 0.0;
    if (m > 0.0) {
        chosen = m * length >= sum_switchover ? MassRoute::sum : MassRoute::integral;
        value = chosen == MassRoute::sum ? mass_casimir_sum(m, length, 0.01 * tol.abs_tol)
                                         : mass_casimir_integral(m, length, tol);
    }
    if (route) *route = chosen;
    return value;
}

EnergyBreakdown energy_breakdown(double m, double length, const quad::Tolerance& tol) {
    require_mass(m, "energy_breakdown", true);
    require_length(length, "energy_breakdown");
    EnergyBreakdown b;
    b.mass = m;
    b.length = length;
    b.divergent_t2_coeff = length / (2.0 * pi);
    b.divergent_log_coeff = -m * m * length / (4.0 * pi);
    b.divergent_const = -(2.0 * euler_gamma + 1.0) * m * m * length / (8.0 * pi);
    b.massless_casimir = massless_casimir_energy(length);
    b.boundary_constant = boundary_interaction_energy(m);
    b.mass_casimir = mass_casimir(m, length, &b.route, tol);
    b.total_renormalized = b.massless_casimir + b.boundary_constant + b.mass_casimir;
    return b;
}

double force_relevant_energy(double m, double length, const quad::Tolerance& tol) {
    require_mass(m, "force_relevant_energy", true);
    require_length(length, "force_relevant_energy");
    // On the sum route the pi/(24L) offsets cancel exactly, so skip them.
    if (m * length >= sum_switchover) return k1_series(m, length, 1e-4 * tol.abs_tol);
    return massless_casimir_energy(length) + mass_casimir(m, length, nullptr, tol);
}

double interval_trace_t1_coefficient(double m, double length, const quad::Tolerance& tol) {
    const double total = energy_breakdown(m, length, tol).total_renormalized;
    if (m == 0.0) return -2.0 * total;
    const double mu = m * m;
    return -2.0 * total + mu * length / (2.0 * pi) * std::log(0.5 * m) +
           (2.0 * euler_gamma - 1.0) * mu * length / (4.0 * pi);
}

std::vector<double> default_t_sequence(double length) {
    require_length(length, "default_t_sequence");
    std::vector<double> t(7);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = std::ldexp(0.1 * length, -static_cast<int>(k));
    return t;
}

RegularizedEnergyReport regularized_energy_check(double m, double length, const std::vector<double>& t_sequence,
                                                 double tol) {
    require_mass(m, "regularized_energy_check", true);
    require_length(length, "regularized_energy_check");
    if (t_sequence.size() < 7) throw PreconditionError("regularized_energy_check: need at least 7 values of t");
    for (std::size_t i = 0; i < t_sequence.size(); ++i) {
        if (!(t_sequence[i] > 0.0)) throw DomainError("regularized_energy_check: t values must be positive");
        if (i > 0 && !(t_sequence[i] < t_sequence[i - 1]))
            throw PreconditionError("regularized_energy_check: t sequence must decrease");
    }

    RegularizedEnergyReport report;
    report.t = t_sequence;
    const auto spectrum = kernels::Spectrum::dirichlet_interval(length, m * m);
    const double log_coeff = -m * m * length / (4.0 * pi);
    const double const_term = -(2.0 * euler_gamma + 1.0) * m * m * length / (8.0 * pi);

    for (double t : t_sequence) {
        // -(1/2) d/dt Tr T, differentiated mode by mode.
        const double energy = 0.5 * kernels::spectral_sum(spectrum, t, 1, 1e-15).value;
        double divergences = length / (2.0 * pi * t * t);
        if (m > 0.0) divergences += log_coeff * std::log(0.5 * m * t) + const_term;
        const double remainder = energy - divergences;
        report.energy.push_back(energy);
        report.remainder.push_back(remainder);
        // Exact boundary contribution -(m/4) e^{-m t}, less its t -> 0 value.
        report.reduced.push_back(remainder - (-0.25 * m * std::exp(-m * t) + 0.25 * m));
    }

    using Basis = std::vector<std::function<double(double)>>;
    const Basis basis = {
        [](double) { return 1.0; },
        [](double t) { return t; },
        [](double t) { return t * t * std::log(t); },
        [](double t) { return t * t; },
        [](double t) { return std::pow(t, 4) * std::log(t); },
        [](double t) { return std::pow(t, 4); },
    };
    const auto full = detail::fit_basis(report.t, report.remainder, basis);
    report.finite_part = full.coefficients[0];
    const std::vector<double> t_tail(report.t.begin() + 1, report.t.end());
    const std::vector<double> r_tail(report.remainder.begin() + 1, report.remainder.end());
    report.finite_part_reduced = detail::fit_basis(t_tail, r_tail, basis).coefficients[0];

    // Order of the approach to the limit: scan p, solving linearly for E, a, b at each p.
    auto order_fit = [&](double p) {
        const Basis b = {
            [](double) { return 1.0; },
            [p](double t) { return std::pow(t, p) * std::log(t); },
            [p](double t) { return std::pow(t, p); },
        };
        return detail::fit_basis(report.t, report.reduced, b);
    };
    double best_p = 0.5;
    double best_residual = std::numeric_limits<double>::infinity();
    for (double p = 0.5; p <= 4.0 + 1e-12; p += 0.01) {
        const double res = order_fit(p).residual_norm;
        if (res < best_residual) {
            best_residual = res;
            best_p = p;
        }
    }
    // Golden-section refinement around the grid minimum.
    double lo = best_p - 0.01, hi = best_p + 0.01;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (order_fit(a).residual_norm < order_fit(b).residual_norm)
            hi = b;
        else
            lo = a;
    }
    report.fitted_order = 0.5 * (lo + hi);
    report.fitted_log_coeff = order_fit(report.fitted_order).coefficients[1];

    const double spread = std::fabs(report.finite_part - report.finite_part_reduced);
    if (!(spread <= tol) || !std::isfinite(report.finite_part)) {
        throw ExtrapolationError("regularized_energy_check: extrapolation did not settle", report.finite_part, spread,
                                 report.t, report.remainder);
    }
    return report;
}

}  // namespace vacuum::casimir
