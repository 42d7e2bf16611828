#include "vacuum/kernels.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "vacuum/errors.hpp"
#include "vacuum/specfun.hpp"

namespace vacuum::kernels {

namespace {

using specfun::pi;

void require_positive_t(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(who) + ": t must be positive and finite");
}

void require_dimension(int d, const char* who) {
    if (d < 1) throw DomainError(std::string(who) + ": dimension must be >= 1");
}

void require_length(double length, const char* who) {
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError(std::string(who) + ": L must be positive");
}

double half_order(int d) { return 0.5 * (d + 1); }

// Neumaier compensated summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double s = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            carry += (sum - s) + x;
        else
            carry += (x - s) + sum;
        sum = s;
    }
    double value() const { return sum + carry; }
};

}  // namespace

// ---- Geometry ----------------------------------------------------------------

Geometry::Geometry(int dimension, Configuration config) : dimension_(dimension), config_(std::move(config)) {
    require_dimension(dimension_, "Geometry");
    if (const auto* fs = std::get_if<FreeSpace>(&config_)) {
        if (!(fs->separation >= 0.0) || !std::isfinite(fs->separation))
            throw DomainError("Geometry: separation z must be >= 0");
    } else if (const auto* iv = std::get_if<DirichletInterval>(&config_)) {
        require_length(iv->length, "Geometry");
    } else if (const auto* hl = std::get_if<HalfLineDirichlet>(&config_)) {
        if (!(hl->x > 0.0) || !(hl->y > 0.0) || !std::isfinite(hl->x) || !std::isfinite(hl->y))
            throw DomainError("Geometry: half-line coordinates must be positive");
    }
}

Geometry Geometry::free_space(int dimension, double separation) { return {dimension, FreeSpace{separation}}; }
Geometry Geometry::interval(double length) { return {1, DirichletInterval{length}}; }
Geometry Geometry::half_line(int dimension, double x, double y) { return {dimension, HalfLineDirichlet{x, y}}; }

// ---- KernelProfile -----------------------------------------------------------

KernelProfile::KernelProfile(Geometry geometry, double mass_squared, Spec spec)
    : geometry_(std::move(geometry)), mass_squared_(mass_squared), spec_(std::move(spec)) {
    if (!spec_.evaluator) throw PreconditionError("KernelProfile: evaluator is required");
    if (!(mass_squared_ >= 0.0) || !std::isfinite(mass_squared_))
        throw DomainError("KernelProfile: mass_squared must be >= 0");
    if (spec_.decay) {
        if (const auto* e = std::get_if<ExponentialDecay>(&*spec_.decay); e && !(e->rate > 0.0))
            throw PreconditionError("KernelProfile: exponential decay rate must be positive");
    }
}

double KernelProfile::operator()(double t) const {
    require_positive_t(t, "KernelProfile");
    const double v = spec_.evaluator(t);
    if (!std::isfinite(v)) throw EvaluationError("KernelProfile: evaluator returned a non-finite value");
    return v;
}

double KernelProfile::derivative(double t) const {
    if (!spec_.derivative) throw PreconditionError("KernelProfile: no analytic derivative supplied");
    require_positive_t(t, "KernelProfile::derivative");
    const double v = spec_.derivative(t);
    if (!std::isfinite(v)) throw EvaluationError("KernelProfile: derivative returned a non-finite value");
    return v;
}

double KernelProfile::massive_counterpart(double m, double t) const {
    if (!spec_.massive_counterpart) throw PreconditionError("KernelProfile: no closed-form massive counterpart");
    require_positive_t(t, "KernelProfile::massive_counterpart");
    if (!(m >= 0.0)) throw DomainError("KernelProfile::massive_counterpart: m must be >= 0");
    return spec_.massive_counterpart(m, t);
}

KernelProfile KernelProfile::minus(const KernelProfile& other, std::optional<Decay> decay) const {
    Spec s;
    s.evaluator = [a = spec_.evaluator, b = other.spec_.evaluator](double t) { return a(t) - b(t); };
    if (spec_.derivative && other.spec_.derivative)
        s.derivative = [a = spec_.derivative, b = other.spec_.derivative](double t) { return a(t) - b(t); };
    s.singularity_order = spec_.singularity_order;
    s.decay = decay;
    s.closed_form = spec_.closed_form && other.spec_.closed_form;
    if (spec_.massive_counterpart && other.spec_.massive_counterpart)
        s.massive_counterpart = [a = spec_.massive_counterpart, b = other.spec_.massive_counterpart](double m, double t) {
            return a(m, t) - b(m, t);
        };
    return {geometry_, mass_squared_, std::move(s)};
}

// ---- Spectra ------------------------------------------------------------------

Spectrum::Spectrum(Frequencies omega, GapBound gap_lower_bound)
    : omega_(std::move(omega)), gap_(std::move(gap_lower_bound)) {
    if (!omega_ || !gap_) throw PreconditionError("Spectrum: frequencies and gap bound are required");
}

Spectrum Spectrum::dirichlet_interval(double length, double mass_squared) {
    require_length(length, "Spectrum::dirichlet_interval");
    if (!(mass_squared >= 0.0) || !std::isfinite(mass_squared))
        throw DomainError("Spectrum::dirichlet_interval: mass_squared must be >= 0");
    const double k = pi / length;
    auto omega = [k, mass_squared](std::size_t n) {
        const double kn = k * static_cast<double>(n);
        return std::sqrt(kn * kn + mass_squared);
    };
    // omega is a convex function of n, so the gaps increase; the gap at n bounds all later ones.
    auto gap = [k, omega](std::size_t n) {
        return k * k * static_cast<double>(2 * n + 1) / (omega(n) + omega(n + 1));
    };
    return {omega, gap};
}

SpectralSum spectral_sum(const Spectrum& spectrum, double t, int power, double tol, std::size_t max_terms) {
    require_positive_t(t, "spectral_sum");
    if (power < 0) throw PreconditionError("spectral_sum: power must be >= 0");
    if (!(tol > 0.0)) throw PreconditionError("spectral_sum: tol must be positive");

    auto term = [&](double w) { return (power == 0 ? 1.0 : std::pow(w, power)) * std::exp(-t * w); };

    CompensatedSum acc;
    double tail = 0.0;
    for (std::size_t n = 1;; ++n) {
        const double w = spectrum.omega(n);
        acc.add(term(w));
        // Beyond w >= 2 power / t each term shrinks by at least e^{-t gap / 2}.
        const double w_next = spectrum.omega(n + 1);
        if (w_next * t >= 2.0 * power) {
            const double rate = power == 0 ? t * spectrum.gap_lower_bound(n + 1) : 0.5 * t * spectrum.gap_lower_bound(n + 1);
            tail = term(w_next) / -std::expm1(-rate);
            if (tail < tol) return {acc.value(), n, tail};
        }
        if (n >= max_terms) {
            throw ConvergenceError("spectral_sum: mode budget exhausted (t too small for the requested tolerance)",
                                   acc.value(), tail);
        }
    }
}

double spectral_trace(const Spectrum& spectrum, double t, double tol) {
    return spectral_sum(spectrum, t, 0, tol).value;
}

double spectral_heat_trace(const Spectrum& spectrum, double t, double tol) {
    require_positive_t(t, "spectral_heat_trace");
    CompensatedSum acc;
    constexpr std::size_t max_terms = 50'000'000;
    for (std::size_t n = 1;; ++n) {
        const double w = spectrum.omega(n);
        acc.add(std::exp(-t * w * w));
        const double w_next = spectrum.omega(n + 1);
        // omega^2 gaps are at least 2 omega gap, and grow with n.
        const double rate = t * 2.0 * w_next * spectrum.gap_lower_bound(n + 1);
        const double tail = std::exp(-t * w_next * w_next) / -std::expm1(-rate);
        if (tail < tol) return acc.value();
        if (n >= max_terms) throw ConvergenceError("spectral_heat_trace: mode budget exhausted", acc.value(), tail);
    }
}

// ---- Closed forms -------------------------------------------------------------------

double free_massless_cylinder(int d, double z, double t) {
    require_dimension(d, "free_massless_cylinder");
    require_positive_t(t, "free_massless_cylinder");
    const double c = half_order(d);
    return specfun::gamma_fn(c) * std::pow(pi, -c) * t * std::pow(t * t + z * z, -c);
}

double free_massless_cylinder_dt(int d, double z, double t) {
    require_dimension(d, "free_massless_cylinder_dt");
    require_positive_t(t, "free_massless_cylinder_dt");
    const double c = half_order(d);
    const double r2 = t * t + z * z;
    return specfun::gamma_fn(c) * std::pow(pi, -c) * std::pow(r2, -c - 1.0) * (r2 - 2.0 * c * t * t);
}

double free_massive_cylinder(int d, double z, double m, double t) {
    require_dimension(d, "free_massive_cylinder");
    require_positive_t(t, "free_massive_cylinder");
    if (!(m >= 0.0)) throw DomainError("free_massive_cylinder: m must be >= 0");
    if (m == 0.0) return free_massless_cylinder(d, z, t);
    const double c = half_order(d);
    const double r = std::hypot(t, z);
    const double x = m * r;
    // Scaled K keeps the prefactor finite when x is large; the exponential then underflows gracefully.
    const double k = specfun::bessel_k_scaled(specfun::RealOrder(c), x);
    return std::pow(2.0, 1.0 - c) * std::pow(pi, -c) * std::pow(m / r, c) * t * k * std::exp(-x);
}

double dirichlet_interval_trace_massless(double length, double t) {
    require_length(length, "dirichlet_interval_trace_massless");
    require_positive_t(t, "dirichlet_interval_trace_massless");
    return 1.0 / std::expm1(pi * t / length);
}

double dirichlet_interval_trace_massless_dt(double length, double t) {
    require_length(length, "dirichlet_interval_trace_massless_dt");
    require_positive_t(t, "dirichlet_interval_trace_massless_dt");
    const double q = 1.0 / std::expm1(pi * t / length);
    return -(pi / length) * (q + q * q);
}

double dirichlet_interval_bracket(double length, double t) {
    require_length(length, "dirichlet_interval_bracket");
    require_positive_t(t, "dirichlet_interval_bracket");
    const double x = pi * t / length;
    if (x < 0.1) {
        const double x2 = x * x;
        return -0.5 + x * (1.0 / 12.0 + x2 * (-1.0 / 720.0 + x2 * (1.0 / 30240.0 - x2 / 1209600.0)));
    }
    return 1.0 / std::expm1(x) - 1.0 / x;
}

double dirichlet_interval_bracket_dt(double length, double t) {
    require_length(length, "dirichlet_interval_bracket_dt");
    require_positive_t(t, "dirichlet_interval_bracket_dt");
    const double x = pi * t / length;
    double dx;
    if (x < 0.1) {
        const double x2 = x * x;
        dx = 1.0 / 12.0 + x2 * (-1.0 / 240.0 + x2 * (1.0 / 6048.0 - x2 / 172800.0));
    } else {
        const double q = 1.0 / std::expm1(x);
        dx = -(q + q * q) + 1.0 / (x * x);
    }
    return (pi / length) * dx;
}

double image_sum_halfline(double x, double y, int d, double m, double t) {
    if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("image_sum_halfline: coordinates must be non-negative");
    return free_massive_cylinder(d, std::fabs(x - y), m, t) - free_massive_cylinder(d, x + y, m, t);
}

double free_heat_kernel(int d, double z, double mass_squared, double t) {
    require_dimension(d, "free_heat_kernel");
    require_positive_t(t, "free_heat_kernel");
    return std::pow(4.0 * pi * t, -0.5 * d) * std::exp(-z * z / (4.0 * t) - mass_squared * t);
}

// ---- Profile factories -----------------------------------------------------------------

KernelProfile free_massless_profile(int d, double z) {
    Geometry g = Geometry::free_space(d, z);
    KernelProfile::Spec s;
    s.evaluator = [d, z](double t) { return free_massless_cylinder(d, z, t); };
    s.derivative = [d, z](double t) { return free_massless_cylinder_dt(d, z, t); };
    s.singularity_order = z == 0.0 ? -d : 0;
    s.decay = AlgebraicDecay{static_cast<double>(d)};
    s.closed_form = true;
    s.massive_counterpart = [d, z](double m, double t) { return free_massive_cylinder(d, z, m, t); };
    return {std::move(g), 0.0, std::move(s)};
}

KernelProfile free_massive_profile(int d, double z, double m) {
    if (!(m >= 0.0)) throw DomainError("free_massive_profile: m must be >= 0");
    if (m == 0.0) return free_massless_profile(d, z);
    Geometry g = Geometry::free_space(d, z);
    KernelProfile::Spec s;
    s.evaluator = [d, z, m](double t) { return free_massive_cylinder(d, z, m, t); };
    s.singularity_order = z == 0.0 ? -d : 0;
    s.decay = ExponentialDecay{m};
    s.closed_form = true;
    return {std::move(g), m * m, std::move(s)};
}

KernelProfile interval_trace_profile(double length) {
    Geometry g = Geometry::interval(length);
    KernelProfile::Spec s;
    s.evaluator = [length](double t) { return dirichlet_interval_trace_massless(length, t); };
    s.derivative = [length](double t) { return dirichlet_interval_trace_massless_dt(length, t); };
    s.singularity_order = -1;
    s.decay = ExponentialDecay{pi / length};
    s.closed_form = true;
    return {std::move(g), 0.0, std::move(s)};
}

KernelProfile interval_free_part_profile(double length) {
    Geometry g = Geometry::interval(length);
    KernelProfile::Spec s;
    s.evaluator = [length](double t) { return length / (pi * t); };
    s.derivative = [length](double t) { return -length / (pi * t * t); };
    s.singularity_order = -1;
    s.decay = AlgebraicDecay{1.0};
    s.closed_form = true;
    s.massive_counterpart = [length](double m, double t) {
        if (m == 0.0) return length / (pi * t);
        return length * m / pi * specfun::bessel_k(1.0, m * t);
    };
    return {std::move(g), 0.0, std::move(s)};
}

KernelProfile interval_bracket_profile(double length) {
    Geometry g = Geometry::interval(length);
    KernelProfile::Spec s;
    s.evaluator = [length](double t) { return dirichlet_interval_bracket(length, t); };
    s.derivative = [length](double t) { return dirichlet_interval_bracket_dt(length, t); };
    s.singularity_order = 0;
    s.decay = AlgebraicDecay{1.0};
    s.closed_form = true;
    return {std::move(g), 0.0, std::move(s)};
}

KernelProfile halfline_profile(int d, double x, double y) {
    Geometry g = Geometry::half_line(d, x, y);
    KernelProfile::Spec s;
    s.evaluator = [d, x, y](double t) { return image_sum_halfline(x, y, d, 0.0, t); };
    s.derivative = [d, x, y](double t) {
        return free_massless_cylinder_dt(d, std::fabs(x - y), t) - free_massless_cylinder_dt(d, x + y, t);
    };
    s.singularity_order = x == y ? -d : 0;
    s.decay = AlgebraicDecay{static_cast<double>(d + 2)};
    s.closed_form = true;
    s.massive_counterpart = [d, x, y](double m, double t) { return image_sum_halfline(x, y, d, m, t); };
    return {std::move(g), 0.0, std::move(s)};
}

KernelProfile constant_profile(double value) {
    KernelProfile::Spec s;
    s.evaluator = [value](double) { return value; };
    s.derivative = [](double) { return 0.0; };
    s.singularity_order = 0;
    s.decay = AlgebraicDecay{0.0};
    s.closed_form = true;
    s.massive_counterpart = [value](double m, double t) { return value * std::exp(-m * t); };
    return {Geometry::interval(1.0), 0.0, std::move(s)};
}

}  // namespace vacuum::kernels
