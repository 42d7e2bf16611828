#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>

namespace vacuum::kernels {

// ---- Geometry ---------------------------------------------------------------

struct FreeSpace {
    double separation = 0.0;  // z = |x - y|
};

struct DirichletInterval {
    double length = 1.0;
};

// Dirichlet wall at the origin; x and y are distances from the wall.
struct HalfLineDirichlet {
    double x = 1.0;
    double y = 1.0;
};

using Configuration = std::variant<FreeSpace, DirichletInterval, HalfLineDirichlet>;

class Geometry {
public:
    Geometry(int dimension, Configuration config);

    static Geometry free_space(int dimension, double separation);
    static Geometry interval(double length);
    static Geometry half_line(int dimension, double x, double y);

    int dimension() const noexcept { return dimension_; }
    const Configuration& config() const noexcept { return config_; }

private:
    int dimension_;
    Configuration config_;
};

// ---- Kernel profiles ----------------------------------------------------------

struct ExponentialDecay {
    double rate = 1.0;
};

struct AlgebraicDecay {
    double power = 1.0;
};

using Decay = std::variant<ExponentialDecay, AlgebraicDecay>;

using Evaluator = std::function<double(double)>;
// (m, t) -> T(m^2, t), for profiles whose massive counterpart is known in closed form.
using MassiveEvaluator = std::function<double(double, double)>;

// t -> T(mu, t) together with the metadata the mass transforms need. Immutable once built.
class KernelProfile {
public:
    struct Spec {
        Evaluator evaluator;
        Evaluator derivative;  // dT/dt; optional
        int singularity_order = 0;
        std::optional<Decay> decay;
        bool closed_form = false;
        MassiveEvaluator massive_counterpart;  // optional
    };

    KernelProfile(Geometry geometry, double mass_squared, Spec spec);

    // Throws DomainError for t <= 0 and EvaluationError if the evaluator is not finite.
    double operator()(double t) const;
    double derivative(double t) const;
    bool has_derivative() const noexcept { return static_cast<bool>(spec_.derivative); }

    int singularity_order() const noexcept { return spec_.singularity_order; }
    const std::optional<Decay>& decay() const noexcept { return spec_.decay; }
    bool closed_form() const noexcept { return spec_.closed_form; }
    const Geometry& geometry() const noexcept { return geometry_; }
    double mass_squared() const noexcept { return mass_squared_; }

    bool has_massive_counterpart() const noexcept { return static_cast<bool>(spec_.massive_counterpart); }
    double massive_counterpart(double m, double t) const;

    // Pointwise difference; metadata is supplied by the caller.
    KernelProfile minus(const KernelProfile& other, std::optional<Decay> decay) const;

private:
    Geometry geometry_;
    double mass_squared_;
    Spec spec_;
};

// ---- Spectra --------------------------------------------------------------------

// Eigenfrequencies omega_n (n >= 1) with a lower bound on the gaps omega_{k+1} - omega_k
// valid for every k >= n.
class Spectrum {
public:
    using Frequencies = std::function<double(std::size_t)>;
    using GapBound = std::function<double(std::size_t)>;

    Spectrum(Frequencies omega, GapBound gap_lower_bound);

    static Spectrum dirichlet_interval(double length, double mass_squared);

    double omega(std::size_t n) const { return omega_(n); }
    double gap_lower_bound(std::size_t n) const { return gap_(n); }

private:
    Frequencies omega_;
    GapBound gap_;
};

struct SpectralSum {
    double value = 0.0;
    std::size_t terms = 0;
    double tail_bound = 0.0;
};

/// sum_n omega_n^power e^{-t omega_n}, truncated once the geometric tail bound is below tol.
/// Throws ConvergenceError when more than max_terms modes would be needed.
SpectralSum spectral_sum(const Spectrum& spectrum, double t, int power, double tol,
                         std::size_t max_terms = 50'000'000);

/// Tr e^{-t sqrt(H)} = sum_n e^{-t omega_n}.
double spectral_trace(const Spectrum& spectrum, double t, double tol = 1e-16);

/// sum_n e^{-t omega_n^2}, the heat trace of the same spectrum.
double spectral_heat_trace(const Spectrum& spectrum, double t, double tol = 1e-16);

// ---- Closed forms -------------------------------------------------------------------

/// Gamma(c) pi^{-c} t / (t^2 + z^2)^c with c = (d+1)/2.
double free_massless_cylinder(int d, double z, double t);

/// d/dt of free_massless_cylinder.
double free_massless_cylinder_dt(int d, double z, double t);

/// 2^{1-c} pi^{-c} m^c t (t^2+z^2)^{-c/2} K_c(m sqrt(t^2+z^2)); m = 0 falls back to the massless form.
double free_massive_cylinder(int d, double z, double m, double t);

/// Tr T(0, t) for the Dirichlet interval, written as 1/expm1(pi t / L).
double dirichlet_interval_trace_massless(double length, double t);
double dirichlet_interval_trace_massless_dt(double length, double t);

/// Tr T(0, t) - L/(pi t), free of cancellation for small t.
double dirichlet_interval_bracket(double length, double t);
double dirichlet_interval_bracket_dt(double length, double t);

/// T_free(|x - y|) - T_free(x + y), the one-image Dirichlet half-line kernel.
double image_sum_halfline(double x, double y, int d, double m, double t);

/// (4 pi t)^{-d/2} e^{-z^2/(4t)} e^{-mu t}.
double free_heat_kernel(int d, double z, double mass_squared, double t);

// ---- Profile factories -----------------------------------------------------------------

KernelProfile free_massless_profile(int d, double z);
KernelProfile free_massive_profile(int d, double z, double m);
KernelProfile interval_trace_profile(double length);
// The free-space part L/(pi t) of the interval trace, with its massive counterpart L m K_1(m t)/pi.
KernelProfile interval_free_part_profile(double length);
// Tr T(0, t) - L/(pi t); decays only like -L/(pi t).
KernelProfile interval_bracket_profile(double length);
KernelProfile halfline_profile(int d, double x, double y);
// Constant profile; its massive counterpart is c e^{-m t}.
KernelProfile constant_profile(double value);

}  // namespace vacuum::kernels
