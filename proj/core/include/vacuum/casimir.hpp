#pragma once

#include <string>
#include <vector>

#include "vacuum/errors.hpp"
#include "vacuum/quad.hpp"

namespace vacuum::casimir {

// Which representation produced the mass-dependent Casimir term.
enum class MassRoute { none, integral, sum };

std::string to_string(MassRoute route);

// Regularized vacuum energy of a massive scalar on a Dirichlet interval, split by origin.
struct EnergyBreakdown {
    double mass = 0.0;
    double length = 0.0;

    double divergent_t2_coeff = 0.0;   // multiplies 1/t^2
    double divergent_log_coeff = 0.0;  // multiplies log_convention
    double divergent_const = 0.0;
    std::string log_convention = "ln(m t / 2)";

    double massless_casimir = 0.0;
    double boundary_constant = 0.0;
    double mass_casimir = 0.0;
    double total_renormalized = 0.0;

    MassRoute route = MassRoute::none;
};

// Representations switch at this value of m L.
inline constexpr double sum_switchover = 0.2;

/// -pi / (24 L).
double massless_casimir_energy(double length);

/// The same quantity read off the small-t Taylor coefficient of t Tr T(0, t) by central
/// differences with Richardson extrapolation.
double massless_casimir_from_trace_expansion(double length);

/// -m / 4, independent of L.
double boundary_interaction_energy(double m);

/// -(1/4) d/dt (1 - e^{-m t}) as t -> 0, from central differences at t and t/2.
double boundary_interaction_energy_numeric(double m, double t = 1e-6);

/// (m/4) int_0^inf J1(m L u / pi) (coth(u/2) - 2/u) du / u.
double mass_casimir_integral(double m, double length, const quad::Tolerance& tol = {1e-13, 1e-11, 2'000'000});

/// -(m / 2 pi) sum_s K1(2 m L s) / s + pi / (24 L); ConvergenceError past a million terms.
double mass_casimir_sum(double m, double length, double tol = 1e-15);

inline constexpr quad::Tolerance default_energy_tolerance{1e-13, 1e-11};

/// Mass-dependent Casimir term by the faster representation for this m L.
double mass_casimir(double m, double length, MassRoute* route = nullptr,
                    const quad::Tolerance& tol = default_energy_tolerance);

EnergyBreakdown energy_breakdown(double m, double length, const quad::Tolerance& tol = default_energy_tolerance);

/// massless + mass-dependent Casimir terms; the only L-dependent finite part.
double force_relevant_energy(double m, double length, const quad::Tolerance& tol = default_energy_tolerance);

/// Coefficient of t in the small-t expansion of the massive interval trace, paired with
/// the (m^2 L / 2 pi) t ln t term: -2 E_ren + (m^2 L / 2 pi) ln(m / 2) + (2C - 1) m^2 L / (4 pi).
double interval_trace_t1_coefficient(double m, double length, const quad::Tolerance& tol = default_energy_tolerance);

struct RegularizedEnergyReport {
    double finite_part = 0.0;           // extrapolated t -> 0 limit of the remainder
    double finite_part_reduced = 0.0;   // same limit from the first n - 1 points (convergence check)
    std::vector<double> t;
    std::vector<double> energy;         // (1/2) sum omega e^{-t omega}
    std::vector<double> remainder;      // energy minus the analytic divergences
    std::vector<double> reduced;        // remainder minus the exact boundary piece
    double fitted_order = 0.0;          // p in reduced(t) ~ E + t^p (a ln t + b)
    double fitted_log_coeff = 0.0;      // a at the fitted order
};

// Extrapolation failed to settle; carries the raw sequence.
class ExtrapolationError : public ConvergenceError {
public:
    ExtrapolationError(const std::string& what, double best, double spread, std::vector<double> t,
                       std::vector<double> remainder)
        : ConvergenceError(what, best, spread), t_(std::move(t)), remainder_(std::move(remainder)) {}

    const std::vector<double>& t() const noexcept { return t_; }
    const std::vector<double>& remainder() const noexcept { return remainder_; }

private:
    std::vector<double> t_;
    std::vector<double> remainder_;
};

/// t_k = 0.1 L 2^{-k}, k = 0..6.
std::vector<double> default_t_sequence(double length);

/// Extrapolates the spectral energy sum, less its divergences, to t = 0. `tol` bounds the
/// disagreement between the full and reduced extrapolations.
RegularizedEnergyReport regularized_energy_check(double m, double length, const std::vector<double>& t_sequence,
                                                 double tol = 1e-6);

}  // namespace vacuum::casimir
