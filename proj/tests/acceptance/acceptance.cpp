// Runs every acceptance criterion once and prints one PASS/FAIL line per criterion.
// Exit status is non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "vacuum/asymptotics.hpp"
#include "vacuum/casimir.hpp"
#include "vacuum/kernels.hpp"
#include "vacuum/mass_transform.hpp"

namespace k = vacuum::kernels;
namespace tr = vacuum::transform;
namespace cas = vacuum::casimir;
namespace asy = vacuum::asymptotics;

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Direct mode sum for the Dirichlet interval, independent of the library's truncation logic.
double direct_trace(double L, double m, double t) {
    double sum = 0;
    for (int n = 1; n < 1'000'000; ++n) {
        const double term = std::exp(-t * std::sqrt(n * n * pi * pi / (L * L) + m * m));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

// -(m/2pi) sum K1(2 m L s)/s + pi/24L with the standard library's K1.
double k1_partial_sums(double m, double L) {
    double sum = 0;
    for (int s = 1; s < 100000; ++s) {
        const double term = std::cyl_bessel_k(1.0, 2 * m * L * s) / s;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return -m / (2 * pi) * sum + pi / (24 * L);
}

Outcome free_field_transform() {
    const auto start = std::chrono::steady_clock::now();
    const vacuum::quad::Tolerance tol{1e-16, 1e-12, 20'000'000};
    double worst = 0;
    for (int d : {1, 2, 3})
        for (double m : {0.5, 1.0, 2.0})
            for (double t : {0.25, 1.0, 4.0})
                for (double z : {0.0, 1.0}) {
                    const double exact = k::free_massive_cylinder(d, z, m, t);
                    const double v = tr::to_massive(k::free_massless_profile(d, z), m, t,
                                                    tr::TransformMethod::shifted_variable_form, tol);
                    worst = std::max(worst, std::fabs(v - exact) / std::fabs(exact));
                }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-8 && secs < 30, fmt("max relative error %.3g (<= 1e-8), %.2f s (< 30 s)", worst, secs)};
}

Outcome spectral_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const auto profile = k::interval_trace_profile(1.0);
    double worst = 0;
    for (double m : {0.25, 0.5, 1.0, 2.0, 4.0})
        for (double t : {0.05, 0.1, 0.5, 1.0, 2.0})
            worst = std::max(worst, std::fabs(tr::to_massive(profile, m, t) - direct_trace(1.0, m, t)));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-7 && secs < 60, fmt("max abs error %.3g (<= 1e-7), %.2f s (< 60 s)", worst, secs)};
}

Outcome integral_sum_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0;
    for (double mL : {0.3, 0.5, 1.0, 2.0, 5.0})
        worst = std::max(worst, std::fabs(cas::mass_casimir_integral(mL, 1.0) - cas::mass_casimir_sum(mL, 1.0)));
    const double at_one = cas::mass_casimir_integral(1, 1);
    const double oracle = k1_partial_sums(1, 1);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = worst <= 1e-8 && std::fabs(at_one - oracle) < 1e-9 && std::fabs(at_one - 0.1075679) < 1e-7 && secs < 30;
    return {ok, fmt("max |integral - sum| %.3g (<= 1e-8), m=L=1 value %.10f, %.2f s", worst, at_one, secs)};
}

Outcome massless_casimir() {
    double worst_coeff = 0, worst_extrap = 0;
    for (double L : {0.5, 1.0, 2.0}) {
        const double exact = -pi / (24 * L);
        worst_coeff = std::max(worst_coeff, std::fabs(cas::massless_casimir_from_trace_expansion(L) - exact));
        const auto r = cas::regularized_energy_check(0, L, cas::default_t_sequence(L));
        worst_extrap = std::max(worst_extrap, std::fabs(r.finite_part - exact));
    }
    return {worst_coeff <= 1e-6 && worst_extrap <= 1e-6,
            fmt("t^2 coefficient route %.3g, extrapolation route %.3g (both <= 1e-6)", worst_coeff, worst_extrap)};
}

Outcome boundary_constant() {
    bool exact = true;
    double worst = 0;
    for (double m : {0.25, 1.0, 3.0}) {
        exact = exact && cas::energy_breakdown(m, 1.0).boundary_constant == -m / 4;
        worst = std::max(worst, std::fabs(cas::boundary_interaction_energy_numeric(m) + m / 4) / m);
    }
    return {exact && worst <= 1e-6, std::string("breakdown equals -m/4 exactly: ") + (exact ? "yes" : "NO") +
                                        fmt("; numeric limit error / m %.3g (<= 1e-6)", worst)};
}

Outcome central_pde() {
    const vacuum::quad::Tolerance tight{1e-15, 1e-13, 2'000'000};
    const auto profile = k::interval_trace_profile(1.0);
    const std::vector<std::pair<std::string, tr::MassiveKernel>> kernels{
        {"closed form", [](double mu, double t) { return k::free_massive_cylinder(1, 0, std::sqrt(mu), t); }},
        {"transformed trace",
         [&](double mu, double t) {
             return tr::to_massive(profile, std::sqrt(mu), t, tr::TransformMethod::shifted_variable_form, tight);
         }},
        {"spectral sum",
         [](double mu, double t) { return k::spectral_trace(k::Spectrum::dirichlet_interval(1.0, mu), t); }},
    };
    std::string detail;
    bool ok = true;
    for (const auto& [name, kernel] : kernels) {
        double worst = 0;
        for (double mu : {0.5, 1.0, 2.0})
            for (double t : {0.3, 0.5, 1.0}) worst = std::max(worst, tr::pde_residual(kernel, mu, t, 1e-4, 1e-4));
        ok = ok && worst < 1e-5;
        detail += (detail.empty() ? "" : ", ") + name + fmt(" %.2g", worst);
    }
    return {ok, "max residual " + detail + " (< 1e-5)"};
}

Outcome regularized_reconstruction() {
    const auto r = cas::regularized_energy_check(1, 1, cas::default_t_sequence(1));
    const double composed =
        cas::massless_casimir_energy(1) + cas::boundary_interaction_energy(1) + k1_partial_sums(1, 1);
    const double err = std::fabs(r.finite_part - composed);
    const bool ok = err <= 1e-5 && std::fabs(composed + 0.273332) < 1e-6 && r.fitted_order >= 1.9;
    return {ok, fmt("finite part %.9f vs %.9f (diff %.2g <= 1e-5)", r.finite_part, composed, err) +
                    fmt(", fitted order %.3f (>= 1.9)", r.fitted_order)};
}

Outcome recursion_identities() {
    using Poly = asy::MuPolynomial<asy::PiRational>;
    bool ok = true;
    for (int d : {1, 2, 3}) {
        const int n = d + 5;
        asy::InitialData<asy::PiRational> data;
        for (int s = 0; s <= n; ++s) {
            data.e[s] = asy::PiRational(asy::Rational(s + 1, d + 2), s % 3 - 1);
            if (asy::has_log_term(s, d)) data.f[s] = asy::PiRational(asy::Rational(2 * s - 3, 5), -(s % 2));
        }
        const Poly renorm({data.e[d + 1], asy::PiRational(asy::Rational(1, 3), 1)});
        const auto x = asy::solve_cylinder_recursion(data, d, renorm, n);
        ok = ok && asy::substitution_identities_hold(x);
    }
    bool log_matches = true;
    for (std::int64_t num : {1, 2, 3}) {
        const asy::Rational L(num, 2);
        const auto x = asy::solve_cylinder_recursion(asy::interval_initial_data(L, 3), 1,
                                                     Poly::constant(asy::PiRational(asy::Rational(1, 12) / L, 1)), 3);
        log_matches = log_matches && x.f(2) == Poly::monomial(asy::PiRational(L / asy::Rational(2), -1), 1);
        const double Ld = static_cast<double>(L.numerator()) / static_cast<double>(L.denominator());
        const double energy_log = cas::energy_breakdown(1.0, Ld).divergent_log_coeff;
        log_matches = log_matches && std::fabs(-0.5 * x.f(2)(1.0) - energy_log) < 1e-15;
    }
    return {ok && log_matches, std::string("exact identities through s = d+5, d = 1,2,3: ") + (ok ? "hold" : "FAIL") +
                                   "; f_2 = mu L / 2pi and energy log coefficient: " + (log_matches ? "match" : "FAIL")};
}

Outcome heat_factorisation() {
    using Poly = asy::MuPolynomial<asy::PiRational>;
    std::vector<asy::PiRational> b0;
    for (int s = 0; s <= 6; ++s) b0.push_back(asy::PiRational(asy::Rational(3 - s, s + 2), (s % 3) - 1));
    const auto b = asy::heat_coeffs_massive_exact(b0);
    bool exact = b.size() == b0.size();
    for (int s = 0; exact && s <= 6; ++s) {
        Poly expected;
        std::int64_t factorial = 1;
        for (int j = 0; 2 * j <= s; ++j) {
            if (j > 0) factorial *= j;
            const asy::PiRational coeff =
                b0[static_cast<std::size_t>(s - 2 * j)] * asy::PiRational(j % 2 ? -1 : 1) / asy::Rational(factorial);
            expected += Poly::monomial(coeff, static_cast<std::size_t>(j));
        }
        exact = b[static_cast<std::size_t>(s)] == expected;
    }
    const std::vector<asy::HeatKernel> kernels{
        [](double mu, double t) { return k::free_heat_kernel(1, 0, mu, t); },
        [](double mu, double t) { return k::free_heat_kernel(3, 0.5, mu, t); },
        [](double mu, double t) { return k::spectral_heat_trace(k::Spectrum::dirichlet_interval(1.0, mu), t); },
    };
    double worst = 0;
    for (const auto& kernel : kernels)
        for (double mu : {0.5, 1.0, 2.0})
            for (double t : {0.5, 1.0}) worst = std::max(worst, asy::heat_pde_residual(kernel, mu, t, 1e-4));
    return {exact && worst < 1e-7,
            std::string("exact series product through s=6: ") + (exact ? "yes" : "NO") + fmt("; max heat residual %.2g (< 1e-7)", worst)};
}

Outcome large_mass_suppression() {
    std::vector<double> values;
    for (double mL : {2.0, 3.0, 4.0, 5.0}) values.push_back(std::fabs(cas::force_relevant_energy(mL, 1.0)));
    const double bound = 1.1 * 5.0 / (2 * pi) * std::cyl_bessel_k(1.0, 10.0);
    bool monotone = true;
    for (std::size_t i = 1; i < values.size(); ++i) monotone = monotone && values[i] < values[i - 1];
    return {values.back() < bound && monotone,
            fmt("|E(mL=5)| %.4g < %.4g; ", values.back(), bound) + (monotone ? "monotone on mL = 2..5" : "NOT monotone")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"free-field transform exactness", free_field_transform},
        {"spectral oracle equivalence", spectral_oracle},
        {"integral/sum equivalence", integral_sum_equivalence},
        {"massless Casimir energy", massless_casimir},
        {"boundary constant", boundary_constant},
        {"central PDE property", central_pde},
        {"regularized-energy reconstruction", regularized_reconstruction},
        {"recursion identities", recursion_identities},
        {"heat factorization", heat_factorisation},
        {"large-mass suppression", large_mass_suppression},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %2zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
