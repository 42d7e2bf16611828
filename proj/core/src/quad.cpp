#include "vacuum/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "vacuum/errors.hpp"
#include "vacuum/specfun.hpp"

namespace vacuum::quad {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae on [-1, 1] (positive half, descending); odd indices are the Gauss nodes.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
};

struct PanelOrder {
    bool operator()(const Panel& lhs, const Panel& rhs) const { return lhs.error < rhs.error; }
};

double checked(const Integrand& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        throw EvaluationError("integrand returned a non-finite value at x = " + std::to_string(x));
    }
    return y;
}

Panel gauss_kronrod(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = checked(f, center);
    double kronrod = fc * wgk[7];
    double gauss = fc * wg[3];
    double absolute = std::fabs(kronrod);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        const double f1 = checked(f, center - dx);
        const double f2 = checked(f, center + dx);
        kronrod += wgk[j] * (f1 + f2);
        absolute += wgk[j] * (std::fabs(f1) + std::fabs(f2));
        if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
    }
    Panel panel{a, b, kronrod * half, 0.0};
    const double difference = std::fabs((kronrod - gauss) * half);
    panel.error = std::max(difference, 4.0 * eps * absolute * std::fabs(half));
    return panel;
}

constexpr std::size_t evals_per_panel = 15;

QuadratureResult adaptive(const Integrand& f, double a, double b, const Tolerance& tol, std::size_t budget) {
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> active;
    double frozen_value = 0.0;
    double frozen_error = 0.0;

    Panel first = gauss_kronrod(f, a, b);
    std::size_t evaluations = evals_per_panel;
    double total_value = first.value;
    double total_error = first.error;
    active.push(first);

    std::size_t splits = 0;
    while (total_error > tol.target(total_value) && !active.empty()) {
        if (evaluations + 2 * evals_per_panel > budget) break;
        Panel worst = active.top();
        active.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double scale = std::max({std::fabs(worst.a), std::fabs(worst.b), std::numeric_limits<double>::min()});
        if (worst.b - worst.a <= 64.0 * eps * scale || mid <= worst.a || mid >= worst.b) {
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        evaluations += 2 * evals_per_panel;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);

        // Re-sum periodically so rounding in the running totals cannot mask convergence.
        if (++splits % 64 == 0) {
            auto copy = active;
            total_value = frozen_value;
            total_error = frozen_error;
            while (!copy.empty()) {
                total_value += copy.top().value;
                total_error += copy.top().error;
                copy.pop();
            }
        }
    }

    // Final exact re-sum.
    double value = frozen_value;
    double error = frozen_error;
    while (!active.empty()) {
        value += active.top().value;
        error += active.top().error;
        active.pop();
    }
    return {value, error, evaluations, error <= tol.target(value)};
}

QuadratureResult combine(const QuadratureResult& x, const QuadratureResult& y) {
    return {x.value + y.value, x.error_estimate + y.error_estimate, x.evaluations + y.evaluations,
            x.converged && y.converged};
}

Tolerance scaled(const Tolerance& tol, double factor, std::size_t budget) {
    Tolerance out = tol;
    out.abs_tol = tol.abs_tol * factor;
    out.rel_tol = tol.rel_tol * factor;
    out.max_evaluations = std::max<std::size_t>(budget, 100);
    return out;
}

double binomial(std::size_t n, std::size_t k) {
    double result = 1.0;
    for (std::size_t i = 1; i <= k; ++i) result = result * double(n - k + i) / double(i);
    return result;
}

}  // namespace

void Tolerance::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !std::isfinite(abs_tol) || !std::isfinite(rel_tol)) {
        throw PreconditionError("Tolerance: abs_tol and rel_tol must be positive and finite");
    }
    if (max_evaluations < 100) throw PreconditionError("Tolerance: max_evaluations must be at least 100");
}

double Tolerance::target(double value) const { return std::max(abs_tol, rel_tol * std::fabs(value)); }

std::size_t effective_budget(const Tolerance& tol) {
    std::size_t budget = tol.max_evaluations;
    if (const char* env = std::getenv("VACUUM_MAX_EVALS")) {
        char* end = nullptr;
        const unsigned long long cap = std::strtoull(env, &end, 10);
        if (end != env && cap > 0) budget = std::min<std::size_t>(budget, std::max<unsigned long long>(cap, 100));
    }
    return budget;
}

QuadratureResult integrate_finite(const Integrand& f, double a, double b, const Tolerance& tol,
                                  EndpointSingularity singular) {
    tol.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw PreconditionError("integrate_finite: need finite a < b");
    }
    const std::size_t budget = effective_budget(tol);

    switch (singular) {
        case EndpointSingularity::none:
            return adaptive(f, a, b, tol, budget);
        case EndpointSingularity::left: {
            auto g = [&](double u) { return u == 0.0 ? 0.0 : 2.0 * u * f(a + u * u); };
            return adaptive(g, 0.0, std::sqrt(b - a), tol, budget);
        }
        case EndpointSingularity::right: {
            auto g = [&](double u) { return u == 0.0 ? 0.0 : 2.0 * u * f(b - u * u); };
            return adaptive(g, 0.0, std::sqrt(b - a), tol, budget);
        }
        case EndpointSingularity::both: {
            const double mid = 0.5 * (a + b);
            const Tolerance half = scaled(tol, 0.5, budget / 2);
            return combine(integrate_finite(f, a, mid, half, EndpointSingularity::left),
                           integrate_finite(f, mid, b, half, EndpointSingularity::right));
        }
    }
    return {};
}

QuadratureResult integrate_decaying(const Integrand& f, double a, double decay_rate, const Tolerance& tol) {
    tol.validate();
    if (!std::isfinite(a)) throw PreconditionError("integrate_decaying: lower limit must be finite");
    if (!(decay_rate > 0.0) || !std::isfinite(decay_rate)) {
        throw PreconditionError("integrate_decaying: decay_rate must be positive");
    }
    const std::size_t budget = effective_budget(tol);
    const double width = 2.0 / decay_rate;
    const double ratio = std::exp(-decay_rate * width);
    // Expected panel count from the decay rate and the absolute tolerance.
    const double expected_panels = std::ceil(std::log(1.0 / tol.abs_tol) / (decay_rate * width)) + 2.0;
    const double panel_share = 1.0 / (4.0 * expected_panels);

    QuadratureResult total;
    total.converged = true;
    double previous_magnitude = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < 100000; ++k) {
        const double lo = a + double(k) * width;
        const double hi = lo + width;
        Tolerance panel_tol = scaled(tol, panel_share, budget - std::min(budget, total.evaluations));
        panel_tol.abs_tol = std::max(tol.abs_tol * panel_share, panel_share * tol.rel_tol * std::fabs(total.value));
        const QuadratureResult panel = adaptive(f, lo, hi, panel_tol, std::max<std::size_t>(panel_tol.max_evaluations, 2 * evals_per_panel));
        total.value += panel.value;
        total.error_estimate += panel.error_estimate;
        total.evaluations += panel.evaluations;
        total.converged = total.converged && panel.converged;

        const double magnitude = std::fabs(panel.value) + panel.error_estimate;
        const double tail = magnitude * ratio / (1.0 - ratio);
        const bool decaying = magnitude <= previous_magnitude;
        previous_magnitude = magnitude;
        if (k >= 1 && decaying && tail <= 0.25 * tol.target(total.value)) {
            total.error_estimate += tail;
            total.converged = total.converged && total.error_estimate <= tol.target(total.value);
            return total;
        }
        if (total.evaluations >= budget) break;
    }
    total.converged = false;
    return total;
}

double levin_u(std::span<const double> partial_sums, double previous, std::size_t first_index) {
    const std::size_t count = partial_sums.size();
    if (count == 0) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t k = count - 1;
    const double beta = 1.0;
    const double last_weight_base = beta + double(first_index + k);
    double numerator = 0.0;
    double denominator = 0.0;
    double prior = previous;
    for (std::size_t j = 0; j <= k; ++j) {
        const double term = partial_sums[j] - prior;
        prior = partial_sums[j];
        const double omega = (beta + double(first_index + j)) * term;
        if (omega == 0.0 || !std::isfinite(omega)) return std::numeric_limits<double>::quiet_NaN();
        const double ratio = (beta + double(first_index + j)) / last_weight_base;
        double weight = binomial(k, j) * std::pow(ratio, double(k) - 1.0);
        if (j % 2 == 1) weight = -weight;
        numerator += weight * partial_sums[j] / omega;
        denominator += weight / omega;
    }
    if (denominator == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return numerator / denominator;
}

QuadratureResult integrate_lobes(const Integrand& f, const Breakpoints& breakpoint, const Tolerance& tol,
                                 const LobeOptions& options) {
    tol.validate();
    const std::size_t budget = effective_budget(tol);
    constexpr double lobe_share = 0.01;
    constexpr std::size_t levin_window = 20;
    constexpr std::size_t min_levin_terms = 6;

    std::vector<double> partial;
    double sum = 0.0;
    double quad_error = 0.0;
    std::size_t evaluations = 0;
    bool lobes_converged = true;
    double last_levin = std::numeric_limits<double>::quiet_NaN();
    double last_levin_change = std::numeric_limits<double>::infinity();
    double last_magnitude = std::numeric_limits<double>::infinity();
    double best = 0.0;
    double best_error = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < options.max_lobes; ++k) {
        const double lo = breakpoint(k);
        const double hi = breakpoint(k + 1);
        if (!(hi > lo)) throw PreconditionError("integrate_lobes: breakpoints must increase");

        const std::size_t remaining = budget - std::min(budget, evaluations);
        if (remaining < 2 * evals_per_panel) break;
        Tolerance lobe_tol = scaled(tol, lobe_share, remaining);
        lobe_tol.abs_tol = std::max(tol.abs_tol, tol.rel_tol * std::fabs(sum)) * lobe_share;

        QuadratureResult lobe{0.0, 0.0, 0, true};
        if (k == 0 && options.refine_first_lobe) {
            // Geometric panels toward the left end: [lo, lo + w 2^-J], ..., [lo + w/2, hi].
            constexpr int levels = 30;
            const double width = hi - lo;
            Tolerance piece_tol = lobe_tol;
            piece_tol.abs_tol = lobe_tol.abs_tol / levels;
            double right = hi;
            for (int level = 1; level <= levels; ++level) {
                const double left = level == levels ? lo : lo + width * std::ldexp(1.0, -level);
                piece_tol.max_evaluations = std::max<std::size_t>(100, budget - std::min(budget, evaluations + lobe.evaluations));
                const auto singular = level == levels ? options.first_lobe_singularity : EndpointSingularity::none;
                lobe = combine(lobe, integrate_finite(f, left, right, piece_tol, singular));
                right = left;
            }
        } else {
            const auto singular = k == 0 ? options.first_lobe_singularity : EndpointSingularity::none;
            lobe = integrate_finite(f, lo, hi, lobe_tol, singular);
        }
        evaluations += lobe.evaluations;
        lobes_converged = lobes_converged && lobe.converged;
        sum += lobe.value;
        quad_error += lobe.error_estimate;
        partial.push_back(sum);

        const double target = tol.target(sum);
        const double magnitude = std::fabs(lobe.value) + lobe.error_estimate;

        // Direct summation: two consecutive lobes below the target.
        if (k >= 1 && magnitude <= 0.1 * target && last_magnitude <= 0.1 * target) {
            const double error = quad_error + magnitude;
            return {sum, error, evaluations, lobes_converged && error <= target};
        }
        last_magnitude = magnitude;

        if (partial.size() >= min_levin_terms) {
            const std::size_t window = std::min(levin_window, partial.size());
            const std::size_t first = partial.size() - window;
            const double previous = first == 0 ? 0.0 : partial[first - 1];
            const double estimate =
                levin_u(std::span<const double>(partial.data() + first, window), previous, first);
            if (std::isfinite(estimate)) {
                const double change = std::isfinite(last_levin) ? std::fabs(estimate - last_levin)
                                                                : std::numeric_limits<double>::infinity();
                const double error = quad_error + change + last_levin_change;
                if (error < best_error) {
                    best = estimate;
                    best_error = error;
                }
                if (change <= 0.1 * target && last_levin_change <= 0.1 * target) {
                    return {estimate, error, evaluations, lobes_converged && error <= tol.target(estimate)};
                }
                last_levin = estimate;
                last_levin_change = change;
            }
        }
    }

    if (!std::isfinite(best_error)) {
        best = sum;
        best_error = quad_error + last_magnitude;
    }
    return {best, best_error, evaluations, false};
}

QuadratureResult integrate_bessel_oscillatory(const Integrand& g, int order, double freq, const Tolerance& tol) {
    if (order != 0 && order != 1) throw PreconditionError("integrate_bessel_oscillatory: order must be 0 or 1");
    if (!(freq > 0.0) || !std::isfinite(freq)) {
        throw PreconditionError("integrate_bessel_oscillatory: freq must be positive");
    }
    auto integrand = [&](double w) { return g(w) * specfun::bessel_j(order, freq * w); };
    auto breakpoint = [order, freq](std::size_t k) {
        return k == 0 ? 0.0 : specfun::bessel_zero(order, k) / freq;
    };
    return integrate_lobes(integrand, breakpoint, tol);
}

}  // namespace vacuum::quad
