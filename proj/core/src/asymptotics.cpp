#include "vacuum/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "least_squares.hpp"
#include "vacuum/quad.hpp"
#include "vacuum/specfun.hpp"

namespace vacuum::asymptotics {

// ---- PiRational -----------------------------------------------------------------

PiRational::PiRational(Rational r, int pi_power) {
    if (r.numerator() != 0) terms_[pi_power] = r;
}

void PiRational::normalise() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second.numerator() == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

double PiRational::to_double() const {
    double v = 0.0;
    for (const auto& [k, r] : terms_) v += boost::rational_cast<double>(r) * std::pow(specfun::pi, k);
    return v;
}

Rational PiRational::coefficient(int k) const {
    const auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
}

PiRational& PiRational::operator+=(const PiRational& o) {
    for (const auto& [k, r] : o.terms_) terms_[k] += r;
    normalise();
    return *this;
}

PiRational& PiRational::operator-=(const PiRational& o) {
    for (const auto& [k, r] : o.terms_) terms_[k] -= r;
    normalise();
    return *this;
}

PiRational& PiRational::operator*=(const PiRational& o) {
    std::map<int, Rational> product;
    for (const auto& [i, a] : terms_)
        for (const auto& [j, b] : o.terms_) product[i + j] += a * b;
    terms_ = std::move(product);
    normalise();
    return *this;
}

PiRational& PiRational::operator/=(const Rational& r) {
    if (r.numerator() == 0) throw DomainError("PiRational: division by zero");
    for (auto& [k, c] : terms_) c /= r;
    return *this;
}

std::string PiRational::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, r] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << r;
        if (k == 1)
            os << "*pi";
        else if (k != 0)
            os << "*pi^" << k;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const PiRational& x) { return os << x.str(); }

// ---- Expansions -------------------------------------------------------------------

double ExpansionTerms::evaluate(double t) const {
    if (!(t > 0.0)) throw DomainError("ExpansionTerms::evaluate: t must be positive");
    const double lt = std::log(t);
    double v = 0.0;
    for (const auto& [s, c] : e) v += c * std::pow(t, s - dimension);
    for (const auto& [s, c] : f) v += c * lt * std::pow(t, s - dimension);
    return v;
}

template <class S>
ExpansionTerms AsymptoticExpansion<S>::at(double mu) const {
    ExpansionTerms out;
    out.dimension = d_;
    out.max_order = n_;
    for (const auto& [s, p] : e_) out.e[s] = p(mu);
    for (const auto& [s, p] : f_) out.f[s] = p(mu);
    return out;
}

template class AsymptoticExpansion<double>;
template class AsymptoticExpansion<PiRational>;

namespace {

bool same_value(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)); }
bool same_value(const PiRational& a, const PiRational& b) { return a == b; }

template <class S>
void validate_initial(const InitialData<S>& initial, int d, const MuPolynomial<S>& e_renorm, int n) {
    if (d < 1) throw PreconditionError("solve_cylinder_recursion: dimension must be >= 1");
    if (n < 0) throw PreconditionError("solve_cylinder_recursion: max_order must be >= 0");
    for (const auto& [s, value] : initial.f) {
        (void)value;
        if (!has_log_term(s, d)) {
            throw PreconditionError("solve_cylinder_recursion: f_" + std::to_string(s) +
                                    "(0) given where the expansion has no log term");
        }
    }
    for (int s = 0; s <= n; ++s) {
        if (s != d + 1 && initial.e.count(s) == 0)
            throw PreconditionError("solve_cylinder_recursion: missing initial datum e_" + std::to_string(s) + "(0)");
        if (has_log_term(s, d) && initial.f.count(s) == 0)
            throw PreconditionError("solve_cylinder_recursion: missing initial datum f_" + std::to_string(s) + "(0)");
    }
    if (const auto it = initial.e.find(d + 1); it != initial.e.end() && !same_value(it->second, e_renorm.at_zero())) {
        throw PreconditionError("solve_cylinder_recursion: supplied e_" + std::to_string(d + 1) +
                                "(0) disagrees with e_renorm(0)");
    }
}

}  // namespace

template <class S>
AsymptoticExpansion<S> solve_cylinder_recursion(const InitialData<S>& initial, int d, const MuPolynomial<S>& e_renorm,
                                                int n) {
    using Poly = MuPolynomial<S>;
    validate_initial(initial, d, e_renorm, n);
    std::map<int, Poly> e, f;
    auto get = [](const std::map<int, Poly>& m, int s) {
        const auto it = m.find(s);
        return it == m.end() ? Poly{} : it->second;
    };

    for (int s = 0; s <= n; ++s) {
        const std::int64_t k = s - d - 1;
        Poly f_rate;
        if (has_log_term(s, d)) {
            // At s = d+1 the log relation is empty; the power relation fixes f' instead.
            f_rate = s == d + 1 ? get(e, s - 2) / 2 : get(f, s - 2) / (2 * k);
            f[s] = f_rate.antiderivative(initial.f.at(s));
        }
        if (s == d + 1) {
            e[s] = e_renorm;
        } else {
            const Poly e_rate = (get(e, s - 2) / 2 - f_rate) / k;
            e[s] = e_rate.antiderivative(initial.e.at(s));
        }
    }
    return {d, n, std::move(e), std::move(f), e_renorm};
}

template <class S>
std::vector<SubstitutionResidual<S>> substitution_residuals(const AsymptoticExpansion<S>& x) {
    const int d = x.dimension();
    std::vector<SubstitutionResidual<S>> out;
    for (int s = 0; s <= x.max_order(); ++s) {
        const S k(static_cast<std::int64_t>(s - d - 1));
        SubstitutionResidual<S> r;
        r.s = s;
        r.power_term = x.e(s).derivative() * k + x.f(s).derivative() - x.e(s - 2) / 2;
        r.log_term = x.f(s).derivative() * k - x.f(s - 2) / 2;
        out.push_back(std::move(r));
    }
    return out;
}

template <class S>
bool substitution_identities_hold(const AsymptoticExpansion<S>& x, double tol) {
    auto small = [tol](const MuPolynomial<S>& p) {
        if constexpr (MuPolynomial<S>::exact()) {
            (void)tol;
            return p.is_zero();
        } else {
            return std::all_of(p.coefficients().begin(), p.coefficients().end(),
                               [tol](double c) { return std::fabs(c) <= tol; });
        }
    };
    const auto residuals = substitution_residuals(x);
    return std::all_of(residuals.begin(), residuals.end(),
                       [&](const auto& r) { return small(r.power_term) && small(r.log_term); });
}

template AsymptoticExpansion<double> solve_cylinder_recursion(const InitialData<double>&, int,
                                                              const MuPolynomial<double>&, int);
template AsymptoticExpansion<PiRational> solve_cylinder_recursion(const InitialData<PiRational>&, int,
                                                                  const MuPolynomial<PiRational>&, int);
template std::vector<SubstitutionResidual<double>> substitution_residuals(const AsymptoticExpansion<double>&);
template std::vector<SubstitutionResidual<PiRational>> substitution_residuals(const AsymptoticExpansion<PiRational>&);
template bool substitution_identities_hold(const AsymptoticExpansion<double>&, double);
template bool substitution_identities_hold(const AsymptoticExpansion<PiRational>&, double);

// ---- Heat kernel ------------------------------------------------------------------------

std::vector<double> heat_coeffs_massive(const std::vector<double>& b0, double mu, int dimension) {
    if (dimension < 1) throw PreconditionError("heat_coeffs_massive: dimension must be >= 1");
    std::vector<double> out(b0.size(), 0.0);
    for (std::size_t s = 0; s < b0.size(); ++s) {
        double weight = 1.0;  // (-mu)^k / k!
        for (std::size_t k = 0; 2 * k <= s; ++k) {
            out[s] += weight * b0[s - 2 * k];
            weight *= -mu / static_cast<double>(k + 1);
        }
    }
    return out;
}

std::vector<MuPolynomial<PiRational>> heat_coeffs_massive_exact(const std::vector<PiRational>& b0) {
    std::vector<MuPolynomial<PiRational>> out;
    for (std::size_t s = 0; s < b0.size(); ++s) {
        std::vector<PiRational> c;
        Rational weight(1);
        for (std::size_t k = 0; 2 * k <= s; ++k) {
            c.push_back(b0[s - 2 * k] * PiRational(weight));
            weight /= -static_cast<std::int64_t>(k + 1);
        }
        out.emplace_back(std::move(c));
    }
    return out;
}

double heat_pde_residual(const HeatKernel& kernel, double mu, double t, double h) {
    if (!(h > 0.0)) throw DomainError("heat_pde_residual: step must be positive");
    if (mu + h == mu || mu - h == mu) throw DomainError("heat_pde_residual: step underflows at this mu");
    const double d_mu = (kernel(mu + h, t) - kernel(mu - h, t)) / (2.0 * h);
    return std::fabs(d_mu + t * kernel(mu, t));
}

// ---- Interval data ----------------------------------------------------------------------

namespace {

// B_0..B_n with B_1 = -1/2.
std::vector<Rational> bernoulli(int n) {
    std::vector<Rational> b(static_cast<std::size_t>(n) + 1);
    b[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational sum(0);
        std::int64_t binom = 1;  // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            sum += Rational(binom) * b[static_cast<std::size_t>(k)];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[static_cast<std::size_t>(m)] = -sum / Rational(m + 1);
    }
    return b;
}

}  // namespace

InitialData<PiRational> interval_initial_data(Rational length, int n) {
    if (length.numerator() <= 0) throw DomainError("interval_initial_data: L must be positive");
    if (n < 0 || n > 16) throw PreconditionError("interval_initial_data: max_order must be in [0, 16]");
    const auto b = bernoulli(n);
    InitialData<PiRational> data;
    std::int64_t factorial = 1;
    for (int s = 0; s <= n; ++s) {
        if (s > 0) factorial *= s;
        // (pi / L)^{s-1} = pi^{s-1} L^{1-s}
        Rational scale(1);
        for (int k = 0; k < std::abs(s - 1); ++k) scale *= length;
        if (s >= 1) scale = Rational(1) / scale;
        data.e[s] = PiRational(b[static_cast<std::size_t>(s)] * scale / Rational(factorial), s - 1);
        if (has_log_term(s, 1)) data.f[s] = PiRational(0);
    }
    return data;
}

InitialData<double> interval_initial_data(double length, int n) {
    if (!(length > 0.0)) throw DomainError("interval_initial_data: L must be positive");
    const auto exact = interval_initial_data(Rational(1), n);
    InitialData<double> data;
    for (const auto& [s, v] : exact.e) data.e[s] = v.to_double() * std::pow(length, 1 - s);
    for (const auto& [s, v] : exact.f) data.f[s] = v.to_double();
    return data;
}

// ---- Tabulated functions ----------------------------------------------------------------

TabulatedFunction::TabulatedFunction(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw PreconditionError("TabulatedFunction: need matching x, y with >= 2 points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw PreconditionError("TabulatedFunction: x must be strictly increasing");

    // Natural spline: tridiagonal solve for the second derivatives.
    second_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
        const double p = sig * second_[i - 1] + 2.0;
        second_[i] = (sig - 1.0) / p;
        const double slope = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) - (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
        u[i] = (6.0 * slope / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    second_[n - 1] = 0.0;
    for (std::size_t i = n - 1; i-- > 0;) second_[i] = second_[i] * second_[i + 1] + u[i];
    second_[0] = 0.0;
}

double TabulatedFunction::operator()(double x) const {
    if (!(x >= x_.front() && x <= x_.back())) throw DomainError("TabulatedFunction: argument outside the table");
    auto hi_it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t hi = hi_it == x_.end() ? x_.size() - 1 : static_cast<std::size_t>(hi_it - x_.begin());
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double h = x_[hi] - x_[lo];
    const double a = (x_[hi] - x) / h;
    const double b = (x - x_[lo]) / h;
    return a * y_[lo] + b * y_[hi] + ((a * a * a - a) * second_[lo] + (b * b * b - b) * second_[hi]) * h * h / 6.0;
}

// ---- Numeric recursion -------------------------------------------------------------------

namespace {

using Fn = std::shared_ptr<CoefficientFunction>;

Fn integrated(Fn rate, double at_zero) {
    return std::make_shared<CoefficientFunction>([rate, at_zero](double mu) {
        if (mu == 0.0) return at_zero;
        const quad::Tolerance tol{1e-14, 1e-12, 200'000};
        const double lo = std::min(0.0, mu), hi = std::max(0.0, mu);
        const auto r = quad::integrate_finite(*rate, lo, hi, tol);
        if (!r.converged)
            throw ConvergenceError("numeric recursion: mu-quadrature did not converge", r.value, r.error_estimate);
        return at_zero + (mu > 0.0 ? r.value : -r.value);
    });
}

}  // namespace

double NumericExpansion::e(int s, double mu) const {
    const auto it = e_.find(s);
    return it == e_.end() ? 0.0 : (*it->second)(mu);
}

double NumericExpansion::f(int s, double mu) const {
    const auto it = f_.find(s);
    return it == f_.end() ? 0.0 : (*it->second)(mu);
}

ExpansionTerms NumericExpansion::at(double mu) const {
    ExpansionTerms out;
    out.dimension = d_;
    out.max_order = n_;
    for (const auto& [s, fn] : e_) out.e[s] = (*fn)(mu);
    for (const auto& [s, fn] : f_) out.f[s] = (*fn)(mu);
    return out;
}

NumericExpansion solve_cylinder_recursion_numeric(const InitialData<double>& initial, int d,
                                                  CoefficientFunction e_renorm, int n) {
    if (!e_renorm) throw PreconditionError("solve_cylinder_recursion_numeric: e_renorm is required");
    const double renorm_zero = e_renorm(0.0);
    validate_initial(initial, d, MuPolynomial<double>::constant(renorm_zero), n);

    NumericExpansion x;
    x.d_ = d;
    x.n_ = n;
    const Fn zero = std::make_shared<CoefficientFunction>([](double) { return 0.0; });
    auto get = [&zero](const std::map<int, Fn>& m, int s) {
        const auto it = m.find(s);
        return it == m.end() ? zero : it->second;
    };

    for (int s = 0; s <= n; ++s) {
        const double k = s - d - 1;
        Fn f_rate = zero;
        if (has_log_term(s, d)) {
            const Fn source = s == d + 1 ? get(x.e_, s - 2) : get(x.f_, s - 2);
            const double divisor = s == d + 1 ? 2.0 : 2.0 * k;
            f_rate = std::make_shared<CoefficientFunction>([source, divisor](double mu) { return (*source)(mu) / divisor; });
            x.f_[s] = integrated(f_rate, initial.f.at(s));
        }
        if (s == d + 1) {
            x.e_[s] = std::make_shared<CoefficientFunction>(e_renorm);
        } else {
            const Fn source = get(x.e_, s - 2);
            auto e_rate = std::make_shared<CoefficientFunction>(
                [source, f_rate, k](double mu) { return (0.5 * (*source)(mu) - (*f_rate)(mu)) / k; });
            x.e_[s] = integrated(e_rate, initial.e.at(s));
        }
    }
    return x;
}

// ---- Fit check -----------------------------------------------------------------------------

FitReport expansion_fit_check(const std::function<double(double)>& kernel, const ExpansionTerms& terms,
                              const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw PreconditionError("expansion_fit_check: t grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0)) throw DomainError("expansion_fit_check: t values must be positive");
        if (i > 0 && !(t_grid[i] < t_grid[i - 1]))
            throw PreconditionError("expansion_fit_check: t grid must decrease");
    }
    const int d = terms.dimension;
    const int n = terms.max_order;

    FitReport report;
    report.expected_order = -d + n + 1;
    report.log_factor_expected = has_log_term(n + 1, d);
    report.t = t_grid;

    constexpr double floor_factor = 1e3 * std::numeric_limits<double>::epsilon();
    std::vector<double> ts, rs;
    for (double t : t_grid) {
        const double value = kernel(t);
        const double approx = terms.evaluate(t);
        const double r = value - approx;
        report.residual.push_back(r);
        const double floor = floor_factor * std::max(std::fabs(value), std::fabs(approx));
        if (std::fabs(r) > floor) {
            ts.push_back(t);
            rs.push_back(r);
        }
    }
    if (ts.size() < 3) {
        report.floor_reached = true;
        report.passed = true;
        return report;
    }

    using Basis = std::vector<std::function<double(double)>>;
    if (report.log_factor_expected) {
        // Slope of a t^p ln t term drifts with ln t, so fit the power directly.
        auto residual_at = [&](double p) {
            const Basis b = {[p](double t) { return std::pow(t, p) * std::log(t); },
                             [p](double t) { return std::pow(t, p); }};
            return detail::fit_basis(ts, rs, b).residual_norm;
        };
        double best_p = 0.0, best = std::numeric_limits<double>::infinity();
        for (double p = report.expected_order - 2.0; p <= report.expected_order + 3.0; p += 0.01) {
            const double r = residual_at(p);
            if (r < best) {
                best = r;
                best_p = p;
            }
        }
        double lo = best_p - 0.01, hi = best_p + 0.01;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 60; ++it) {
            const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
            if (residual_at(a) < residual_at(b))
                hi = b;
            else
                lo = a;
        }
        report.empirical_order = 0.5 * (lo + hi);
    } else {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            lx.push_back(std::log(ts[i]));
            ly.push_back(std::log(std::fabs(rs[i])));
        }
        const Basis line = {[](double) { return 1.0; }, [](double x) { return x; }};
        report.empirical_order = detail::fit_basis(lx, ly, line).coefficients[1];
    }

    // Leading coefficients with the next two orders included as nuisance terms.
    Basis basis;
    std::vector<int> role;  // 1: leading log, 2: leading power, 0: nuisance
    const double p = report.expected_order;
    for (int j = 0; j < 3; ++j) {
        const double q = p + j;
        if (has_log_term(n + 1 + j, d)) {
            basis.push_back([q](double t) { return std::pow(t, q) * std::log(t); });
            role.push_back(j == 0 ? 1 : 0);
        }
        basis.push_back([q](double t) { return std::pow(t, q); });
        role.push_back(j == 0 ? 2 : 0);
    }
    while (basis.size() + 1 > ts.size() && basis.size() > 1) {
        basis.pop_back();
        role.pop_back();
    }
    const auto fit = detail::fit_basis(ts, rs, basis);
    for (std::size_t i = 0; i < role.size(); ++i) {
        if (role[i] == 1) report.leading_log_coeff = fit.coefficients[i];
        if (role[i] == 2) report.leading_coeff = fit.coefficients[i];
    }

    report.passed = report.empirical_order >= report.expected_order - 0.1;
    return report;
}

}  // namespace vacuum::asymptotics
