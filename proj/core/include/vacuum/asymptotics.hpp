#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/rational.hpp>

#include "vacuum/errors.hpp"

namespace vacuum::asymptotics {

using Rational = boost::rational<std::int64_t>;

// Finite sum of rational multiples of integer powers of pi. Closed under +, -, * and
// division by rationals, which is all the recursions need.
class PiRational {
public:
    PiRational() = default;
    PiRational(std::int64_t n) : PiRational(Rational(n)) {}  // NOLINT(google-explicit-constructor)
    PiRational(Rational r, int pi_power = 0);                // NOLINT(google-explicit-constructor)

    static PiRational pi_power(int k) { return {Rational(1), k}; }

    bool is_zero() const noexcept { return terms_.empty(); }
    double to_double() const;
    // Coefficient of pi^k.
    Rational coefficient(int k) const;
    const std::map<int, Rational>& terms() const noexcept { return terms_; }

    PiRational& operator+=(const PiRational& o);
    PiRational& operator-=(const PiRational& o);
    PiRational& operator*=(const PiRational& o);
    PiRational& operator/=(const Rational& r);

    friend PiRational operator+(PiRational a, const PiRational& b) { return a += b; }
    friend PiRational operator-(PiRational a, const PiRational& b) { return a -= b; }
    friend PiRational operator*(PiRational a, const PiRational& b) { return a *= b; }
    friend PiRational operator/(PiRational a, const Rational& r) { return a /= r; }
    friend PiRational operator-(PiRational a) { return a *= PiRational(-1); }
    friend bool operator==(const PiRational& a, const PiRational& b) { return a.terms_ == b.terms_; }

    std::string str() const;

private:
    void normalise();
    std::map<int, Rational> terms_;
};

std::ostream& operator<<(std::ostream& os, const PiRational& x);

inline double to_double(double x) { return x; }
inline double to_double(const PiRational& x) { return x.to_double(); }

// Polynomial in mu with coefficients in S (double or PiRational), ascending powers.
template <class S>
class MuPolynomial {
public:
    MuPolynomial() = default;
    explicit MuPolynomial(std::vector<S> coefficients) : c_(std::move(coefficients)) { trim(); }
    static MuPolynomial constant(S value) { return MuPolynomial(std::vector<S>{std::move(value)}); }
    static MuPolynomial monomial(S value, std::size_t power) {
        std::vector<S> c(power + 1, S(0));
        c[power] = std::move(value);
        return MuPolynomial(std::move(c));
    }

    static constexpr bool exact() { return !std::is_floating_point_v<S>; }

    const std::vector<S>& coefficients() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    // -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    S coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : S(0); }
    S at_zero() const { return coefficient(0); }

    double operator()(double mu) const {
        double v = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * mu + to_double(*it);
        return v;
    }

    MuPolynomial derivative() const {
        std::vector<S> d;
        for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * S(static_cast<std::int64_t>(k)));
        return MuPolynomial(std::move(d));
    }

    // Antiderivative with the given value at mu = 0.
    MuPolynomial antiderivative(S at_zero) const {
        std::vector<S> a{std::move(at_zero)};
        for (std::size_t k = 0; k < c_.size(); ++k) a.push_back(divide(c_[k], static_cast<std::int64_t>(k + 1)));
        return MuPolynomial(std::move(a));
    }

    MuPolynomial& operator+=(const MuPolynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), S(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    MuPolynomial& operator-=(const MuPolynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), S(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    MuPolynomial& operator*=(const S& s) {
        for (auto& x : c_) x *= s;
        trim();
        return *this;
    }
    friend MuPolynomial operator+(MuPolynomial a, const MuPolynomial& b) { return a += b; }
    friend MuPolynomial operator-(MuPolynomial a, const MuPolynomial& b) { return a -= b; }
    friend MuPolynomial operator*(MuPolynomial a, const S& s) { return a *= s; }
    friend MuPolynomial operator*(const MuPolynomial& a, const MuPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<S> c(a.c_.size() + b.c_.size() - 1, S(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return MuPolynomial(std::move(c));
    }
    // Division by a nonzero integer, exact for PiRational.
    friend MuPolynomial operator/(const MuPolynomial& a, std::int64_t n) {
        std::vector<S> c;
        for (const auto& x : a.c_) c.push_back(divide(x, n));
        return MuPolynomial(std::move(c));
    }
    friend bool operator==(const MuPolynomial& a, const MuPolynomial& b) { return a.c_ == b.c_; }

private:
    static S divide(const S& x, std::int64_t n) {
        if constexpr (std::is_floating_point_v<S>)
            return x / static_cast<double>(n);
        else
            return x / Rational(n);
    }
    static bool is_zero_scalar(const S& x) {
        if constexpr (std::is_floating_point_v<S>)
            return x == 0.0;
        else
            return x.is_zero();
    }
    void trim() {
        while (!c_.empty() && is_zero_scalar(c_.back())) c_.pop_back();
    }
    std::vector<S> c_;
};

// Small-t expansion evaluated at one mu: T ~ sum_s (e_s + f_s ln t) t^{s - d}.
struct ExpansionTerms {
    int dimension = 1;
    int max_order = 0;
    std::map<int, double> e;
    std::map<int, double> f;

    double evaluate(double t) const;
};

// Massless data e_s(0), f_s(0). f entries are only meaningful at s > d with s - d odd.
template <class S>
struct InitialData {
    std::map<int, S> e;
    std::map<int, S> f;
};

// Cylinder-kernel coefficients as polynomials in mu, indexed by s.
template <class S>
class AsymptoticExpansion {
public:
    AsymptoticExpansion(int dimension, int max_order, std::map<int, MuPolynomial<S>> e_terms,
                        std::map<int, MuPolynomial<S>> f_terms, MuPolynomial<S> e_renorm)
        : d_(dimension), n_(max_order), e_(std::move(e_terms)), f_(std::move(f_terms)), renorm_(std::move(e_renorm)) {}

    int dimension() const noexcept { return d_; }
    int max_order() const noexcept { return n_; }

    // Zero outside the computed range.
    MuPolynomial<S> e(int s) const { return lookup(e_, s); }
    MuPolynomial<S> f(int s) const { return lookup(f_, s); }
    bool has_f(int s) const { return f_.count(s) != 0; }
    const std::map<int, MuPolynomial<S>>& e_terms() const noexcept { return e_; }
    const std::map<int, MuPolynomial<S>>& f_terms() const noexcept { return f_; }

    // The externally supplied e_{d+1}(mu).
    const MuPolynomial<S>& e_renorm() const noexcept { return renorm_; }
    static constexpr const char* e_renorm_origin() { return "SUPPLIED"; }

    ExpansionTerms at(double mu) const;

private:
    static MuPolynomial<S> lookup(const std::map<int, MuPolynomial<S>>& m, int s) {
        const auto it = m.find(s);
        return it == m.end() ? MuPolynomial<S>{} : it->second;
    }
    int d_;
    int n_;
    std::map<int, MuPolynomial<S>> e_;
    std::map<int, MuPolynomial<S>> f_;
    MuPolynomial<S> renorm_;
};

/// True at the indices that carry a logarithmic term: s > d and s - d odd.
inline bool has_log_term(int s, int d) { return s > d && (s - d) % 2 != 0; }

/// Integrates the mu-recursion for the cylinder coefficients through order max_order.
/// e_{d+1}(mu) is taken from e_renorm; its f partner follows from e_{d-1}.
/// Throws PreconditionError for missing or misplaced initial data, or when the supplied
/// e_{d+1}(0) disagrees with e_renorm(0).
template <class S>
AsymptoticExpansion<S> solve_cylinder_recursion(const InitialData<S>& initial, int dimension,
                                                const MuPolynomial<S>& e_renorm, int max_order);

// Both sides of the mu-recursion at index s, as polynomials; each holds iff it is zero.
template <class S>
struct SubstitutionResidual {
    int s = 0;
    MuPolynomial<S> power_term;  // (s-d-1) e_s' + f_s' - e_{s-2}/2
    MuPolynomial<S> log_term;    // (s-d-1) f_s' - f_{s-2}/2
};

/// Reassembles the central equation from the expansion, order by order.
template <class S>
std::vector<SubstitutionResidual<S>> substitution_residuals(const AsymptoticExpansion<S>& expansion);

template <class S>
bool substitution_identities_hold(const AsymptoticExpansion<S>& expansion, double tol = 0.0);

/// b_s(mu) = sum_k (-mu)^k / k! b_{s-2k}(0) for s = 0..N.
std::vector<double> heat_coeffs_massive(const std::vector<double>& b0, double mu, int dimension);

/// The same map, keeping each b_s(mu) as an exact polynomial in mu.
std::vector<MuPolynomial<PiRational>> heat_coeffs_massive_exact(const std::vector<PiRational>& b0);

// (mu, t) -> K(mu, t)
using HeatKernel = std::function<double(double, double)>;

/// |dK/dmu + t K| by central differences in mu.
double heat_pde_residual(const HeatKernel& kernel, double mu, double t, double h);

/// Massless interval data: e_s(0) = B_s (pi/L)^{s-1} / s! (B_1 = -1/2), f_s(0) = 0.
InitialData<PiRational> interval_initial_data(Rational length, int max_order);
InitialData<double> interval_initial_data(double length, int max_order);

/// Natural cubic spline through (x_i, y_i); x strictly increasing, at least two points.
class TabulatedFunction {
public:
    TabulatedFunction(std::vector<double> x, std::vector<double> y);

    // Throws DomainError outside [x_0, x_n].
    double operator()(double x) const;
    double lower() const noexcept { return x_.front(); }
    double upper() const noexcept { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> second_;
};

using CoefficientFunction = std::function<double(double)>;

/// Expansion whose coefficients are computed pointwise by mu-quadrature of the recursion,
/// for a non-polynomial e_{d+1}(mu).
class NumericExpansion {
public:
    int dimension() const noexcept { return d_; }
    int max_order() const noexcept { return n_; }
    bool has_f(int s) const { return f_.count(s) != 0; }
    double e(int s, double mu) const;
    double f(int s, double mu) const;
    ExpansionTerms at(double mu) const;

private:
    friend NumericExpansion solve_cylinder_recursion_numeric(const InitialData<double>&, int, CoefficientFunction,
                                                             int);
    int d_ = 1;
    int n_ = 0;
    std::map<int, std::shared_ptr<CoefficientFunction>> e_;
    std::map<int, std::shared_ptr<CoefficientFunction>> f_;
};

NumericExpansion solve_cylinder_recursion_numeric(const InitialData<double>& initial, int dimension,
                                                  CoefficientFunction e_renorm, int max_order);

struct FitReport {
    double empirical_order = 0.0;
    double expected_order = 0.0;     // power of the first omitted term, -d + N + 1
    bool log_factor_expected = false;  // first omitted index carries a ln t term
    bool floor_reached = false;      // residual at rounding level everywhere
    bool passed = false;             // empirical >= expected - 0.1, or floor reached
    double leading_log_coeff = 0.0;  // a in residual ~ t^p (a ln t + b), p = expected order
    double leading_coeff = 0.0;      // b
    std::vector<double> t;
    std::vector<double> residual;
};

/// Compares a kernel trace with its truncated expansion on a decreasing t grid.
FitReport expansion_fit_check(const std::function<double(double)>& kernel, const ExpansionTerms& terms,
                              const std::vector<double>& t_grid);

// Instantiated in the library for the two supported scalar types.
extern template class AsymptoticExpansion<double>;
extern template class AsymptoticExpansion<PiRational>;

}  // namespace vacuum::asymptotics
