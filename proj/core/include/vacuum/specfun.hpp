#pragma once

#include <cstddef>
#include <vector>

namespace vacuum::specfun {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

// Bessel order for K_nu. Only finite, non-negative orders are representable.
class RealOrder {
public:
    explicit RealOrder(double nu);
    double value() const noexcept { return nu_; }

private:
    double nu_;
};

struct BesselKResult {
    double value = 0.0;
    // Set when the true value lies below the smallest normal double and 0 was returned.
    bool underflow = false;
};

/// J_0(x). Even in x; throws DomainError for non-finite input.
double bessel_j0(double x);

/// J_1(x). Odd in x; throws DomainError for non-finite input.
double bessel_j1(double x);

/// J_0 or J_1 selected at run time; `order` must be 0 or 1.
double bessel_j(int order, double x);

/// K_nu(x) for x > 0. Values below the normal range come back as 0 with `underflow` set.
BesselKResult bessel_k_checked(RealOrder nu, double x);

double bessel_k(RealOrder nu, double x);
double bessel_k(double nu, double x);

/// e^x K_nu(x); never underflows for moderate orders.
double bessel_k_scaled(RealOrder nu, double x);

/// Gamma(x) for x > 0.
double gamma_fn(double x);

/// First n positive zeros of J_1, strictly increasing.
std::vector<double> j1_zeros(std::size_t n);

/// k-th positive zero (k >= 1) of J_order, order 0 or 1. The first few thousand are cached.
double bessel_zero(int order, std::size_t k);

}  // namespace vacuum::specfun
