#include "vacuum/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "vacuum/errors.hpp"

namespace vacuum::specfun {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Taylor coefficients of 1/Gamma(z) about z = 0; index k multiplies z^k.
constexpr std::array<double, 31> rgamma_taylor = {
    0.0,
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -2.05633841697760710345e-7,
    6.116095104481415817862e-9,
    5.002007644469222930056e-9,
    -1.181274570487020144588e-9,
    1.043426711691100510492e-10,
    7.78226343990507125405e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
    1.18669225475160033258e-18,
    1.412380655318031781556e-18,
    -2.298745684435370206592e-19,
    1.714406321927337433384e-20,
};

// 1/Gamma(1+x) for |x| <= 1/2: sum_k a_k x^(k-1).
double rgamma1p(double x) {
    double sum = 0.0;
    for (std::size_t k = rgamma_taylor.size() - 1; k >= 1; --k) sum = sum * x + rgamma_taylor[k];
    return sum;
}

void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) throw DomainError(std::string(who) + ": argument is not finite");
}

// ---- J0 / J1 ---------------------------------------------------------------

constexpr double series_limit = 8.0;
constexpr double asymptotic_limit = 25.0;

double j0_series(double x) {
    const double y = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -y / (double(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-18 && k > y) break;
    }
    return sum;
}

double j1_series(double x) {
    const double y = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -y / (double(k) * (k + 1));
        sum += term;
        if (std::fabs(term) < 1e-18 && k > y) break;
    }
    return 0.5 * x * sum;
}

// Miller backward recurrence normalised by J0 + 2 sum_{k>=1} J_{2k} = 1.
void j01_miller(double x, double& j0, double& j1) {
    const int start = 2 * static_cast<int>((x + 40.0) / 2.0) + 2;
    const double two_over_x = 2.0 / x;
    double next = 0.0;     // J_{n+1}
    double current = 1e-30;  // J_n
    double even_sum = 0.0;
    double j1_raw = 0.0;
    for (int n = start; n >= 1; --n) {
        const double prev = n * two_over_x * current - next;  // J_{n-1}
        next = current;
        current = prev;
        const int index = n - 1;
        if (index == 1) j1_raw = current;
        if (index > 0 && index % 2 == 0) even_sum += current;
        if (std::fabs(current) > 1e250) {
            current *= 1e-250;
            next *= 1e-250;
            even_sum *= 1e-250;
            j1_raw *= 1e-250;
        }
    }
    const double norm = current + 2.0 * even_sum;
    j0 = current / norm;
    j1 = j1_raw / norm;
}

// Hankel asymptotic P, Q for order nu.
void hankel_pq(double nu, double x, double& p, double& q) {
    const double mu = 4.0 * nu * nu;
    double a = 1.0;
    double last = 1.0;
    p = 1.0;
    q = 0.0;
    for (int k = 1; k < 100; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (8.0 * k * x);
        if (std::fabs(a) > std::fabs(last) && k > 2) break;  // past the smallest term
        last = a;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) p += sign * a; else q += sign * a;
        if (std::fabs(a) < 1e-18) break;
    }
}

double j0_positive(double x) {
    if (x < series_limit) return j0_series(x);
    if (x < asymptotic_limit) {
        double j0 = 0.0;
        double j1 = 0.0;
        j01_miller(x, j0, j1);
        return j0;
    }
    double p = 0.0;
    double q = 0.0;
    hankel_pq(0.0, x, p, q);
    const double s = std::sin(x);
    const double c = std::cos(x);
    return (p * (c + s) - q * (s - c)) / std::sqrt(pi * x);
}

double j1_positive(double x) {
    if (x < series_limit) return j1_series(x);
    if (x < asymptotic_limit) {
        double j0 = 0.0;
        double j1 = 0.0;
        j01_miller(x, j0, j1);
        return j1;
    }
    double p = 0.0;
    double q = 0.0;
    hankel_pq(1.0, x, p, q);
    const double s = std::sin(x);
    const double c = std::cos(x);
    return (p * (s - c) + q * (s + c)) / std::sqrt(pi * x);
}

// ---- K_nu -------------------------------------------------------------------

// Returns e^x K_nu(x) for x > 0 (Temme series for x <= 2, Steed's CF2 beyond),
// followed by forward recurrence from |mu| <= 1/2 to nu.
double bessel_k_scaled_impl(double nu, double x) {
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    double rkmu = 0.0;
    double rk1 = 0.0;

    if (x <= 2.0) {
        const double x2 = 0.5 * x;
        const double pimu = pi * xmu;
        const double fact = std::fabs(pimu) < eps ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = xmu * d;
        const double fact2 = std::fabs(e) < eps ? 1.0 : std::sinh(e) / e;

        double gam1 = 0.0;
        for (std::size_t k = rgamma_taylor.size() - 1; k >= 2; --k) {
            if (k % 2 == 0) gam1 = gam1 * xmu2 + rgamma_taylor[k];
        }
        gam1 = -gam1;
        double gam2 = 0.0;
        for (std::size_t k = rgamma_taylor.size() - 1; k >= 1; --k) {
            if (k % 2 == 1) gam2 = gam2 * xmu2 + rgamma_taylor[k];
        }
        const double gampl = gam2 - xmu * gam1;  // 1/Gamma(1+mu)
        const double gammi = gam2 + xmu * gam1;  // 1/Gamma(1-mu)

        double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        for (int i = 1; i < 500; ++i) {
            ff = (i * ff + p + q) / (i * double(i) - xmu2);
            c *= d / i;
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = c * ff;
            sum += del;
            sum1 += c * (p - i * ff);
            if (std::fabs(del) < std::fabs(sum) * eps) break;
        }
        const double scale = std::exp(x);
        rkmu = sum * scale;
        rk1 = sum1 * xi2 * scale;
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        for (int i = 2; i < 10000; ++i) {
            a -= 2.0 * (i - 1);
            c = -a * c / i;
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const double dels = q * delh;
            s += dels;
            if (std::fabs(dels / s) < eps) break;
        }
        h = a1 * h;
        rkmu = std::sqrt(pi / (2.0 * x)) / s;
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
    }

    for (int i = 1; i <= nl; ++i) {
        const double next = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
    }
    return rkmu;
}

void check_k_argument(double x) {
    require_finite(x, "bessel_k");
    if (x <= 0.0) throw DomainError("bessel_k: x must be positive");
}

// ---- Zeros ------------------------------------------------------------------

double zero_newton(int order, std::size_t k) {
    const double nu = order;
    const double beta = (double(k) + 0.5 * nu - 0.25) * pi;
    const double mu = 4.0 * nu * nu;
    const double b8 = 8.0 * beta;
    double x = beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
    for (int it = 0; it < 60; ++it) {
        double f = 0.0;
        double df = 0.0;
        if (order == 0) {
            f = bessel_j0(x);
            df = -bessel_j1(x);
        } else {
            f = bessel_j1(x);
            df = bessel_j0(x) - f / x;
        }
        const double step = f / df;
        x -= step;
        if (std::fabs(step) <= 4.0 * eps * x) break;
    }
    return x;
}

constexpr std::size_t cached_zero_count = 4096;

const std::vector<double>& zero_table(int order) {
    static const std::vector<double> tables[2] = {
        [] {
            std::vector<double> z(cached_zero_count);
            for (std::size_t k = 0; k < z.size(); ++k) z[k] = zero_newton(0, k + 1);
            return z;
        }(),
        [] {
            std::vector<double> z(cached_zero_count);
            for (std::size_t k = 0; k < z.size(); ++k) z[k] = zero_newton(1, k + 1);
            return z;
        }(),
    };
    return tables[order];
}

}  // namespace

RealOrder::RealOrder(double nu) : nu_(nu) {
    if (!std::isfinite(nu) || nu < 0.0) throw DomainError("RealOrder: order must be finite and >= 0");
}

double bessel_j0(double x) {
    require_finite(x, "bessel_j0");
    return j0_positive(std::fabs(x));
}

double bessel_j1(double x) {
    require_finite(x, "bessel_j1");
    const double value = j1_positive(std::fabs(x));
    return x < 0.0 ? -value : value;
}

double bessel_j(int order, double x) {
    if (order == 0) return bessel_j0(x);
    if (order == 1) return bessel_j1(x);
    throw DomainError("bessel_j: only orders 0 and 1 are supported");
}

double bessel_k_scaled(RealOrder nu, double x) {
    check_k_argument(x);
    return bessel_k_scaled_impl(nu.value(), x);
}

BesselKResult bessel_k_checked(RealOrder nu, double x) {
    check_k_argument(x);
    const double scaled = bessel_k_scaled_impl(nu.value(), x);
    // Split e^{-x} so the product does not underflow before the scaled factor is applied.
    const double value = (scaled * std::exp(-0.5 * x)) * std::exp(-0.5 * x);
    if (value < std::numeric_limits<double>::min()) return {0.0, true};
    return {value, false};
}

double bessel_k(RealOrder nu, double x) { return bessel_k_checked(nu, x).value; }

double bessel_k(double nu, double x) { return bessel_k(RealOrder(nu), x); }

double gamma_fn(double x) {
    require_finite(x, "gamma_fn");
    if (x <= 0.0) throw DomainError("gamma_fn: argument must be positive");
    if (x > 171.7) return std::numeric_limits<double>::infinity();
    if (x < 0.5) {
        // Gamma(x) = Gamma(1+x)/x with 1+x in [1, 1.5).
        return 1.0 / (x * rgamma1p(x));
    }
    if (x <= 20.0) {
        // Reduce to [0.5, 1.5) and multiply back up; exact for integers.
        double shift = x;
        double product = 1.0;
        while (shift >= 1.5) {
            shift -= 1.0;
            product *= shift;
        }
        return product / rgamma1p(shift - 1.0);
    }
    // Stirling series for log Gamma.
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double correction =
        inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    const double log_gamma = (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * pi) + correction;
    return std::exp(log_gamma);
}

double bessel_zero(int order, std::size_t k) {
    if (order != 0 && order != 1) throw DomainError("bessel_zero: only orders 0 and 1 are supported");
    if (k == 0) throw DomainError("bessel_zero: zeros are numbered from 1");
    if (k <= cached_zero_count) return zero_table(order)[k - 1];
    return zero_newton(order, k);
}

std::vector<double> j1_zeros(std::size_t n) {
    std::vector<double> zeros;
    zeros.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) zeros.push_back(bessel_zero(1, k));
    return zeros;
}

}  // namespace vacuum::specfun
