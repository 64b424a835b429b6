#pragma once

// Double-precision special functions used by the weight formulas.
//
// erf, erfc, Gamma and K_nu delegate to the C++17 mathematical special
// functions of the standard library; the exponential integral, the upper
// incomplete gamma function for non-positive order, digamma and Gauss 2F1
// are implemented here.

#include <ccs/errors.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ccs::specialfn {

/// Declared accuracy of an exported function on its domain [lo, hi].
struct FnAccuracy {
    double relative_error_bound;
    double domain_lo;
    double domain_hi;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline constexpr FnAccuracy erf_accuracy{1e-12, 0.0, kInf};
inline constexpr FnAccuracy expint_accuracy{1e-12, 0.0, 700.0}; // Ei(-y) underflows past ~740
inline constexpr FnAccuracy bessel_k_accuracy{1e-10, 0.0, 700.0};
inline constexpr FnAccuracy hyp2f1_accuracy{1e-10, 0.0, 0.999};
inline constexpr FnAccuracy hyp2f1_log_endpoint_accuracy{1e-8, 0.999, 1.0 - 1e-6};
inline constexpr FnAccuracy gamma_accuracy{1e-13, 0.0, 170.0};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kTiny = 1e-300;

inline bool is_nonpositive_integer(double v) { return v <= 0 && v == std::nearbyint(v); }

/// 1/Gamma(v), zero at the poles.
inline double recip_gamma(double v) {
    if (is_nonpositive_integer(v))
        return 0.0;
    return 1.0 / std::tgamma(v);
}

/// Modified Lentz evaluation of the continued fraction for Gamma(a, y);
/// converges for y > 0 and is used for y >= 1, where a handful of dozen
/// iterations suffice.
inline double upper_gamma_cf(double a, double y) {
    double b = y + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps)
            return std::exp(-y + a * std::log(y)) * h;
    }
    throw QuadratureNonConvergence("upper incomplete gamma continued fraction did not converge");
}

/// E1(y) by its power series, y <= 1.
inline double expint_e1_series(double y) {
    constexpr double euler_gamma = std::numbers::egamma;
    double sum = 0.0;
    double fact = 1.0;
    for (int k = 1; k < 200; ++k) {
        fact *= -y / k;
        const double del = -fact / k;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps)
            break;
    }
    return -euler_gamma - std::log(y) + sum;
}

/// Direct Gauss series sum_k (a)_k (b)_k / ((c)_k k!) x^k.
inline double hyp2f1_series(double a, double b, double c, double x, long max_terms) {
    double term = 1.0;
    double sum = 1.0;
    int small = 0;
    for (long k = 0; k < max_terms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if (term == 0.0)
            return sum;
        if (std::abs(term) <= 0.5 * kEps * std::abs(sum)) {
            if (++small == 3)
                return sum;
        } else {
            small = 0;
        }
    }
    throw TruncationFailure("hypergeometric series did not converge within " +
                            std::to_string(max_terms) + " terms");
}

} // namespace detail

inline double erf(double y) {
    if (!(y >= 0))
        throw DomainError("erf: argument must be >= 0");
    return std::erf(y);
}

inline double erfc(double y) {
    if (!(y >= 0))
        throw DomainError("erfc: argument must be >= 0");
    return std::erfc(y);
}

inline double gamma_fn(double y) {
    if (!(y > 0))
        throw DomainError("gamma_fn: argument must be > 0");
    return std::tgamma(y);
}

/// psi(y) for y > 0: upward recurrence to y >= 15, then the asymptotic
/// series through the B_10 term (truncation error below 2e-16 there).
inline double digamma(double y) {
    if (!(y > 0))
        throw DomainError("digamma: argument must be > 0");
    double acc = 0.0;
    while (y < 15.0) {
        acc -= 1.0 / y;
        y += 1.0;
    }
    const double r = 1.0 / (y * y);
    const double series =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132)))));
    return acc + std::log(y) - 0.5 / y - series;
}

/// Gamma(a, y) for y > 0. Series-free: only the continued fraction is
/// provided, so y must be at least 1.
inline double upper_gamma(double a, double y) {
    if (!(y >= 1.0))
        throw DomainError("upper_gamma: continued fraction requires y >= 1");
    if (y > 745.0)
        return 0.0;
    return detail::upper_gamma_cf(a, y);
}

/// E1(y) = -Ei(-y), y > 0. Series below 1, continued fraction above.
inline double expint_e1(double y) {
    if (!(y > 0))
        throw DomainError("expint: argument must be > 0");
    if (y <= 1.0)
        return detail::expint_e1_series(y);
    if (y > 745.0)
        return 0.0;
    return detail::upper_gamma_cf(0.0, y);
}

/// Ei(-y) for y > 0.
inline double expint_Ei_neg(double y) { return -expint_e1(y); }

/// K_nu(y) for nu in {1/3, 2/3}.
inline double bessel_K(double nu, double y) {
    const bool supported =
        std::abs(nu - 1.0 / 3.0) < 1e-12 || std::abs(nu - 2.0 / 3.0) < 1e-12;
    if (!supported)
        throw DomainError("bessel_K: only orders 1/3 and 2/3 are supported");
    if (!(y > 0))
        throw DomainError("bessel_K: argument must be > 0");
    // K_nu(y) < sqrt(pi/(2y)) e^{-y} underflows past y ~ 705, where the
    // library routine raises instead of returning zero.
    if (y > 705.0)
        return 0.0;
    return std::cyl_bessel_k(nu, y);
}

namespace detail {

/// 2F1 with the complement 1 - x supplied separately so callers near x = 1
/// keep full relative precision in the logarithm.
inline double hyp2f1(double a, double b, double c, double x, double one_minus_x) {
    if (!(x >= 0 && one_minus_x > 0))
        throw DomainError("hyp2f1: argument must lie in [0, 1)");
    if (is_nonpositive_integer(c))
        throw DomainError("hyp2f1: c must not be a non-positive integer");
    if (x == 0)
        return 1.0;
    const bool terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    // Crossover at x = 1/2: below it the direct series converges at least
    // like 2^-k; above it the series in 1 - x does.
    if (x <= 0.5 || terminating)
        return hyp2f1_series(a, b, c, x, 100000);

    const double w = one_minus_x;
    const double s = c - a - b;
    const double m = std::nearbyint(s);
    if (std::abs(s - m) > 1e-12) {
        // Non-integer c - a - b: connection formula to argument 1 - x.
        const double g1 = std::tgamma(c) * std::tgamma(s) * recip_gamma(c - a) * recip_gamma(c - b);
        const double g2 = std::tgamma(c) * std::tgamma(-s) * recip_gamma(a) * recip_gamma(b);
        double result = 0.0;
        if (g1 != 0.0)
            result += g1 * hyp2f1_series(a, b, 1.0 - s, w, 100000);
        if (g2 != 0.0)
            result += g2 * std::pow(w, s) * hyp2f1_series(c - a, c - b, 1.0 + s, w, 100000);
        return result;
    }
    if (m == 0.0 && a > 0 && b > 0) {
        // c = a + b: logarithmic case,
        //   Gamma(a+b)/(Gamma(a)Gamma(b)) sum_n (a)_n (b)_n / (n!)^2
        //     [2 psi(n+1) - psi(a+n) - psi(b+n) - ln w] w^n
        const double log_w = std::log(w);
        double psi1 = -std::numbers::egamma;
        double psia = digamma(a);
        double psib = digamma(b);
        double coef = 1.0;
        double sum = 0.0;
        for (int n = 0; n < 100000; ++n) {
            const double term = coef * (2.0 * psi1 - psia - psib - log_w);
            sum += term;
            if (n > 2 && std::abs(term) <= 0.5 * kEps * std::abs(sum))
                return std::tgamma(a + b) * recip_gamma(a) * recip_gamma(b) * sum;
            coef *= (a + n) * (b + n) / ((n + 1.0) * (n + 1.0)) * w;
            psi1 += 1.0 / (n + 1.0);
            psia += 1.0 / (a + n);
            psib += 1.0 / (b + n);
        }
        throw TruncationFailure("hyp2f1: logarithmic expansion did not converge");
    }
    // Remaining integer c - a - b: direct summation (slow as x -> 1).
    return hyp2f1_series(a, b, c, x, 10000000);
}

} // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; x) for 0 <= x < 1.
inline double hyp2f1(double a, double b, double c, double x) {
    return detail::hyp2f1(a, b, c, x, 1.0 - x);
}

/// Heaviside step with H(0) = 0.
inline double heaviside(double y) { return y > 0 ? 1.0 : 0.0; }

} // namespace ccs::specialfn
