#pragma once

// Quadrature rules for integrands with integrable endpoint singularities.
//
// Integrands on a finite interval [0, L] are called as f(x, xc) where
// xc = L - x is supplied separately: near the right endpoint x itself has
// lost the digits that xc still carries.

#include <ccs/errors.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

namespace ccs::quad {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int levels = 0;
    long evaluations = 0;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Level-refined double-exponential summation. `node(t)` returns
/// (weight * f) at abscissa parameter t; `t_min`, `t_max` bound the
/// parameter range beyond which nodes fall outside double range.
template <typename Node>
QuadResult de_refine(Node&& node, double t_min, double t_max, double rel_tol, int max_levels,
                     const char* what) {
    double h = 1.0;
    double sum = node(0.0);
    double abs_sum = std::abs(sum);
    long evals = 1;
    auto add_range = [&](double step, double offset) {
        for (double t = offset; t <= t_max; t += step) {
            const double v = node(t);
            sum += v;
            abs_sum += std::abs(v);
            ++evals;
        }
        for (double t = -offset; t >= t_min; t -= step) {
            const double v = node(t);
            sum += v;
            abs_sum += std::abs(v);
            ++evals;
        }
    };
    add_range(1.0, 1.0);
    double estimate = h * sum;
    for (int level = 1; level <= max_levels; ++level) {
        h *= 0.5;
        add_range(2.0 * h, h);
        const double next = h * sum;
        if (!std::isfinite(next))
            throw QuadratureNonConvergence(std::string(what) + ": non-finite integrand value");
        const double diff = std::abs(next - estimate);
        estimate = next;
        // Differences at the rounding floor of the sum count as converged.
        const double floor = 64.0 * kEps * h * abs_sum;
        if (level >= 3 && (diff <= rel_tol * std::abs(next) || diff <= floor))
            return {next, diff, level, evals};
    }
    throw QuadratureNonConvergence(std::string(what) + ": no convergence after " +
                                   std::to_string(max_levels) + " refinement levels");
}

} // namespace detail

/// Tanh-sinh rule on [0, L]: x = L/2 (1 + tanh(pi/2 sinh t)).
template <typename F>
QuadResult tanh_sinh(F&& f, double length, double rel_tol, int max_levels = 12) {
    if (!(length > 0) || !std::isfinite(length))
        throw DomainError("tanh_sinh: interval length must be positive and finite");
    constexpr double half_pi = std::numbers::pi / 2;
    auto node = [&](double t) -> double {
        const double s = half_pi * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(s));
        // distance to the nearer endpoint and to the farther one
        const double near = length * e / (1.0 + e);
        const double far = length / (1.0 + e);
        if (near <= 0.0)
            return 0.0;
        const double x = t >= 0 ? far : near;
        const double xc = t >= 0 ? near : far;
        const double ch = std::cosh(s);
        const double w = 0.5 * length * half_pi * std::cosh(t) / (ch * ch);
        if (w == 0.0)
            return 0.0;
        return w * f(x, xc);
    };
    // Past |t| = 6.1 the nearer distance is below 1e-300 * L.
    return detail::de_refine(node, -6.1, 6.1, rel_tol, max_levels, "tanh-sinh");
}

/// Exp-sinh rule on [0, inf): x = exp(pi/2 sinh t). f is called as f(x).
template <typename F>
QuadResult exp_sinh(F&& f, double rel_tol, int max_levels = 12) {
    constexpr double half_pi = std::numbers::pi / 2;
    auto node = [&](double t) -> double {
        const double s = half_pi * std::sinh(t);
        const double x = std::exp(s);
        if (x == 0.0 || !std::isfinite(x))
            return 0.0;
        const double v = f(x);
        if (v == 0.0)
            return 0.0;
        return x * half_pi * std::cosh(t) * v;
    };
    // exp(+-700) bounds the abscissae.
    return detail::de_refine(node, -6.75, 6.75, rel_tol, max_levels, "exp-sinh");
}

struct GaussRule {
    std::vector<double> nodes;   // in (-1, 1)
    std::vector<double> weights; // for (1 - t)^alpha (1 + t)^beta
};

/// n-point Gauss-Jacobi rule by the Golub-Welsch eigenvalue method.
inline GaussRule gauss_jacobi_rule(int n, double alpha, double beta) {
    if (n < 1)
        throw DomainError("gauss_jacobi_rule: n must be >= 1");
    if (!(alpha > -1 && beta > -1))
        throw DomainError("gauss_jacobi_rule: exponents must exceed -1");
    thread_local std::map<std::tuple<int, double, double>, GaussRule> cache;
    const auto key = std::make_tuple(n, alpha, beta);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;

    const double ab = alpha + beta;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 1));
    diag(0) = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double b2;
        if (k == 1) // (ab + 1) cancels analytically; it vanishes for ab = -1
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        sub(k - 1) = std::sqrt(b2);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag(0);
        rule.weights[0] = mu0;
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
        for (int i = 0; i < n; ++i) {
            rule.nodes[i] = solver.eigenvalues()(i);
            const double v0 = solver.eigenvectors()(0, i);
            rule.weights[i] = mu0 * v0 * v0;
        }
    }
    cache.emplace(key, rule);
    return rule;
}

/// Integral over [0, R] of x^p (R - x)^q g(x, R - x), doubling the Gauss-Jacobi
/// order from 16 until successive results agree to rel_tol.
template <typename G>
QuadResult gauss_jacobi(G&& g, double upper, double p, double q, double rel_tol,
                        int max_levels = 6) {
    if (!(upper > 0) || !std::isfinite(upper))
        throw DomainError("gauss_jacobi: support must be a finite interval");
    const double scale = std::pow(0.5 * upper, p + q + 1.0);
    auto apply = [&](int n) {
        const GaussRule rule = gauss_jacobi_rule(n, q, p);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = 0.5 * upper * (1.0 + rule.nodes[i]);
            const double xc = 0.5 * upper * (1.0 - rule.nodes[i]);
            sum += rule.weights[i] * g(x, xc);
        }
        return scale * sum;
    };
    int n = 16;
    double prev = apply(n);
    long evals = n;
    for (int level = 1; level <= max_levels; ++level) {
        n *= 2;
        const double next = apply(n);
        evals += n;
        const double diff = std::abs(next - prev);
        if (diff <= rel_tol * std::abs(next) || diff <= 64 * detail::kEps * std::abs(next))
            return {next, diff, level, evals};
        prev = next;
    }
    throw QuadratureNonConvergence("gauss-jacobi: no convergence up to " + std::to_string(n) +
                                   " nodes");
}

} // namespace ccs::quad
