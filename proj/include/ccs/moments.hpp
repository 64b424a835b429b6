#pragma once

// Moments of the weights and their comparison with the exact sequences.

#include <ccs/errors.hpp>
#include <ccs/quadrature.hpp>
#include <ccs/sequences.hpp>
#include <ccs/weights.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <optional>
#include <string>
#include <vector>

namespace ccs {

enum class SchemeKind { SubstitutionSqrt, JacobiEndpoints, DoubleExponential, TruncatedDE };

struct Scheme {
    SchemeKind kind = SchemeKind::DoubleExponential;
    double p = 0.0;      // JacobiEndpoints: exponent at x = 0
    double q = 0.0;      // JacobiEndpoints: exponent at x = R
    double cutoff = 0.0; // TruncatedDE: upper limit, 0 = chosen from the tail envelope

    static Scheme substitution_sqrt() { return {SchemeKind::SubstitutionSqrt}; }
    static Scheme double_exponential() { return {SchemeKind::DoubleExponential}; }
    static Scheme jacobi(double p, double q) { return {SchemeKind::JacobiEndpoints, p, q}; }
    static Scheme truncated_de(double cutoff = 0.0) {
        return {SchemeKind::TruncatedDE, 0.0, 0.0, cutoff};
    }

    std::string name() const {
        char buf[64];
        switch (kind) {
        case SchemeKind::SubstitutionSqrt: return "substitution_sqrt";
        case SchemeKind::DoubleExponential: return "double_exponential";
        case SchemeKind::JacobiEndpoints:
            std::snprintf(buf, sizeof buf, "jacobi(%g;%g)", p, q);
            return buf;
        case SchemeKind::TruncatedDE:
            std::snprintf(buf, sizeof buf, "truncated_de(%g)", cutoff);
            return buf;
        }
        return "?";
    }
};

struct QuadratureConfig {
    double rel_tol = 1e-10;
    int max_subdivisions = 12;
    /// Unset: the per-weight default from default_scheme().
    std::optional<Scheme> scheme;
    /// Tail tolerance for infinite supports, atom lists and mixture sums.
    double infinite_cutoff_tol = 1e-13;
    /// Printed constants whose zeroth moment is within this of 1 are kept.
    double calibration_tol = 1e-6;

    void validate() const {
        if (!(rel_tol > 0 && rel_tol < 1))
            throw DomainError("QuadratureConfig: rel_tol must lie in (0, 1)");
        if (max_subdivisions < 1)
            throw DomainError("QuadratureConfig: max_subdivisions must be positive");
        if (!(infinite_cutoff_tol > 0))
            throw DomainError("QuadratureConfig: infinite_cutoff_tol must be positive");
        if (scheme && scheme->kind == SchemeKind::JacobiEndpoints &&
            !(scheme->p > -1 && scheme->q > -1))
            throw DomainError("QuadratureConfig: Jacobi exponents must exceed -1");
    }
};

struct MomentRow {
    unsigned n = 0;
    ExactValue exact;
    double numeric = 0.0;
    double relative_error = 0.0;
    std::string scheme;

    friend bool operator==(const MomentRow&, const MomentRow&) = default;
};

struct MomentReport {
    SequenceId id;
    std::vector<MomentRow> rows;
    double max_relative_error = 0.0;
    double calibration_ratio = 1.0;

    friend bool operator==(const MomentReport&, const MomentReport&) = default;
};

struct CalibrationResult {
    WeightSpec spec;
    double mu0 = 1.0; // zeroth moment with the incoming constant
    bool rescaled = false;
};

/// Quadrature scheme used for a weight when the config does not force one.
///
///   W1, W6, W7   x = u^2, then exp-sinh on the half line
///   W2, W5, W8   exp-sinh on the half line
///   W3, W4       Gauss-Jacobi with the endpoint exponents factored out
///   W9, W10      tanh-sinh on (0, R); the remainder after factoring the
///                endpoint powers is not smooth (x^{1/3} and sqrt(R - x)
///                series, log terms at 27), which defeats Gauss-Jacobi
inline Scheme default_scheme(const WeightSpec& spec) {
    switch (spec.id.family()) {
    case Family::DoubleFactorialEven:
    case Family::Ex6:
    case Family::Ex7: return Scheme::substitution_sqrt();
    case Family::CentralBinomial:
    case Family::Catalan:
        return Scheme::jacobi(spec.endpoint_exponent_zero, spec.endpoint_R.exponent);
    default: return Scheme::double_exponential();
    }
}

namespace detail {

/// Label recorded in report rows for the discrete and mixed measures; the
/// suffix flags the atom carried at the origin (0^0 = 1).
inline constexpr const char* kDiscreteScheme = "discrete_atoms+origin_atom";
inline constexpr const char* kMixedScheme = "mixed_sum[jacobi(-0.5;0.5)]+origin_atom";

inline double ipow(double x, unsigned n) { return std::pow(x, static_cast<double>(n)); }

/// Upper limit U for truncating an infinite support: doubles U until the
/// tail estimate f(U) / (rate * power * U^{power-1}) of the moment integrand
/// falls below tol * |integral over [0, U]|.
template <typename Integrand, typename Integrate>
double choose_cutoff(const WeightSpec& spec, Integrand&& f, Integrate&& integrate, double tol) {
    const double rate = spec.decay.rate;
    const double power = spec.decay.power;
    if (!(rate > 0))
        throw TruncationFailure("no tail envelope declared for " + spec.label);
    double U = std::pow(1.0 / rate, 1.0 / power); // one decay length
    for (int i = 0; i < 64 && U < 1e8; ++i, U *= 2.0) {
        const double value = std::abs(f(U));
        const double tail = value / (rate * power * std::pow(U, power - 1.0));
        if (tail < tol * std::abs(integrate(U)))
            return U;
    }
    throw TruncationFailure("infinite-support cutoff exceeds 1e8 for " + spec.label);
}

inline double continuous_moment(const WeightSpec& spec, unsigned n, const QuadratureConfig& cfg,
                                const Scheme& scheme) {
    const double R = spec.support_upper;
    const bool finite = spec.finite_support();
    const int levels = cfg.max_subdivisions;
    auto integrand = [&](double x, double xc) {
        // abscissae that underflowed onto an endpoint carry no mass
        if (x <= 0.0 || xc <= 0.0)
            return 0.0;
        const double w = weight_value(spec, x, xc);
        if (w == 0.0)
            return 0.0;
        return ipow(x, n) * w;
    };
    const double inf = std::numeric_limits<double>::infinity();
    switch (scheme.kind) {
    case SchemeKind::DoubleExponential:
        if (finite)
            return quad::tanh_sinh(integrand, R, cfg.rel_tol, levels).value;
        return quad::exp_sinh([&](double x) { return integrand(x, inf); }, cfg.rel_tol, levels)
            .value;
    case SchemeKind::SubstitutionSqrt: {
        if (finite) {
            const double r = std::sqrt(R);
            auto g = [&](double u, double uc) {
                return 2.0 * u * integrand(u * u, uc * (r + u));
            };
            return quad::tanh_sinh(g, r, cfg.rel_tol, levels).value;
        }
        return quad::exp_sinh([&](double u) { return 2.0 * u * integrand(u * u, inf); },
                              cfg.rel_tol, levels)
            .value;
    }
    case SchemeKind::JacobiEndpoints: {
        if (!finite)
            throw DomainError("Jacobi endpoint scheme needs a finite support");
        auto g = [&](double x, double xc) {
            return integrand(x, xc) * std::pow(x, -scheme.p) * std::pow(xc, -scheme.q);
        };
        return quad::gauss_jacobi(g, R, scheme.p, scheme.q, cfg.rel_tol, std::min(levels, 7))
            .value;
    }
    case SchemeKind::TruncatedDE: {
        if (finite)
            return quad::tanh_sinh(integrand, R, cfg.rel_tol, levels).value;
        auto on = [&](double U) {
            return quad::tanh_sinh(integrand, U, cfg.rel_tol, levels).value;
        };
        const double U =
            scheme.cutoff > 0
                ? scheme.cutoff
                : choose_cutoff(spec, [&](double x) { return integrand(x, inf); }, on,
                                cfg.infinite_cutoff_tol);
        return on(U);
    }
    }
    throw DomainError("unknown quadrature scheme");
}

inline double discrete_moment(const WeightSpec& spec, unsigned n, const QuadratureConfig& cfg) {
    const AtomList list = bell_atoms(cfg.infinite_cutoff_tol, std::max(n, 1u));
    double sum = 0.0;
    // smallest atoms first
    for (auto it = list.atoms.rbegin(); it != list.atoms.rend(); ++it)
        sum += ipow(it->location, n) * it->mass;
    if (n == 0)
        sum += list.origin_mass;
    return spec.normalization_constant * sum;
}

/// Catalan-Bell mixture: term k is the Catalan density dilated to [0, 4k]
/// with mass 1/(e k!), i.e. (1/(2 pi e)) sqrt((4k - x)/x) / (k k!).
inline double mixed_moment(const WeightSpec& spec, unsigned n, const QuadratureConfig& cfg) {
    const double inv_e = std::exp(-1.0);
    const double c = spec.normalization_constant;
    double sum = 0.0;
    double inv_fact = 1.0;
    for (int k = 1; k <= 2000; ++k) {
        inv_fact /= k;
        const double upper = 4.0 * k;
        // sqrt((4k - x)/x) is exactly the Jacobi weight x^{-1/2} (4k - x)^{1/2}
        const double piece =
            quad::gauss_jacobi([&](double x, double) { return ipow(x, n); }, upper, -0.5, 0.5,
                               cfg.rel_tol)
                .value;
        const double term = c * piece * inv_fact / k;
        sum += term;
        // Term k equals piece(1) k^n / (e k!) up to the constant; the ratio of
        // successive terms (1 + 1/k)^n / (k + 1) decreases in k.
        const double ratio = ipow(1.0 + 1.0 / k, n) / (k + 1.0);
        if (ratio < 1.0 && term * ratio / (1.0 - ratio) < cfg.infinite_cutoff_tol * std::abs(sum))
            break;
        if (k == 2000)
            throw TruncationFailure("mixed-sum moment: tail bound not met within 2000 terms");
    }
    if (n == 0)
        sum += c / spec.printed_constant * inv_e; // origin atom of mass 1/e
    return sum;
}

} // namespace detail

/// n-th moment of the measure described by spec.
inline double moment(const WeightSpec& spec, unsigned n, const QuadratureConfig& cfg = {}) {
    cfg.validate();
    switch (spec.kind) {
    case WeightKind::Continuous:
        return detail::continuous_moment(spec, n, cfg, cfg.scheme.value_or(default_scheme(spec)));
    case WeightKind::DiscreteAtoms: return detail::discrete_moment(spec, n, cfg);
    case WeightKind::MixedSum: return detail::mixed_moment(spec, n, cfg);
    }
    throw DomainError("unknown weight kind");
}

inline std::string scheme_label(const WeightSpec& spec, const QuadratureConfig& cfg) {
    switch (spec.kind) {
    case WeightKind::DiscreteAtoms: return detail::kDiscreteScheme;
    case WeightKind::MixedSum: return detail::kMixedScheme;
    default: return cfg.scheme.value_or(default_scheme(spec)).name();
    }
}

/// Measures the zeroth moment with the current constant and rescales the
/// constant by 1/mu0 when |mu0 - 1| > tol.
inline CalibrationResult calibrate_constant(const WeightSpec& spec, double tol,
                                            const QuadratureConfig& cfg = {}) {
    CalibrationResult out{spec, moment(spec, 0, cfg), false};
    if (std::abs(out.mu0 - 1.0) > tol) {
        out.spec.normalization_constant = spec.normalization_constant / out.mu0;
        out.rescaled = true;
    }
    return out;
}

/// |numeric / exact - 1|, in log space once exact leaves double range.
inline double relative_error(double numeric, const ExactValue& exact) {
    const double e = exact.to_double();
    if (std::isfinite(e) && e > 0)
        return std::abs(numeric / e - 1.0);
    return std::abs(std::expm1(std::log(numeric) - exact.log()));
}

/// Calibrates the constant, then compares moments 0..n_max with c(n).
/// Moments are evaluated concurrently; a failure is rethrown tagged with n.
inline MomentReport verify_moments(const WeightSpec& spec, unsigned n_max,
                                   const QuadratureConfig& cfg = {}) {
    cfg.validate();
    CalibrationResult cal;
    try {
        cal = calibrate_constant(spec, cfg.calibration_tol, cfg);
    } catch (NumericalError& e) {
        e.set_failing_n(0);
        throw;
    }
    const auto exact = seq_prefix(spec.id, n_max);
    std::vector<std::future<double>> jobs;
    jobs.reserve(n_max + 1);
    for (unsigned n = 0; n <= n_max; ++n)
        jobs.push_back(std::async(std::launch::async,
                                  [&, n] { return moment(cal.spec, n, cfg); }));

    MomentReport report;
    report.id = spec.id;
    report.calibration_ratio = cal.mu0;
    const std::string label = scheme_label(spec, cfg);
    for (unsigned n = 0; n <= n_max; ++n) {
        double value = 0.0;
        try {
            value = jobs[n].get();
        } catch (NumericalError& e) {
            e.set_failing_n(static_cast<int>(n));
            // drain the remaining futures before propagating
            for (unsigned m = n + 1; m <= n_max; ++m) {
                try {
                    jobs[m].get();
                } catch (...) {
                }
            }
            throw;
        }
        MomentRow row{n, exact[n], value, relative_error(value, exact[n]), label};
        report.max_relative_error = std::max(report.max_relative_error, row.relative_error);
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace ccs
