#pragma once

// Coherent states |z>_c = N_c(|z|^2)^{-1/2} sum_n z^n / sqrt(c(n)) |n>.

#include <ccs/errors.hpp>
#include <ccs/sequences.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace ccs {

using Complex = std::complex<double>;

struct StateParams {
    SequenceId id;
    Complex z;
    unsigned n_max = 0;
    double series_tol = 1e-12;
};

struct StateVector {
    std::vector<Complex> amplitudes; // a_0 .. a_{n_max}
    double truncation_mass = 0.0;    // probability carried by n > n_max
};

namespace detail {

/// Hard cap on the number of series terms.
inline constexpr long kMaxSeriesTerms = 400'000'000;

inline void require_state_sequence(const SequenceId& id) {
    if (id.family() == Family::Bell || id.is_product())
        throw UnsupportedSequence(to_string(id) +
                                  ": normalization series has zero radius of convergence");
}

/// Rejects x outside [0, R) and x too close to R for the ratio bound.
inline void check_radius(const SequenceId& id, double x, const char* what) {
    if (!(x >= 0) || !std::isfinite(x))
        throw DomainError(std::string(what) + ": argument must be finite and >= 0");
    const double R = radius_of_convergence(id);
    if (std::isfinite(R)) {
        if (x >= R) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%g", R);
            throw RadiusExceeded(std::string(what) + ": |z|^2 = " + std::to_string(x) +
                                     " is not below the radius of convergence R = " + buf +
                                     " of " + to_string(id),
                                 R);
        }
        if (x / R > 1.0 - 1e-6)
            throw SlowConvergence(std::string(what) + ": x/R exceeds 1 - 1e-6");
    }
}

/// Terms t_n = x^n / c(n) up to the index where the geometric bound on the
/// remainder drops below tol * (sum so far). The term ratios x / eps_{n+1}
/// are non-increasing for every supported sequence, so once a ratio is below
/// one the remainder after t_N is at most t_{N+1} / (1 - x / eps_{N+2}).
struct SeriesTerms {
    std::vector<double> terms;
    double sum = 0.0;
    double tail_bound = 0.0;
};

inline SeriesTerms series_terms(const SequenceId& id, double x, double tol,
                                std::size_t min_terms = 1) {
    SeriesTerms s;
    double t = 1.0;
    for (long n = 0; n < kMaxSeriesTerms; ++n) {
        s.terms.push_back(t);
        s.sum += t;
        const double next = t * (x / term_ratio(id, static_cast<unsigned>(n + 1)));
        const double r_after = x / term_ratio(id, static_cast<unsigned>(n + 2));
        if (!std::isfinite(s.sum))
            throw TruncationFailure("normalization series overflows double range");
        if (r_after < 1.0) {
            const double tail = next / (1.0 - r_after);
            if (tail <= tol * s.sum && s.terms.size() >= min_terms) {
                s.tail_bound = tail;
                return s;
            }
        }
        t = next;
    }
    throw TruncationFailure("normalization series exceeded the term cap");
}

} // namespace detail

/// N_c(x) = sum_n x^n / c(n), to relative tolerance tol.
inline double normalization(const SequenceId& id, double x, double tol = 1e-15) {
    detail::require_state_sequence(id);
    detail::check_radius(id, x, "normalization");
    if (!(tol > 0))
        throw DomainError("normalization: tol must be positive");
    return detail::series_terms(id, x, tol).sum;
}

inline StateVector state_coefficients(const StateParams& p) {
    detail::require_state_sequence(p.id);
    if (!(p.series_tol > 0))
        throw DomainError("state_coefficients: series_tol must be positive");
    const double x = std::norm(p.z);
    detail::check_radius(p.id, x, "state_coefficients");
    const auto series = detail::series_terms(p.id, x, 1e-3 * p.series_tol, p.n_max + 1);
    const double N = series.sum;

    // Smallest truncation order >= n_max whose discarded mass is below series_tol.
    std::vector<double> suffix(series.terms.size() + 1, 0.0);
    for (std::size_t i = series.terms.size(); i-- > 0;)
        suffix[i] = suffix[i + 1] + series.terms[i];
    std::size_t order = p.n_max;
    auto discarded = [&](std::size_t m) { return (suffix[m + 1] + series.tail_bound) / N; };
    while (order + 1 < series.terms.size() && !(discarded(order) < p.series_tol))
        ++order;
    if (!(discarded(order) < p.series_tol))
        throw TruncationFailure("state_coefficients: truncation mass above series_tol at cap");

    StateVector v;
    v.amplitudes.reserve(order + 1);
    Complex a = 1.0 / std::sqrt(N);
    for (std::size_t n = 0; n <= order; ++n) {
        v.amplitudes.push_back(a);
        a *= p.z / std::sqrt(term_ratio(p.id, static_cast<unsigned>(n + 1)));
    }
    v.truncation_mass = discarded(order);
    return v;
}

/// <z|w>_c = N(|z|^2)^{-1/2} N(|w|^2)^{-1/2} sum_n (conj(z) w)^n / c(n).
inline Complex overlap(const SequenceId& id, Complex z, Complex w, double tol = 1e-15) {
    detail::require_state_sequence(id);
    const Complex zw = std::conj(z) * w;
    detail::check_radius(id, std::norm(z), "overlap");
    detail::check_radius(id, std::norm(w), "overlap");
    detail::check_radius(id, std::abs(zw), "overlap");
    if (!(tol > 0))
        throw DomainError("overlap: tol must be positive");

    const double nz = normalization(id, std::norm(z), tol);
    const double nw = normalization(id, std::norm(w), tol);
    const double r = std::abs(zw);
    Complex t = 1.0;
    Complex sum = 0.0;
    double abs_sum = 0.0;
    for (long n = 0; n < detail::kMaxSeriesTerms; ++n) {
        sum += t;
        abs_sum += std::abs(t);
        const Complex next = t * (zw / term_ratio(id, static_cast<unsigned>(n + 1)));
        const double r_after = r / term_ratio(id, static_cast<unsigned>(n + 2));
        if (r_after < 1.0 && std::abs(next) / (1.0 - r_after) <= tol * abs_sum)
            return sum * ((1.0 / std::sqrt(nz)) * (1.0 / std::sqrt(nw)));
        t = next;
    }
    throw TruncationFailure("overlap series exceeded the term cap");
}

} // namespace ccs
