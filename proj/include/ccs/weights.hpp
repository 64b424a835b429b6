#pragma once

// Weight functions whose moments reproduce the sequences: the ten printed
// continuous densities, the Bell atomic measure and the Catalan-Bell
// mixture.

#include <ccs/errors.hpp>
#include <ccs/sequences.hpp>
#include <ccs/specialfn.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace ccs {

enum class WeightKind { Continuous, DiscreteAtoms, MixedSum };

/// Behavior of a weight as x approaches a finite support endpoint R.
struct EndpointBehavior {
    enum class Kind { None, Power, Logarithmic };
    Kind kind = Kind::None;
    /// W ~ (R - x)^exponent for Power. For Logarithmic, W tends to a finite
    /// limit with an O((R - x) log(R - x)) correction.
    double exponent = 0.0;
};

/// Envelope W(x) <~ exp(-rate * x^power) for large x on infinite supports.
struct TailDecay {
    double rate = 0.0;
    double power = 1.0;
};

struct WeightSpec {
    SequenceId id;
    std::string label;
    double support_upper = std::numeric_limits<double>::infinity();
    WeightKind kind = WeightKind::Continuous;
    /// p with W(x) ~ x^p as x -> 0+.
    double endpoint_exponent_zero = 0.0;
    EndpointBehavior endpoint_R;
    TailDecay decay;
    /// Multiplicative constant as printed with the formula.
    double printed_constant = 1.0;
    /// Constant in use; equals printed_constant until calibrated.
    double normalization_constant = 1.0;

    bool finite_support() const { return std::isfinite(support_upper); }
};

/// Point masses of the Bell measure at x = 1..K, plus the mass carried at
/// the origin under the 0^0 = 1 convention.
struct AtomList {
    struct Atom {
        int location;
        double mass;
    };
    std::vector<Atom> atoms;
    double origin_mass = 0.0;
};

namespace detail {

inline constexpr double kPi = std::numbers::pi;

inline double w9_alpha() {
    const double g = std::tgamma(2.0 / 3.0);
    return 1.0 / (3.0 * g * g * g);
}

inline double w9_beta() {
    const double g = std::tgamma(2.0 / 3.0);
    return -std::sqrt(3.0) / (8.0 * kPi * kPi * kPi) * g * g * g;
}

/// Formula of each continuous weight without its multiplicative constant.
/// xc = R - x for finite supports (ignored otherwise).
inline double weight_shape(Family f, double x, double xc) {
    using namespace specialfn;
    switch (f) {
    case Family::DoubleFactorialEven: {
        const double u = std::sqrt(x);
        return std::exp(-u) / u;
    }
    case Family::Ex2: return std::exp(-0.25 * x) / std::sqrt(x);
    case Family::CentralBinomial: return 1.0 / std::sqrt(x * xc);
    case Family::Catalan: return std::sqrt(xc / x);
    case Family::Ex5: {
        // -1/2 + e^{-x/4}/sqrt(pi x) + erf(sqrt(x)/2)/2
        //   = e^{-x/4}/sqrt(pi x) - erfc(sqrt(x)/2)/2 = Gamma(-1/2, x/4) / (4 sqrt(pi)).
        // The two leading terms cancel for large x, so switch to the
        // incomplete-gamma form from x = 4 on.
        if (x < 4.0)
            return std::exp(-0.25 * x) / std::sqrt(kPi * x) - 0.5 * std::erfc(0.5 * std::sqrt(x));
        return upper_gamma(-0.5, 0.25 * x) / (4.0 * std::sqrt(kPi));
    }
    case Family::Ex6: {
        // e^{-u}/u + Ei(-u) = Gamma(-1, u), u = sqrt(x); same cancellation.
        const double u = std::sqrt(x);
        if (u < 1.0)
            return std::exp(-u) / u - expint_e1(u);
        return upper_gamma(-1.0, u);
    }
    case Family::Ex7: return bessel_K(1.0 / 3.0, 2.0 * std::sqrt(x / 27.0)) / std::sqrt(x);
    case Family::Ex8: {
        const double y = 2.0 * x / 27.0;
        if (y > 700.0)
            return 0.0;
        return std::exp(-y) * (bessel_K(1.0 / 3.0, y) + bessel_K(2.0 / 3.0, y));
    }
    case Family::MiddleTrinomial: {
        const double zc = xc / 27.0;
        const double z = x <= 13.5 ? x / 27.0 : 1.0 - zc;
        const double f1 = specialfn::detail::hyp2f1(1.0 / 3, 1.0 / 3, 2.0 / 3, z, zc);
        const double f2 = specialfn::detail::hyp2f1(2.0 / 3, 2.0 / 3, 4.0 / 3, z, zc);
        return w9_alpha() * std::pow(x, -2.0 / 3.0) * f1 + w9_beta() * std::pow(x, -1.0 / 3.0) * f2;
    }
    case Family::Ex10: {
        // [2^{1/3} A^{2/3} - 6 x^{1/3}] / (x^{2/3} A^{1/3}), A = 27 + 3 sqrt(81 - 12x).
        // With u = 2^{1/3} A^{2/3}, v = 6 x^{1/3}: u^3 - v^3 = 432 d + 324 s where
        // d = 27/4 - x and s = sqrt(12 d), which vanishes without cancellation.
        const double s = std::sqrt(12.0 * xc);
        const double a = 27.0 + 3.0 * s;
        const double u = std::cbrt(2.0 * a * a);
        const double v = 6.0 * std::cbrt(x);
        const double bracket = (432.0 * xc + 324.0 * s) / (u * u + u * v + v * v);
        const double cx = std::cbrt(x);
        return bracket / (cx * cx * std::cbrt(a));
    }
    default: break;
    }
    throw DomainError("no continuous weight for this sequence");
}

} // namespace detail

/// Weight specification for a sequence: examples 1-10, Bell, and the
/// Catalan-Bell product.
inline WeightSpec make_weight(const SequenceId& id) {
    using EB = EndpointBehavior;
    using detail::kPi;
    WeightSpec w;
    w.id = id;
    w.kind = WeightKind::Continuous;
    const double inf = std::numeric_limits<double>::infinity();
    auto set = [&](const char* label, double R, double p0, EB er, TailDecay decay, double c) {
        w.label = label;
        w.support_upper = R;
        w.endpoint_exponent_zero = p0;
        w.endpoint_R = er;
        w.decay = decay;
        w.printed_constant = c;
        w.normalization_constant = c;
    };
    const EB none{};
    switch (id.family()) {
    case Family::DoubleFactorialEven: set("W1", inf, -0.5, none, {1.0, 0.5}, 0.5); break;
    case Family::Ex2: set("W2", inf, -0.5, none, {0.25, 1.0}, 0.5 / std::sqrt(kPi)); break;
    case Family::CentralBinomial:
        set("W3", 4.0, -0.5, {EB::Kind::Power, -0.5}, {}, 1.0 / kPi);
        break;
    case Family::Catalan: set("W4", 4.0, -0.5, {EB::Kind::Power, 0.5}, {}, 1.0 / kPi); break;
    case Family::Ex5: set("W5", inf, -0.5, none, {0.25, 1.0}, 1.0); break;
    case Family::Ex6: set("W6", inf, -0.5, none, {1.0, 0.5}, 1.0); break;
    case Family::Ex7:
        set("W7", inf, -2.0 / 3.0, none, {2.0 / std::sqrt(27.0), 0.5}, 1.0 / (3.0 * kPi));
        break;
    case Family::Ex8:
        set("W8", inf, -2.0 / 3.0, none, {4.0 / 27.0, 1.0}, std::sqrt(3.0) / (27.0 * kPi));
        break;
    case Family::MiddleTrinomial:
        set("W9", 27.0, -2.0 / 3.0, {EB::Kind::Logarithmic, 0.0}, {}, 1.0);
        break;
    case Family::Ex10:
        set("W10", 27.0 / 4.0, -2.0 / 3.0, {EB::Kind::Power, 0.5}, {},
            std::sqrt(3.0) * std::cbrt(4.0) / (12.0 * kPi));
        break;
    case Family::Bell:
        w.label = "WB";
        w.kind = WeightKind::DiscreteAtoms;
        break;
    case Family::Product:
        if (id.inner() != Family::Catalan)
            throw UnsupportedSequence("no weight implemented for " + to_string(id) +
                                      " (only product:catalan*bell)");
        w.label = "WCB";
        w.kind = WeightKind::MixedSum;
        w.endpoint_exponent_zero = -0.5;
        w.printed_constant = 1.0 / (2.0 * kPi * std::numbers::e);
        w.normalization_constant = w.printed_constant;
        break;
    case Family::FactorialBaseline:
        throw UnsupportedSequence("no weight implemented for factorial");
    }
    return w;
}

inline WeightSpec make_weight(std::string_view id) { return make_weight(parse_sequence_id(id)); }

namespace detail {

/// Weight value without domain checks; xc = R - x.
inline double weight_value(const WeightSpec& spec, double x, double xc) {
    return spec.normalization_constant * weight_shape(spec.id.family(), x, xc);
}

} // namespace detail

/// Value of a continuous weight strictly inside its support.
inline double weight_eval(const WeightSpec& spec, double x) {
    if (spec.kind != WeightKind::Continuous)
        throw DomainError("weight_eval: " + spec.label + " is not a continuous weight");
    const double R = spec.support_upper;
    if (x == 0.0 || x == R)
        throw SingularEndpoint("weight_eval: x = " + std::to_string(x) +
                               " is a support endpoint of " + spec.label);
    if (!(x > 0.0 && x < R))
        throw DomainError("weight_eval: x outside the open support of " + spec.label);
    return detail::weight_value(spec, x, R - x);
}

/// Atoms 1..K of the Bell measure with (1/e) sum_{k>K} k^n_max / k! < tail_tol.
inline AtomList bell_atoms(double tail_tol, unsigned n_max = 12, int hard_cap = 2000) {
    if (!(tail_tol > 0))
        throw DomainError("bell_atoms: tail_tol must be positive");
    const double inv_e = std::exp(-1.0);
    AtomList list;
    list.origin_mass = inv_e;
    double mass = inv_e; // 1/(e k!)
    for (int k = 1; k <= hard_cap; ++k) {
        if (k > 1)
            mass /= k;
        list.atoms.push_back({k, mass});
        // moment-weighted term k^n mass and the ratio to its successor
        const double term = std::pow(static_cast<double>(k), static_cast<double>(n_max)) * mass;
        const double ratio = std::pow(1.0 + 1.0 / k, static_cast<double>(n_max)) / (k + 1);
        if (ratio < 1.0 && term * ratio / (1.0 - ratio) < tail_tol)
            return list;
    }
    throw TruncationFailure("bell_atoms: atom count exceeds hard cap " + std::to_string(hard_cap));
}

/// Catalan-Bell weight 1/(2 pi e) sum_k sqrt((4k - x)/x) H(4 - x/k) / (k k!),
/// summed until the tail bound drops below tail_tol relative to the sum.
inline double cb_weight_eval(double x, double tail_tol, double constant = 1.0 / (2.0 * std::numbers::pi * std::numbers::e)) {
    if (!(x > 0) || !std::isfinite(x))
        throw DomainError("cb_weight_eval: x must be positive");
    if (std::fmod(x, 4.0) == 0.0)
        throw DomainError("cb_weight_eval: x = 4k is a kink of the weight");
    if (!(tail_tol > 0))
        throw DomainError("cb_weight_eval: tail_tol must be positive");
    // H(4 - x/k) = 1 iff k > x/4
    const int k0 = static_cast<int>(std::floor(x / 4.0)) + 1;
    double inv_fact = std::exp(-std::lgamma(k0 + 1.0)); // 1/k!
    double sum = 0.0;
    for (int k = k0; k < k0 + 100000; ++k) {
        if (k > k0)
            inv_fact /= k;
        const double term = inv_fact / k * std::sqrt((4.0 * k - x) / x);
        sum += term;
        // Later terms are bounded by inv_fact/k * sqrt(4k/x) with ratio below 1/(k+1).
        const double next_bound = inv_fact / (k + 1.0) / (k + 1.0) * std::sqrt(4.0 * (k + 1.0) / x);
        const double tail = next_bound / (1.0 - 1.0 / (k + 2.0));
        if (tail < tail_tol * sum || inv_fact == 0.0)
            return constant * sum;
    }
    throw TruncationFailure("cb_weight_eval: series did not terminate");
}

/// Minimum of a continuous weight over grid_size log-spaced interior points.
/// Finite supports sample half the points toward each endpoint; infinite
/// supports sample [1e-8, 1e3].
inline double positivity_scan(const WeightSpec& spec, int grid_size) {
    if (spec.kind != WeightKind::Continuous)
        throw DomainError("positivity_scan: continuous weights only");
    if (grid_size < 2)
        throw DomainError("positivity_scan: grid_size must be >= 2");
    double lowest = std::numeric_limits<double>::infinity();
    auto log_grid = [](double lo, double hi, int count, int i) {
        return lo * std::pow(hi / lo, count == 1 ? 0.0 : static_cast<double>(i) / (count - 1));
    };
    if (spec.finite_support()) {
        const double R = spec.support_upper;
        const int left = grid_size / 2;
        const int right = grid_size - left;
        for (int i = 0; i < left; ++i) {
            const double x = log_grid(R * 1e-8, R / 2, left, i);
            lowest = std::min(lowest, detail::weight_value(spec, x, R - x));
        }
        for (int i = 0; i < right; ++i) {
            const double d = log_grid(R * 1e-8, R / 2 * (1 - 1e-9), right, i);
            lowest = std::min(lowest, detail::weight_value(spec, R - d, d));
        }
    } else {
        for (int i = 0; i < grid_size; ++i)
            lowest = std::min(lowest, weight_eval(spec, log_grid(1e-8, 1e3, grid_size, i)));
    }
    return lowest;
}

} // namespace ccs
