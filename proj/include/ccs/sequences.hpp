#pragma once

// Exact combinatorial sequences c(n), their spectra and radii of convergence.

#include <ccs/errors.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <compare>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ccs {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

enum class Family {
    FactorialBaseline,   // n!
    DoubleFactorialEven, // (2n)!                 example 1
    Ex2,                 // (2n)!/n!              example 2
    CentralBinomial,     // C(2n,n)               example 3
    Catalan,             // C(2n,n)/(n+1)         example 4
    Ex5,                 // (2n)!/(n+1)!          example 5
    Ex6,                 // (2n)!/(n+1)           example 6
    Ex7,                 // (3n)!/n!              example 7
    Ex8,                 // (3n)!/(2n)!           example 8
    MiddleTrinomial,     // (3n)!/(n!)^3          example 9
    Ex10,                // C(3n,n)/(2n+1)        example 10
    Bell,                // set partitions
    Product,             // inner(n) * Bell(n)
};

/// Identifies one of the supported sequences. Product pairs an example
/// sequence (examples 1-10) with the Bell numbers.
class SequenceId {
public:
    constexpr SequenceId(Family family = Family::FactorialBaseline) : family_(family) {
        if (family == Family::Product)
            throw DomainError("Product sequence ids must be built with SequenceId::product");
    }

    static SequenceId product(Family inner) {
        if (!is_example(inner))
            throw DomainError("product sequences pair an example sequence (ex1..ex10) with bell");
        SequenceId id;
        id.family_ = Family::Product;
        id.inner_ = inner;
        return id;
    }

    /// True for the ten families that carry a printed continuous weight.
    static constexpr bool is_example(Family f) {
        return f != Family::FactorialBaseline && f != Family::Bell && f != Family::Product;
    }

    constexpr Family family() const { return family_; }
    constexpr Family inner() const { return inner_; }
    constexpr bool is_product() const { return family_ == Family::Product; }

    friend constexpr bool operator==(const SequenceId&, const SequenceId&) = default;

private:
    Family family_ = Family::FactorialBaseline;
    Family inner_ = Family::FactorialBaseline;
};

/// Exact non-negative rational value of a sequence term.
class ExactValue {
public:
    ExactValue() = default;
    explicit ExactValue(BigRational v) : value_(std::move(v)) {}
    explicit ExactValue(BigInt v) : value_(std::move(v)) {}

    const BigRational& value() const { return value_; }
    BigInt numerator() const { return boost::multiprecision::numerator(value_); }
    BigInt denominator() const { return boost::multiprecision::denominator(value_); }
    bool is_integer() const { return denominator() == 1; }

    /// Decimal rendering: "14" or "5/2".
    std::string str() const {
        if (is_integer())
            return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }

    /// Round-to-nearest conversion. Overflows to +inf beyond double range.
    double to_double() const {
        const BigInt num = numerator();
        const BigInt den = denominator();
        if (num == 0)
            return 0.0;
        if (den == 1)
            return std::strtod(num.str().c_str(), nullptr);
        // Scale so the integer quotient carries at least 66 significant bits,
        // then fold the remainder into a sticky bit; strtod rounds the result
        // to nearest and ldexp is exact in the normal range.
        const long shift = std::max<long>(
            0, 66 + static_cast<long>(msb(den)) - static_cast<long>(msb(num)));
        BigInt scaled = num << shift;
        BigInt quot = scaled / den;
        const bool sticky = (quot * den) != scaled;
        quot = (quot << 1) | BigInt(sticky ? 1 : 0);
        const double q = std::strtod(quot.str().c_str(), nullptr);
        return std::ldexp(q, -static_cast<int>(shift) - 1);
    }

    /// Natural logarithm, usable when the value exceeds double range.
    double log() const { return log_int(numerator()) - log_int(denominator()); }

    friend bool operator==(const ExactValue&, const ExactValue&) = default;
    friend auto operator<=>(const ExactValue& a, const ExactValue& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (b.value_ < a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    static std::size_t msb(const BigInt& v) { return boost::multiprecision::msb(v); }

    static double log_int(const BigInt& v) {
        const std::size_t bits = msb(v) + 1;
        if (bits <= 1000)
            return std::log(std::strtod(v.str().c_str(), nullptr));
        const std::size_t drop = bits - 64;
        const BigInt top = v >> drop;
        return std::log(std::strtod(top.str().c_str(), nullptr)) +
               static_cast<double>(drop) * std::log(2.0);
    }

    BigRational value_{0};
};

/// Energy levels epsilon_0 = 0, epsilon_n = c(n)/c(n-1).
struct Spectrum {
    std::vector<ExactValue> epsilon;
};

struct DobinskiResult {
    double value = 0.0;
    int terms = 0; // truncation index K
};

namespace detail {

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned k = 2; k <= n; ++k)
        r *= k;
    return r;
}

inline std::vector<BigInt> bell_prefix(unsigned n_max) {
    // Bell triangle: each row starts with the last entry of the previous row.
    std::vector<BigInt> out{1};
    std::vector<BigInt> row{1};
    for (unsigned n = 1; n <= n_max; ++n) {
        std::vector<BigInt> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (const auto& v : row)
            next.push_back(next.back() + v);
        out.push_back(next.front());
        row = std::move(next);
    }
    return out;
}

inline BigRational example_value(Family f, unsigned n) {
    using detail::factorial;
    switch (f) {
    case Family::FactorialBaseline: return BigRational(factorial(n));
    case Family::DoubleFactorialEven: return BigRational(factorial(2 * n));
    case Family::Ex2: return BigRational(factorial(2 * n), factorial(n));
    case Family::CentralBinomial: return BigRational(factorial(2 * n), factorial(n) * factorial(n));
    case Family::Catalan:
        return BigRational(factorial(2 * n), factorial(n) * factorial(n) * (n + 1));
    case Family::Ex5: return BigRational(factorial(2 * n), factorial(n + 1));
    case Family::Ex6: return BigRational(factorial(2 * n), BigInt(n + 1));
    case Family::Ex7: return BigRational(factorial(3 * n), factorial(n));
    case Family::Ex8: return BigRational(factorial(3 * n), factorial(2 * n));
    case Family::MiddleTrinomial: {
        const BigInt f1 = factorial(n);
        return BigRational(factorial(3 * n), f1 * f1 * f1);
    }
    case Family::Ex10:
        return BigRational(factorial(3 * n), factorial(n) * factorial(2 * n) * (2 * n + 1));
    case Family::Bell:
    case Family::Product: break;
    }
    throw DomainError("not an explicit-formula family");
}

} // namespace detail

/// Exact values c(0..n_max).
inline std::vector<ExactValue> seq_prefix(const SequenceId& id, unsigned n_max) {
    std::vector<ExactValue> out;
    out.reserve(n_max + 1);
    if (id.family() == Family::Bell || id.is_product()) {
        const auto bell = detail::bell_prefix(n_max);
        for (unsigned n = 0; n <= n_max; ++n) {
            if (id.is_product())
                out.emplace_back(detail::example_value(id.inner(), n) * BigRational(bell[n]));
            else
                out.emplace_back(bell[n]);
        }
        return out;
    }
    for (unsigned n = 0; n <= n_max; ++n)
        out.emplace_back(detail::example_value(id.family(), n));
    return out;
}

inline ExactValue seq_value(const SequenceId& id, unsigned n) {
    if (id.family() == Family::Bell || id.is_product())
        return seq_prefix(id, n).back();
    return ExactValue(detail::example_value(id.family(), n));
}

inline Spectrum spectrum(const SequenceId& id, unsigned n_max) {
    const auto c = seq_prefix(id, n_max);
    Spectrum s;
    s.epsilon.reserve(n_max + 1);
    s.epsilon.emplace_back(BigRational(0));
    for (unsigned n = 1; n <= n_max; ++n)
        s.epsilon.emplace_back(c[n].value() / c[n - 1].value());
    return s;
}

/// Ratio c(n)/c(n-1) in double precision from its closed form, n >= 1.
/// Used by the state series, where exact big-number ratios at large n
/// would dominate the cost.
inline double term_ratio(const SequenceId& id, unsigned n) {
    if (n == 0)
        throw DomainError("term_ratio is defined for n >= 1");
    const double m = n;
    double num = 0, den = 1;
    switch (id.family()) {
    case Family::FactorialBaseline: num = m; break;
    case Family::DoubleFactorialEven: num = 2 * m * (2 * m - 1); break;
    case Family::Ex2: num = 2 * (2 * m - 1); break;
    case Family::CentralBinomial: num = 2 * (2 * m - 1); den = m; break;
    case Family::Catalan: num = 2 * (2 * m - 1); den = m + 1; break;
    case Family::Ex5: num = 2 * m * (2 * m - 1); den = m + 1; break;
    case Family::Ex6: num = 2 * m * m * (2 * m - 1); den = m + 1; break;
    case Family::Ex7: num = 3 * (3 * m - 1) * (3 * m - 2); break;
    case Family::Ex8: num = 3 * (3 * m - 1) * (3 * m - 2); den = 2 * (2 * m - 1); break;
    case Family::MiddleTrinomial: num = 3 * (3 * m - 1) * (3 * m - 2); den = m * m; break;
    case Family::Ex10: num = 3 * (3 * m - 1) * (3 * m - 2); den = 2 * m * (2 * m + 1); break;
    case Family::Bell:
    case Family::Product:
        throw UnsupportedSequence("no closed-form term ratio for Bell-type sequences");
    }
    return num / den;
}

/// Radius of convergence of sum x^n / c(n).
inline double radius_of_convergence(const SequenceId& id) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (id.family()) {
    case Family::CentralBinomial:
    case Family::Catalan: return 4.0;
    case Family::MiddleTrinomial: return 27.0;
    case Family::Ex10: return 27.0 / 4.0;
    case Family::Product:
        // The product series has radius zero; not stated for the product weights.
        throw UnsupportedSequence("radius of convergence is not defined for product sequences");
    default: return inf;
    }
}

/// Truncated Dobinski sum (1/e) sum_k k^n / k!, including the k = 0 term
/// (0^0 = 1) when n = 0. K is the first index past which the geometric
/// bound on the remaining terms falls below tail_tol.
inline DobinskiResult dobinski_partial(unsigned n, double tail_tol, int hard_cap = 10000) {
    if (!(tail_tol > 0))
        throw DomainError("dobinski_partial: tail_tol must be positive");
    const double inv_e = std::exp(-1.0);
    double term = 1.0; // k^n / k! at k = 1
    double sum = (n == 0) ? 1.0 : 0.0;
    for (int k = 1; k <= hard_cap; ++k) {
        sum += term;
        // ratio of term k+1 to term k: (1 + 1/k)^n / (k + 1), decreasing in k
        const double ratio = std::pow(1.0 + 1.0 / k, static_cast<double>(n)) / (k + 1);
        const double next = term * ratio;
        if (ratio < 1.0) {
            const double tail = next / (1.0 - ratio);
            if (inv_e * tail < tail_tol)
                return {inv_e * sum, k};
        }
        term = next;
    }
    throw TruncationFailure("dobinski_partial: truncation index exceeds hard cap " +
                            std::to_string(hard_cap));
}

// ---- identifiers ----------------------------------------------------------

inline std::string_view family_name(Family f) {
    switch (f) {
    case Family::FactorialBaseline: return "factorial";
    case Family::DoubleFactorialEven: return "ex1";
    case Family::Ex2: return "ex2";
    case Family::CentralBinomial: return "ex3";
    case Family::Catalan: return "ex4";
    case Family::Ex5: return "ex5";
    case Family::Ex6: return "ex6";
    case Family::Ex7: return "ex7";
    case Family::Ex8: return "ex8";
    case Family::MiddleTrinomial: return "ex9";
    case Family::Ex10: return "ex10";
    case Family::Bell: return "bell";
    case Family::Product: return "product";
    }
    return "?";
}

inline std::string to_string(const SequenceId& id) {
    if (id.is_product())
        return "product:" + std::string(family_name(id.inner())) + "*bell";
    return std::string(family_name(id.family()));
}

/// Accepted spellings, canonical names first.
inline std::string valid_id_help() {
    return "factorial, ex1..ex10, catalan (=ex4), centralbinomial (=ex3), "
           "middletrinomial (=ex9), bell, product:<ex1..ex10|catalan|...>*bell";
}

inline SequenceId parse_sequence_id(std::string_view text) {
    static constexpr std::array<std::pair<std::string_view, Family>, 15> names{{
        {"factorial", Family::FactorialBaseline},
        {"ex1", Family::DoubleFactorialEven},
        {"ex2", Family::Ex2},
        {"ex3", Family::CentralBinomial},
        {"ex4", Family::Catalan},
        {"ex5", Family::Ex5},
        {"ex6", Family::Ex6},
        {"ex7", Family::Ex7},
        {"ex8", Family::Ex8},
        {"ex9", Family::MiddleTrinomial},
        {"ex10", Family::Ex10},
        {"bell", Family::Bell},
        {"catalan", Family::Catalan},
        {"centralbinomial", Family::CentralBinomial},
        {"middletrinomial", Family::MiddleTrinomial},
    }};
    auto lookup = [&](std::string_view s) -> std::optional<Family> {
        for (const auto& [name, f] : names)
            if (name == s)
                return f;
        return std::nullopt;
    };
    constexpr std::string_view prefix = "product:";
    constexpr std::string_view suffix = "*bell";
    if (text.starts_with(prefix) && text.ends_with(suffix) &&
        text.size() > prefix.size() + suffix.size()) {
        const auto inner = text.substr(prefix.size(), text.size() - prefix.size() - suffix.size());
        if (auto f = lookup(inner); f && SequenceId::is_example(*f))
            return SequenceId::product(*f);
    } else if (auto f = lookup(text)) {
        return SequenceId(*f);
    }
    throw DomainError("unknown sequence id '" + std::string(text) + "'; valid ids: " +
                      valid_id_help());
}

} // namespace ccs
