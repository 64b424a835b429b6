#include <ccs/moments.hpp>

#include "oracles.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <gtest/gtest.h>

using namespace ccs;

namespace {

const char* kContinuousIds[] = {"ex1", "ex2", "ex3", "ex4", "ex5",
                                "ex6", "ex7", "ex8", "ex9", "ex10"};

double exact_double(const char* id, unsigned n) { return seq_value(parse_sequence_id(id), n).to_double(); }

} // namespace

TEST(Moments, Examples) {
    EXPECT_NEAR(moment(make_weight("ex1"), 0), 1.0, 1e-10);
    EXPECT_NEAR(moment(make_weight("ex3"), 2), 6.0, 6e-8);
    EXPECT_NEAR(moment(make_weight("bell"), 3), 5.0, 5e-10);
    auto cb = calibrate_constant(make_weight("product:catalan*bell"), 1e-6);
    EXPECT_NEAR(moment(cb.spec, 2), 4.0, 4e-6);
}

TEST(Moments, SecondMomentOfEx2ClosedForm) {
    // int_0^inf x^{n-1/2} e^{-x/4} dx / (2 sqrt pi) = 4^{n+1/2} Gamma(n+1/2) / (2 sqrt pi)
    const WeightSpec w = make_weight("ex2");
    for (unsigned n = 0; n <= 10; ++n) {
        const double closed = std::pow(4.0, n + 0.5) * std::tgamma(n + 0.5) / (2 * std::sqrt(std::numbers::pi));
        EXPECT_LE(oracle::rel(moment(w, n), closed), 1e-10) << n;
        EXPECT_LE(oracle::rel(closed, exact_double("ex2", n)), 1e-13) << n;
    }
}

TEST(Moments, VerifyAllContinuous) {
    for (const char* id : kContinuousIds) {
        const unsigned n_max = (std::string(id) == "ex7" || std::string(id) == "ex8" ||
                                std::string(id) == "ex9")
                                   ? 8
                                   : 10;
        const MomentReport r = verify_moments(make_weight(id), n_max);
        ASSERT_EQ(r.rows.size(), n_max + 1);
        double worst = 0;
        for (unsigned n = 0; n <= n_max; ++n) {
            const MomentRow& row = r.rows[n];
            EXPECT_EQ(row.n, n);
            EXPECT_EQ(row.exact, seq_value(parse_sequence_id(id), n));
            EXPECT_DOUBLE_EQ(row.relative_error, std::abs(row.numeric / row.exact.to_double() - 1));
            worst = std::max(worst, row.relative_error);
        }
        EXPECT_EQ(r.max_relative_error, worst);
        EXPECT_LE(r.max_relative_error, 1e-8) << id;
    }
}

TEST(Moments, CatalanCalibration) {
    const MomentReport r = verify_moments(make_weight("ex4"), 10);
    EXPECT_NEAR(r.calibration_ratio, 2.0, 1e-8);
    EXPECT_LE(r.max_relative_error, 1e-8);
    const auto cal = calibrate_constant(make_weight("ex4"), 1e-10);
    EXPECT_TRUE(cal.rescaled);
    EXPECT_NEAR(cal.spec.normalization_constant * 2 * std::numbers::pi, 1.0, 1e-8);
}

TEST(Moments, CalibrationLeavesConsistentConstants) {
    for (const char* id : {"ex1", "ex3"}) {
        const auto cal = calibrate_constant(make_weight(id), 1e-6);
        EXPECT_NEAR(cal.mu0, 1.0, 1e-10) << id;
        EXPECT_FALSE(cal.rescaled);
        EXPECT_EQ(cal.spec.normalization_constant, make_weight(id).printed_constant);
    }
}

TEST(Moments, ZerothMomentAfterCalibration) {
    for (const char* id : kContinuousIds) {
        const auto cal = calibrate_constant(make_weight(id), 1e-12);
        EXPECT_NEAR(moment(cal.spec, 0), 1.0, 1e-8) << id;
    }
}

TEST(Moments, SchemeIndependence) {
    for (const char* id : {"ex1", "ex2"}) {
        const WeightSpec w = make_weight(id);
        QuadratureConfig sq, de, tr;
        sq.scheme = Scheme::substitution_sqrt();
        de.scheme = Scheme::double_exponential();
        tr.scheme = Scheme::truncated_de();
        for (unsigned n = 0; n <= 6; ++n) {
            const double a = moment(w, n, sq), b = moment(w, n, de), c = moment(w, n, tr);
            EXPECT_LE(oracle::rel(a, b), 1e-9) << id << " " << n;
            EXPECT_LE(oracle::rel(a, c), 1e-9) << id << " " << n;
        }
    }
    // Jacobi and tanh-sinh on a finite support
    const WeightSpec w3 = make_weight("ex3");
    QuadratureConfig jac, ts;
    jac.scheme = Scheme::jacobi(-0.5, -0.5);
    ts.scheme = Scheme::double_exponential();
    for (unsigned n = 0; n <= 6; ++n)
        EXPECT_LE(oracle::rel(moment(w3, n, jac), moment(w3, n, ts)), 1e-9);
}

TEST(Moments, TighterToleranceDoesNotDegrade) {
    gen::Source src(5);
    for (int i = 0; i < 4; ++i) {
        const char* id = kContinuousIds[src.integer(0, 9)];
        QuadratureConfig loose, tight;
        loose.rel_tol = 1e-8;
        tight.rel_tol = 5e-9;
        const auto a = verify_moments(make_weight(id), 6, loose);
        const auto b = verify_moments(make_weight(id), 6, tight);
        EXPECT_LE(b.max_relative_error, std::max(2 * a.max_relative_error, 1e-14)) << id;
    }
}

TEST(Moments, EndpointIntegrability) {
    // the integral over [delta, R - delta] misses roughly w(delta) delta / (1 + p) at the
    // origin and the analogous piece at R; both vanish as delta -> 0
    boost::math::quadrature::tanh_sinh<double> ts;
    for (const char* id : {"ex3", "ex4", "ex9", "ex10"}) {
        const WeightSpec w = make_weight(id);
        const double R = w.support_upper, p = w.endpoint_exponent_zero;
        const double q = w.endpoint_R.kind == EndpointBehavior::Kind::Power ? w.endpoint_R.exponent : 0.0;
        for (unsigned n : {0u, 3u}) {
            const double full = moment(w, n);
            double previous = std::numeric_limits<double>::infinity();
            for (double delta : {1e-4, 1e-6, 1e-8}) {
                auto f = [&](double x) { return std::pow(x, n) * weight_eval(w, x); };
                const double inner = ts.integrate(f, delta, R - delta, 1e-13);
                const double piece0 = std::pow(delta, n) * weight_eval(w, delta) * delta / (1 + p);
                const double pieceR = std::pow(R, n) * weight_eval(w, R - delta) * delta / (1 + q);
                const double err = std::abs(full - inner);
                EXPECT_LE(err, 2 * (piece0 + pieceR) + 1e-10 * full) << id << " " << n << " " << delta;
                EXPECT_LT(err, previous) << id << " " << n << " " << delta;
                previous = err;
            }
        }
    }
}

TEST(Moments, BellMeasure) {
    QuadratureConfig cfg;
    cfg.infinite_cutoff_tol = 1e-13;
    const MomentReport r = verify_moments(make_weight("bell"), 12, cfg);
    EXPECT_LE(r.max_relative_error, 1e-10);
    EXPECT_NEAR(r.rows[0].numeric, 1.0, 1e-13);
    EXPECT_EQ(r.rows[0].scheme, detail::kDiscreteScheme);
    const auto bell = oracle::bell_stirling(12);
    for (unsigned n = 0; n <= 12; ++n)
        EXPECT_LE(oracle::rel(r.rows[n].numeric, oracle::to_double(bell[n])), 1e-10) << n;
}

TEST(Moments, MixedSumMellinConvolution) {
    const MomentReport r = verify_moments(make_weight("product:catalan*bell"), 8);
    const auto bell = oracle::bell_stirling(8);
    for (unsigned n = 0; n <= 8; ++n) {
        const double want = oracle::to_double(oracle::sequence(4, n) * bell[n]);
        EXPECT_LE(oracle::rel(r.rows[n].numeric, want), 1e-6) << n;
    }
}

TEST(Moments, MixedSumIsSumOfScaledCatalanMoments) {
    // term k contributes (4k)^n C_n / (e k!) for the calibrated density
    const auto cal = calibrate_constant(make_weight("product:catalan*bell"), 1e-6);
    for (unsigned n = 1; n <= 8; ++n) {
        oracle::HP sum = 0, inv_fact = 1;
        for (int k = 1; k < 200; ++k) {
            inv_fact /= k;
            sum += pow(oracle::HP(k), n) * inv_fact;
        }
        const double want = static_cast<double>(sum * oracle::HP(oracle::sequence(4, n)) /
                                                boost::math::constants::e<oracle::HP>());
        EXPECT_LE(oracle::rel(moment(cal.spec, n), want), 1e-10) << n;
    }
}

TEST(Moments, FailureTagsN) {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 1;
    try {
        verify_moments(make_weight("ex5"), 4, cfg);
        FAIL() << "expected a numerical failure";
    } catch (const NumericalError& e) {
        ASSERT_TRUE(e.failing_n().has_value());
        EXPECT_EQ(*e.failing_n(), 0); // the calibration run
    }
}

TEST(Moments, ConfigValidation) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1.5;
    EXPECT_THROW(moment(make_weight("ex1"), 0, cfg), DomainError);
    QuadratureConfig jac;
    jac.scheme = Scheme::jacobi(-1.0, 0.0);
    EXPECT_THROW(moment(make_weight("ex3"), 0, jac), DomainError);
    QuadratureConfig inf_jac;
    inf_jac.scheme = Scheme::jacobi(-0.5, 0.0);
    EXPECT_THROW(moment(make_weight("ex1"), 0, inf_jac), DomainError);
}

TEST(Moments, RelativeErrorInLogSpace) {
    const ExactValue big = seq_value(SequenceId(Family::Ex7), 200);
    EXPECT_TRUE(std::isinf(big.to_double()));
    EXPECT_NEAR(relative_error(std::numeric_limits<double>::max(), big), 1.0, 1e-12);
}
