#include <ccs/quadrature.hpp>

#include "oracles.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <gtest/gtest.h>

using namespace ccs;

namespace {

double beta_hp(double a, double b) {
    return static_cast<double>(boost::math::beta(oracle::HP(a), oracle::HP(b)));
}

} // namespace

TEST(TanhSinh, EndpointSingularities) {
    // int_0^1 x^{-1/2} (1 - x)^{-1/2} dx = pi
    auto r = quad::tanh_sinh([](double x, double xc) { return 1.0 / std::sqrt(x * xc); }, 1.0, 1e-14);
    EXPECT_NEAR(r.value / std::numbers::pi, 1.0, 1e-14);
    // int_0^L log(x) dx = L log L - L
    const double L = 3.0;
    auto g = quad::tanh_sinh([](double x, double) { return std::log(x); }, L, 1e-14);
    EXPECT_NEAR(g.value, L * std::log(L) - L, 1e-13);
}

TEST(TanhSinh, BetaIntegrals) {
    gen::Source src(3);
    for (int i = 0; i < 40; ++i) {
        const double p = src.uniform(-0.9, 3.0), q = src.uniform(-0.9, 3.0);
        auto f = [&](double x, double xc) { return std::pow(x, p) * std::pow(xc, q); };
        auto r = quad::tanh_sinh(f, 1.0, 1e-12);
        EXPECT_LE(oracle::rel(r.value, beta_hp(p + 1, q + 1)), 1e-10) << p << " " << q;
    }
}

TEST(ExpSinh, HalfLine) {
    // Gamma integrals int_0^inf x^{s-1} e^{-x} dx
    for (double s : {0.5, 1.0, 2.5, 7.0}) {
        auto r = quad::exp_sinh([s](double x) { return std::exp((s - 1) * std::log(x) - x); }, 1e-13);
        EXPECT_LE(oracle::rel(r.value, std::tgamma(s)), 1e-12) << s;
    }
}

TEST(ExpSinh, NonFiniteIntegrandIsReported) {
    EXPECT_THROW(quad::exp_sinh([](double) { return std::numeric_limits<double>::infinity(); }, 1e-10),
                 QuadratureNonConvergence);
}

TEST(GaussJacobi, RuleWeightsSumToMu0) {
    for (auto [a, b] : {std::pair{-0.5, 0.5}, {0.5, -0.5}, {-0.5, -0.5}, {0.0, 0.0}, {1.5, -0.7}}) {
        const auto rule = quad::gauss_jacobi_rule(24, a, b);
        double s = 0;
        for (double w : rule.weights) {
            EXPECT_GT(w, 0.0);
            s += w;
        }
        EXPECT_LE(oracle::rel(s, std::pow(2.0, a + b + 1) * beta_hp(a + 1, b + 1)), 1e-13);
        for (double t : rule.nodes) {
            EXPECT_GT(t, -1.0);
            EXPECT_LT(t, 1.0);
        }
    }
}

TEST(GaussJacobi, ExactForPolynomials) {
    // int_0^1 x^p (1 - x)^q x^k dx = B(p + k + 1, q + 1), exact up to degree 2n - 1
    for (auto [p, q] : {std::pair{-0.5, 0.5}, {-0.5, -0.5}, {-2.0 / 3, 0.5}, {0.3, 0.3}})
        for (int k = 0; k <= 20; ++k) {
            auto r = quad::gauss_jacobi([k](double x, double) { return std::pow(x, k); }, 1.0, p, q,
                                        1e-14);
            EXPECT_LE(oracle::rel(r.value, beta_hp(p + k + 1, q + 1)), 1e-13) << p << " " << q << " " << k;
        }
}

TEST(GaussJacobi, RejectsBadExponents) {
    EXPECT_THROW(quad::gauss_jacobi_rule(8, -1.0, 0.0), DomainError);
    EXPECT_THROW(quad::gauss_jacobi_rule(0, 0.0, 0.0), DomainError);
}
