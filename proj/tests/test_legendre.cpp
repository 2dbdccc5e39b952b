#include "mfx/analytic_spectra.hpp"
#include "mfx/legendre.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mfx;

namespace {
const BernoulliPair kPair(0.2, 0.4);
} // namespace

TEST(GridFunction, Validation) {
    EXPECT_THROW(GridFunction({0.0, 0.0}, {1.0, 2.0}), ValidationError);
    EXPECT_THROW(GridFunction({0.0, 1.0}, {1.0}), ValidationError);
    EXPECT_THROW(GridFunction({0.0, 1.0}, {1.0, std::nan("")}), ValidationError);
    EXPECT_THROW((void)legendre_transform(GridFunction({}, {}), 0.0), EmptyGridError);
    const auto g = GridFunction::sample([](double q) { return q * q; }, -1.0, 1.0, 0.5);
    EXPECT_EQ(g.size(), 5u);
    EXPECT_EQ(g.q_grid().back(), 1.0);
}

TEST(Legendre, ZeroFunction) {
    const auto zero = GridFunction::sample([](double) { return 0.0; }, -8.0, 8.0, 1e-3);
    const auto at0 = legendre_transform(zero, 0.0);
    EXPECT_EQ(at0.value, 0.0);
    EXPECT_FALSE(at0.at_boundary);
    EXPECT_TRUE(legendre_transform(zero, 0.5).at_boundary);
    EXPECT_TRUE(legendre_transform(zero, -0.5).at_boundary);
}

TEST(Legendre, ThetaConjugateIsEntropy) {
    const auto f = GridFunction::sample([](double q) { return theta(q, 0.2); }, -8.0, 8.0, 1e-3);
    const double alpha = -theta_prime(0.44654239804174403, 0.2);
    EXPECT_NEAR(alpha, 1.0219280948873623, 1e-10);
    const auto c = legendre_transform(f, alpha);
    EXPECT_NEAR(c.value, entropy_h(0.35), 1e-5);
    EXPECT_FALSE(c.at_boundary);
    EXPECT_NEAR(c.argmin_q, 0.44654239804174403, 1e-3);
    EXPECT_GE(c.error_estimate, 0.0);
    EXPECT_LE(c.error_estimate, 1e-6);
}

TEST(Legendre, MinOfConjugates) {
    const auto b = GridFunction::sample([](double q) { return b_of_q(q, kPair); }, -8.0, 8.0, 1e-3);
    const auto t = GridFunction::sample([](double q) { return theta(q, 0.2); }, -8.0, 8.0, 1e-3);
    const auto tt = GridFunction::sample([](double q) { return theta(q, 0.4); }, -8.0, 8.0, 1e-3);
    for (double alpha = 0.8; alpha < 1.3; alpha += 0.05) {
        const double lhs = legendre_transform(b, alpha).value;
        const double rhs = std::min(legendre_transform(t, alpha).value, legendre_transform(tt, alpha).value);
        EXPECT_NEAR(lhs, rhs, 1e-5);
    }
}

TEST(Legendre, ConcaveAndBelowEveryAffineMinorant) {
    const auto f = GridFunction::sample([](double q) { return B_of_q(q, kPair); }, -8.0, 8.0, 1e-2);
    std::vector<double> alphas;
    for (double a = 0.75; a < 1.32; a += 0.01) {
        alphas.push_back(a);
    }
    for (std::size_t i = 1; i + 1 < alphas.size(); ++i) {
        const double mid = legendre_transform(f, alphas[i]).value;
        EXPECT_GE(mid + 1e-8,
                  0.5 * (legendre_transform(f, alphas[i - 1]).value + legendre_transform(f, alphas[i + 1]).value));
    }
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<std::size_t> pick(0, f.size() - 1);
    std::uniform_real_distribution<double> ua(0.5, 1.5);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t i = pick(gen);
        const double a = ua(gen);
        EXPECT_LE(legendre_transform(f, a).value, f.q_grid()[i] * a + f.values()[i] + 1e-15);
    }
}

TEST(Legendre, FenchelEquality) {
    const auto f = GridFunction::sample([](double q) { return theta(q, 0.4); }, -10.0, 10.0, 1e-3);
    for (double q : {-3.0, -1.0, 0.25, 2.0, 4.0}) {
        const double d = theta_prime(q, 0.4);
        EXPECT_NEAR(legendre_transform(f, -d).value, theta(q, 0.4) - q * d, 1e-5);
    }
}

TEST(OneSided, SmoothFunction) {
    const auto th = [](double q) { return theta(q, 0.2); };
    for (double q : {-3.0, 0.0, 0.5, 2.0}) {
        const auto d = one_sided_derivatives(th, q);
        EXPECT_NEAR(d.left, theta_prime(q, 0.2), 1e-6);
        EXPECT_NEAR(d.right, theta_prime(q, 0.2), 1e-6);
    }
}

TEST(OneSided, KinksOfB) {
    const auto B = [](double q) { return B_of_q(q, kPair); };
    const auto e = B_endpoints(kPair);
    const auto d0 = one_sided_derivatives(B, 0.0);
    const auto d1 = one_sided_derivatives(B, 1.0);
    EXPECT_NEAR(-d0.left, e.minus_Bl0, 1e-6);
    EXPECT_NEAR(-d0.right, e.minus_Br0, 1e-6);
    EXPECT_NEAR(-d1.left, e.minus_Bl1, 1e-6);
    EXPECT_NEAR(-d1.right, e.minus_Br1, 1e-6);
    EXPECT_LE(d0.left, d0.right);
    EXPECT_LE(d1.left, d1.right);
}

TEST(OneSided, LinearIsExact) {
    const auto lin = [](double q) { return 3.0 * q - 2.0; };
    const auto d = one_sided_derivatives(lin, 0.7);
    EXPECT_NEAR(d.left, 3.0, 1e-9);
    EXPECT_NEAR(d.right, 3.0, 1e-9);
    const auto fl = flat_derivatives(lin, 0.7);
    EXPECT_NEAR(fl.left_flat, 3.0, 1e-9);
    EXPECT_NEAR(fl.right_flat, 3.0, 1e-9);
}

TEST(OneSided, LeftNotAboveRightForConvexInput) {
    const auto B = [](double q) { return B_of_q(q, kPair); };
    for (double q = -5.0; q <= 5.0; q += 0.25) {
        const auto d = one_sided_derivatives(B, q);
        EXPECT_LE(d.left, d.right + 1e-9) << q;
    }
}

TEST(OneSided, BoundaryErrors) {
    DifferenceOptions opt;
    opt.lo = -8.0;
    opt.hi = 8.0;
    const auto th = [](double q) { return theta(q, 0.2); };
    EXPECT_THROW((void)one_sided_derivatives(th, 8.0, opt), BoundaryError);
    EXPECT_THROW((void)one_sided_derivatives(th, -7.9999, opt), BoundaryError);
    EXPECT_THROW((void)flat_derivatives(th, 8.0, opt), BoundaryError);
    EXPECT_NO_THROW((void)one_sided_derivatives(th, 7.5, opt));
}

TEST(Flat, ConvexEqualsOneSided) {
    const auto th = [](double q) { return theta(q, 0.4); };
    for (double q : {-2.0, 0.3, 1.7}) {
        const auto d = one_sided_derivatives(th, q);
        const auto fl = flat_derivatives(th, q);
        EXPECT_NEAR(fl.left_flat, d.left, 1e-6);
        EXPECT_NEAR(fl.right_flat, d.right, 1e-6);
    }
}

TEST(Flat, KinkOfBInsideUnitInterval) {
    // b = theta on (0, 1); its kinks are at 0 and 1 where the branches swap.
    const auto b = [](double q) { return b_of_q(q, kPair); };
    const auto f0 = flat_derivatives(b, 0.0);
    EXPECT_NEAR(f0.left_flat, theta_prime(0.0, 0.4), 1e-6);
    EXPECT_NEAR(f0.right_flat, theta_prime(0.0, 0.2), 1e-6);
    const auto f1 = flat_derivatives(b, 1.0);
    EXPECT_NEAR(f1.left_flat, theta_prime(1.0, 0.2), 1e-6);
    EXPECT_NEAR(f1.right_flat, theta_prime(1.0, 0.4), 1e-6);
}
