#include "mfx/measures.hpp"

#include "hp_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mfx;

namespace {
const PhaseSchedule kShort({1, 2, 6});
const PhaseSchedule kDemo({1, 2, 6, 24, 120, 720, 5040});
const BernoulliPair kPair(0.2, 0.4);
} // namespace

TEST(Phase, ShortScheduleExamples) {
    EXPECT_EQ(phase(1, kShort), Phase::PTilde);
    EXPECT_EQ(phase(2, kShort), Phase::P);
    EXPECT_EQ(phase(3, kShort), Phase::P);
    EXPECT_EQ(phase(5, kShort), Phase::P);
    EXPECT_EQ(phase(6, kShort), Phase::PTilde);
    EXPECT_EQ(phase(7, kShort), Phase::PTilde);
    EXPECT_EQ(phase(100000, kShort), Phase::PTilde);
    EXPECT_STREQ(to_string(Phase::P), "P_PHASE");
    EXPECT_STREQ(to_string(Phase::PTilde), "PTILDE_PHASE");
    EXPECT_THROW((void)phase(0, kShort), PreconditionError);
}

TEST(Phase, ChangesOnlyAtSwitchTimes) {
    const auto& t = kDemo.times();
    for (std::size_t j = 2; j <= 6000; ++j) {
        const bool is_switch = std::find(t.begin(), t.end(), j) != t.end();
        EXPECT_EQ(kDemo.phase(j) != kDemo.phase(j - 1), is_switch) << "j = " << j;
    }
}

TEST(PhaseSchedule, CountsAndBlockEnds) {
    std::size_t a = 0;
    for (std::size_t n = 1; n <= 6000; ++n) {
        a += kDemo.phase(n) == Phase::P ? 1 : 0;
        ASSERT_EQ(kDemo.p_phase_count(n), a) << "n = " << n;
    }
    EXPECT_EQ(kDemo.p_phase_count(0), 0u);
    EXPECT_EQ(kDemo.p_phase_count(5039), 4420u);
    EXPECT_EQ(kDemo.block_ends(5039), (std::vector<std::size_t>{1, 5, 23, 119, 719, 5039}));
    EXPECT_EQ(kDemo.block_ends(700), (std::vector<std::size_t>{1, 5, 23, 119}));
    EXPECT_EQ(kDemo.block_start(800), 720u);
    EXPECT_TRUE(kDemo.vanishing_ratio());
    EXPECT_FALSE(PhaseSchedule({1, 2, 3, 4}).vanishing_ratio());
}

TEST(PhaseSchedule, Validation) {
    EXPECT_THROW(PhaseSchedule({2, 3}), ValidationError);
    EXPECT_THROW(PhaseSchedule(std::vector<std::size_t>{}), ValidationError);
    try {
        PhaseSchedule({1, 6, 2});
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("1 = t_0 < t_1 < ..."), std::string::npos);
    }
}

TEST(BernoulliPair, RejectsEachViolatedInequality) {
    const auto message = [](double p, double pt) {
        try {
            BernoulliPair(p, pt);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message(0.0, 0.4).find("0 < p"), std::string::npos);
    EXPECT_NE(message(0.2, 0.6).find("p~ <= 1/2"), std::string::npos);
    EXPECT_NE(message(0.3, 0.3).find("p < p~"), std::string::npos);
    EXPECT_NE(message(0.4, 0.2).find("p < p~"), std::string::npos);
    EXPECT_NO_THROW(BernoulliPair(0.2, 0.5));
}

TEST(LogMass, Examples) {
    const OscillatingMeasure mu(kPair, kShort);
    EXPECT_EQ(log2_mass(mu, Cylinder{}), 0.0);
    EXPECT_NEAR(log2_mass(mu, Cylinder::from_string("0")), hp::log2d(0.4), 1e-15);
    EXPECT_NEAR(log2_mass(mu, Cylinder::from_string("00")), -3.6438561897747247, 1e-14);
    EXPECT_NEAR(log2_mass(mu, Cylinder::from_string("00")), hp::log2d(0.4) + hp::log2d(0.2), 1e-14);
    EXPECT_NEAR(log2_mass(mu, Cylinder::from_string("1")), hp::log2d(0.6), 1e-15);
    EXPECT_NEAR(log2_mass(mu, Cylinder::from_string("01")), hp::log2d(0.4) + hp::log2d(0.8), 1e-14);
}

TEST(LogMass, NoUnderflowAtDemoDepth) {
    const OscillatingMeasure mu(kPair, kDemo);
    const auto x = Path::constant(0, 5040);
    const double lm = log2_mass(mu, x.digits());
    EXPECT_TRUE(std::isfinite(lm));
    const double a = static_cast<double>(kDemo.p_phase_count(5040));
    const double expected = a * std::log2(0.2) + (5040.0 - a) * std::log2(0.4);
    EXPECT_NEAR(lm, expected, 1e-12 * std::abs(expected));
}

TEST(LogMass, MonotoneAlongPaths) {
    const OscillatingMeasure mu(kPair, kDemo);
    std::mt19937 gen(3);
    Cylinder c;
    double prev = 0.0;
    for (int j = 0; j < 800; ++j) {
        c.push_back(gen() % 2);
        const double v = log2_mass(mu, c);
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(Additivity, Examples) {
    const OscillatingMeasure mu(kPair, kShort);
    const auto rep = check_additivity(mu, 12);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.cylinders_checked, (std::size_t{1} << 12) - 1);
    const OscillatingMeasure nu(0.35, 0.48714661259456357, kDemo);
    EXPECT_TRUE(check_additivity(nu, 10).ok());
    EXPECT_THROW((void)check_additivity(mu, 21), DepthOverflowError);
}

TEST(Normalization, LevelSumsAreOne) {
    const OscillatingMeasure mu(kPair, kDemo);
    for (std::size_t n : {1u, 5u, 12u, 18u}) {
        double sum = 0.0;
        for (const Cylinder& c : level_packing(n)) {
            const double m = std::exp2(log2_mass(mu, c));
            EXPECT_GT(m, 0.0);
            sum += m;
        }
        EXPECT_NEAR(sum, 1.0, 1e-10) << "n = " << n;
    }
}

TEST(HomogeneousDegeneration, SingleTailPhaseIsBernoulli) {
    const OscillatingMeasure m(0.3, 0.3, PhaseSchedule({1}));
    for (const Cylinder& c : level_packing(9)) {
        const double zeros = static_cast<double>(c.depth() - c.count_ones());
        const double ones = static_cast<double>(c.count_ones());
        EXPECT_NEAR(log2_mass(m, c), zeros * std::log2(0.3) + ones * std::log2(0.7), 1e-13);
    }
}

TEST(OscillatingMeasure, WeightsAndValidation) {
    const OscillatingMeasure mu(kPair, kShort);
    EXPECT_EQ(mu.weight(Phase::P), 0.2);
    EXPECT_EQ(mu.weight(Phase::PTilde), 0.4);
    EXPECT_EQ(mu.weight_at(1), 0.4);
    EXPECT_EQ(mu.weight_at(4), 0.2);
    EXPECT_THROW(OscillatingMeasure(0.0, 0.4, kShort), ValidationError);
    EXPECT_THROW(OscillatingMeasure(0.2, 1.0, kShort), ValidationError);
    EXPECT_EQ(mu, OscillatingMeasure(0.2, 0.4, kShort));
}
