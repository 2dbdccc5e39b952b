#include "mfx/analytic_spectra.hpp"
#include "mfx/sampling.hpp"

#include <gtest/gtest.h>

using namespace mfx;

namespace {
const BernoulliPair kPair(0.2, 0.4);
const PhaseSchedule kDemo({1, 2, 6, 24, 120, 720, 5040});
const OscillatingMeasure kMu(kPair, kDemo);

OscillatingMeasure matched_nu() {
    const auto aux = solve_r_tilde(0.35, kPair);
    return {aux.r(), aux.r_tilde(), kDemo};
}
} // namespace

TEST(Rng, SplitmixReferenceValues) {
    // First outputs of the reference splitmix64 generator seeded with 0.
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(splitmix64(0x9e3779b97f4a7c15ULL), 0x6e789e6aa1b965f4ULL);
    EXPECT_NE(derive_path_seed(1, 0), derive_path_seed(1, 1));
    EXPECT_NE(derive_path_seed(1, 0), derive_path_seed(2, 0));
    EXPECT_STREQ(kRngVersion, "mfx-rng-1");
}

TEST(Rng, UniformRange) {
    PathRng rng(123);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(SamplePath, SameSeedSamePath) {
    const auto a = sample_path(kMu, 5039, 99);
    const auto b = sample_path(kMu, 5039, 99);
    EXPECT_EQ(a.digits(), b.digits());
    EXPECT_EQ(a.seed().value(), 99u);
    EXPECT_EQ(a.length(), 5039u);
}

TEST(SamplePath, DistinctSeedsDiffer) {
    EXPECT_NE(sample_path(kMu, 500, 1).digits(), sample_path(kMu, 500, 2).digits());
}

TEST(SamplePath, DepthLimit) {
    EXPECT_THROW((void)sample_path(kMu, 6001, 1), DepthOverflowError);
}

TEST(SamplePath, ZeroFractionPerBlockWithinCLT) {
    const OscillatingMeasure m(0.9, 0.7, kDemo);
    const auto x = sample_path(m, 5039, 2024);
    const auto& t = kDemo.times();
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const std::size_t from = t[i];
        const std::size_t to = std::min<std::size_t>(t[i + 1] - 1, 5039);
        double zeros = 0.0;
        for (std::size_t j = from; j <= to; ++j) {
            zeros += x.digit(j) == 0 ? 1.0 : 0.0;
        }
        const double n = static_cast<double>(to - from + 1);
        const double w = m.weight(PhaseSchedule::phase_of_interval(i));
        EXPECT_LE(std::abs(zeros / n - w), 3.0 * std::sqrt(w * (1 - w) / n) + 1e-12) << "block " << i;
    }
}

TEST(ExponentTrace, HomogeneousHalfIsOne) {
    const OscillatingMeasure half(0.5, 0.5, kDemo);
    const auto x = sample_path(kMu, 1000, 5);
    const std::vector<std::size_t> depths{1, 10, 999, 1000};
    const auto tr = exponent_trace(x, half, half, depths);
    for (double e : tr.mu_exponents) {
        EXPECT_DOUBLE_EQ(e, 1.0);
    }
    const auto v = level_set_classifier(tr, 1.0, 1.0, 1e-12);
    EXPECT_EQ(v, LevelSetVerdict::InBoth);
}

TEST(ExponentTrace, MatchesDirectMassEvaluation) {
    const auto nu = matched_nu();
    const auto x = sample_path(nu, 3000, 77);
    const std::vector<std::size_t> depths{1, 17, 2999, 3000};
    const auto tr = exponent_trace(x, kMu, nu, depths);
    ASSERT_EQ(tr.mu_exponents.size(), 4u);
    EXPECT_EQ(tr.seed, 77u);
    EXPECT_EQ(tr.sampled_r, nu.weight(Phase::P));
    for (std::size_t k = 0; k < depths.size(); ++k) {
        const auto c = prefix(x, depths[k]);
        EXPECT_NEAR(tr.mu_exponents[k], -log2_mass(kMu, c) / static_cast<double>(depths[k]), 1e-12);
        EXPECT_NEAR(tr.nu_exponents[k], -log2_mass(nu, c) / static_cast<double>(depths[k]), 1e-12);
    }
}

TEST(ExponentTrace, Preconditions) {
    const auto x = sample_path(kMu, 100, 1);
    const std::vector<std::size_t> unsorted{5, 3};
    const std::vector<std::size_t> too_deep{101};
    const std::vector<std::size_t> zero{0};
    EXPECT_THROW((void)exponent_trace(x, kMu, kMu, unsorted), PreconditionError);
    EXPECT_THROW((void)exponent_trace(x, kMu, kMu, too_deep), PreconditionError);
    EXPECT_THROW((void)exponent_trace(x, kMu, kMu, zero), PreconditionError);
}

TEST(ExponentTrace, ValuesWithinExtremeDigitRuns) {
    const auto nu = matched_nu();
    const std::vector<std::size_t> depths{1, 2, 5, 23, 100, 719, 5039};
    for (const auto& tr : sample_traces(kMu, nu, 50, 5039, 8, depths)) {
        for (double e : tr.mu_exponents) {
            EXPECT_TRUE(std::isfinite(e));
            EXPECT_GE(e, -std::log2(1 - 0.2) - 1e-12);
            EXPECT_LE(e, -std::log2(0.2) + 1e-12);
        }
    }
}

TEST(ExponentMoments, MatchedMeanIsAlphaInBothPhases) {
    const auto nu = matched_nu();
    const double alpha = alpha_of_r(0.35, 0.2);
    for (std::size_t n : {1u, 5u, 100u, 720u, 5039u}) {
        EXPECT_NEAR(exponent_moments(kMu, nu, n).mean, alpha, 1e-13);
    }
    const auto nm = exponent_moments(nu, nu, 5039);
    const double f = 4420.0 / 5039.0;
    EXPECT_NEAR(nm.mean, f * entropy_h(0.35) + (1 - f) * entropy_h(nu.weight(Phase::PTilde)), 1e-13);
    EXPECT_THROW((void)exponent_moments(kMu, nu, 0), PreconditionError);
}

TEST(MonteCarlo, MeanExponentWithinCLTBand) {
    const auto nu = matched_nu();
    const double alpha = alpha_of_r(0.35, 0.2);
    const std::vector<std::size_t> depths{100, 720, 5039};
    const auto traces = sample_traces(kMu, nu, 200, 5039, 20240611, depths);
    for (std::size_t k = 0; k < depths.size(); ++k) {
        double mean = 0.0;
        for (const auto& tr : traces) {
            mean += tr.mu_exponents[k];
        }
        mean /= 200.0;
        const auto m = exponent_moments(kMu, nu, depths[k]);
        EXPECT_LE(std::abs(mean - alpha), 3.0 * m.sd / std::sqrt(200.0)) << "depth " << depths[k];
    }
}

TEST(MonteCarlo, NuEnvelopeBracketsEntropies) {
    const auto nu = matched_nu();
    const double h_lo = entropy_h(0.35);
    const double h_hi = entropy_h(nu.weight(Phase::PTilde));
    const std::vector<std::size_t> depths{719, 5039};
    const auto traces = sample_traces(kMu, nu, 200, 5039, 31337, depths);
    for (std::size_t k = 0; k < depths.size(); ++k) {
        double mean = 0.0;
        for (const auto& tr : traces) {
            mean += tr.nu_exponents[k];
        }
        mean /= 200.0;
        const auto m = exponent_moments(nu, nu, depths[k]);
        const double band = 3.0 * m.sd / std::sqrt(200.0);
        EXPECT_GE(mean, h_lo - band);
        EXPECT_LE(mean, h_hi + band);
        EXPECT_LE(std::abs(mean - m.mean), band);
    }
}

TEST(Classifier, DemoLocalization) {
    const auto nu = matched_nu();
    const double alpha = alpha_of_r(0.35, 0.2);
    const std::vector<std::size_t> depths{1, 5, 23, 100, 119, 719, 720, 5039};
    const auto traces = sample_traces(kMu, nu, 200, 5039, 20240611, depths);
    const auto window = tail_depths(kDemo, 5039);
    EXPECT_EQ(window, (std::vector<std::size_t>{5039}));
    std::size_t in_both = 0;
    for (const auto& tr : traces) {
        in_both += level_set_classifier(tr, alpha, alpha, 0.03, window) == LevelSetVerdict::InBoth ? 1 : 0;
    }
    EXPECT_GE(static_cast<double>(in_both) / 200.0, 0.95);
}

TEST(Classifier, VerdictsAndErrors) {
    ExponentTrace tr;
    tr.depths = {10, 20, 30};
    tr.mu_exponents = {0.8, 1.0, 1.2};
    tr.nu_exponents = {0, 0, 0};
    EXPECT_EQ(level_set_classifier(tr, 0.8, 1.2, 0.0), LevelSetVerdict::InBoth);
    EXPECT_EQ(level_set_classifier(tr, 0.8, 1.1, 0.0), LevelSetVerdict::InLower);
    EXPECT_EQ(level_set_classifier(tr, 0.9, 1.2, 0.0), LevelSetVerdict::InUpper);
    EXPECT_EQ(level_set_classifier(tr, 1.0, 1.0, 0.05), LevelSetVerdict::Undetermined);
    const std::vector<std::size_t> window{20};
    EXPECT_EQ(level_set_classifier(tr, 1.0, 1.0, 0.0, window), LevelSetVerdict::InBoth);
    EXPECT_THROW((void)level_set_classifier(tr, 1.1, 1.0, 0.0), PreconditionError);
    const std::vector<std::size_t> missing{25};
    EXPECT_THROW((void)level_set_classifier(tr, 1.0, 1.0, 0.0, missing), PreconditionError);
    EXPECT_STREQ(to_string(LevelSetVerdict::InBoth), "in_both");
}

TEST(TailDepths, BlockStructure) {
    EXPECT_EQ(tail_depths(kDemo, 5039), (std::vector<std::size_t>{5039}));
    EXPECT_EQ(tail_depths(kDemo, 719), (std::vector<std::size_t>{719}));
    EXPECT_EQ(tail_depths(kDemo, 1000), (std::vector<std::size_t>{1000}));
    EXPECT_EQ(tail_depths(kDemo, 6000), (std::vector<std::size_t>{6000}));
}

TEST(SampleTraces, Deterministic) {
    const auto nu = matched_nu();
    const std::vector<std::size_t> depths{5, 100, 1000};
    const auto a = sample_traces(kMu, nu, 10, 1000, 42, depths);
    const auto b = sample_traces(kMu, nu, 10, 1000, 42, depths);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].seed, derive_path_seed(42, i));
        EXPECT_EQ(a[i].mu_exponents, b[i].mu_exponents);
        EXPECT_EQ(a[i].nu_exponents, b[i].nu_exponents);
    }
}
