#include "mfx/sampling.hpp"
#include "mfx/spectra_report.hpp"

#include "hp_oracle.hpp"

#include <gtest/gtest.h>

using namespace mfx;

namespace {
const BernoulliPair kPair(0.2, 0.4);
const PhaseSchedule kDemo({1, 2, 6, 24, 120, 720, 5040});

const SpectrumTable& demo_table() {
    static const SpectrumTable table = [] {
        const auto grid = uniform_alpha_grid(kPair, 202);
        return build_spectrum(kPair, grid);
    }();
    return table;
}
} // namespace

TEST(AlphaGrid, CoversClosedInterval) {
    const auto g = uniform_alpha_grid(kPair, 11);
    const auto iv = alpha_interval(kPair);
    EXPECT_EQ(g.size(), 11u);
    EXPECT_EQ(g.front(), iv.lo);
    EXPECT_NEAR(g.back(), iv.hi, 1e-15);
    EXPECT_THROW((void)uniform_alpha_grid(kPair, 1), ValidationError);
}

TEST(BuildSpectrum, DemoTableShape) {
    const auto& t = demo_table();
    EXPECT_EQ(t.rows.size(), 200u);
    EXPECT_EQ(t.dropped.size(), 2u);
    EXPECT_LE(t.q_min, -8.0);
    EXPECT_GE(t.q_max, 8.0);
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        EXPECT_LT(t.rows[i - 1].branch.alpha, t.rows[i].branch.alpha);
    }
}

TEST(BuildSpectrum, ConjugatesMatchEntropies) {
    for (const auto& row : demo_table().rows) {
        const double lo = std::min(row.branch.h_r, row.branch.h_r_tilde);
        const double hi = std::max(row.branch.h_r, row.branch.h_r_tilde);
        EXPECT_NEAR(row.b_star, lo, 1e-5) << row.branch.alpha;
        if (row.packing_valid) {
            EXPECT_NEAR(row.B_star, hi, 1e-5) << row.branch.alpha;
        }
        EXPECT_LE(row.b_star, row.B_star);
        EXPECT_GE(row.b_star, 0.0);
        EXPECT_LE(row.B_star, 1.0 + 1e-12);
        EXPECT_TRUE(row.conditions.any());
        EXPECT_EQ(row.packing_valid, !packing_excluded(row.branch.alpha, kPair));
    }
}

TEST(BuildSpectrum, DemoAlpha) {
    const std::vector<double> grid{hp::alpha(0.35, 0.2)};
    const auto t = build_spectrum(kPair, grid);
    ASSERT_EQ(t.rows.size(), 1u);
    const auto& row = t.rows.front();
    EXPECT_NEAR(row.r, 0.35, 1e-14);
    EXPECT_NEAR(row.b_star, hp::entropy(0.35), 1e-5);
    EXPECT_NEAR(row.b_star, std::min(hp::entropy(0.35), hp::entropy(hp::r_tilde(0.35, 0.2, 0.4))), 1e-5);
    EXPECT_TRUE(row.packing_valid);
    EXPECT_NEAR(row.B_star, hp::entropy(hp::r_tilde(0.35, 0.2, 0.4)), 1e-5);
}

TEST(BuildSpectrum, EntropyCrossingLiesInExcludedUnion) {
    // For this pair the entropies cross where r = r~.
    const double r = 0.29330494738857627;
    const auto aux = solve_r_tilde(r, kPair);
    EXPECT_NEAR(aux.r_tilde(), r, 1e-12);
    const std::vector<double> grid{aux.alpha()};
    const auto t = build_spectrum(kPair, grid);
    ASSERT_EQ(t.rows.size(), 1u);
    const auto& row = t.rows.front();
    EXPECT_NEAR(row.branch.h_r, row.branch.h_r_tilde, 1e-12);
    EXPECT_NEAR(row.b_star, row.branch.h_r, 1e-5);
    EXPECT_FALSE(row.packing_valid);
    EXPECT_GT(row.B_star, row.b_star + 1e-3);
}

TEST(BuildSpectrum, Concavity) {
    const auto& rows = demo_table().rows;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        EXPECT_GE(rows[i].b_star + 1e-8, 0.5 * (rows[i - 1].b_star + rows[i + 1].b_star));
        EXPECT_GE(rows[i].B_star + 1e-8, 0.5 * (rows[i - 1].B_star + rows[i + 1].B_star));
    }
}

TEST(BuildSpectrum, RangeErrorsAndDrops) {
    const std::vector<double> outside{2.0};
    EXPECT_THROW((void)build_spectrum(kPair, outside), RangeError);
    const auto iv = alpha_interval(kPair);
    const std::vector<double> edges{iv.lo, iv.hi};
    const auto t = build_spectrum(kPair, edges);
    EXPECT_TRUE(t.rows.empty());
    EXPECT_EQ(t.dropped.size(), 2u);
}

TEST(BuildSpectrum, SinglePhaseDegeneration) {
    // With p~ = p the pair is rejected; a single-phase measure is covered by
    // the theta conjugate alone, where b* = B* = h(r).
    EXPECT_THROW(BernoulliPair(0.3, 0.3), ValidationError);
    const auto th = GridFunction::sample([](double q) { return theta(q, 0.3); }, -8.0, 8.0, 1e-3);
    for (double r : {0.2, 0.3, 0.45}) {
        EXPECT_NEAR(legendre_transform(th, alpha_of_r(r, 0.3)).value, entropy_h(r), 1e-5);
    }
}

TEST(Reconcile, DemoTraces) {
    const double alpha = hp::alpha(0.35, 0.2);
    const std::vector<double> grid{alpha};
    const auto table = build_spectrum(kPair, grid);
    const auto& row = table.rows.front();
    const OscillatingMeasure mu(kPair, kDemo);
    const OscillatingMeasure nu(row.r, row.r_tilde, kDemo);
    const std::vector<std::size_t> depths{1, 5, 23, 119, 719, 5039};
    const auto traces = sample_traces(mu, nu, 200, 5039, 20240611, depths);
    const auto rep = reconcile_with_monte_carlo(table, traces, kDemo);
    EXPECT_EQ(rep.rows_covered, 1u);
    EXPECT_DOUBLE_EQ(rep.coverage, 1.0);
    ASSERT_EQ(rep.rows.size(), 1u);
    EXPECT_GE(rep.rows[0].localized_fraction, 0.95);
    EXPECT_EQ(rep.rows[0].envelope_depths, (std::vector<std::size_t>{719, 5039}));
    EXPECT_TRUE(rep.rows[0].nu_bracket_ok);
    EXPECT_TRUE(rep.ok());
}

TEST(Reconcile, EmptyTraceSet) {
    const auto rep = reconcile_with_monte_carlo(demo_table(), {}, kDemo);
    EXPECT_EQ(rep.rows_covered, 0u);
    EXPECT_EQ(rep.coverage, 0.0);
    EXPECT_TRUE(rep.rows.empty());
}

TEST(Reconcile, MismatchedTraces) {
    const std::vector<double> grid{hp::alpha(0.35, 0.2)};
    const auto table = build_spectrum(kPair, grid);
    const OscillatingMeasure mu(kPair, kDemo);
    const OscillatingMeasure wrong(0.35, 0.45, kDemo);
    const std::vector<std::size_t> depths{100};
    const auto traces = sample_traces(mu, wrong, 3, 100, 1, depths);
    EXPECT_THROW((void)reconcile_with_monte_carlo(table, traces, kDemo), MismatchError);
}

TEST(EnvelopeDepths, LastTwoBlockEnds) {
    EXPECT_EQ(envelope_depths(kDemo, 5039), (std::vector<std::size_t>{719, 5039}));
    EXPECT_EQ(envelope_depths(kDemo, 3), (std::vector<std::size_t>{1}));
}
