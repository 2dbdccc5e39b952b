#pragma once

// The consolidated verification run: eleven numbered checks, each producing a
// pass flag and a JSON block of the quantities it compared. Measured run times
// are reported separately (RuntimeLog) so the JSON verdict stays byte-stable.

#include "mfx/analytic_spectra.hpp"
#include "mfx/artifacts.hpp"
#include "mfx/config.hpp"
#include "mfx/io.hpp"
#include "mfx/legendre.hpp"
#include "mfx/measures.hpp"
#include "mfx/oracles.hpp"
#include "mfx/partition.hpp"
#include "mfx/sampling.hpp"
#include "mfx/spectra_report.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mfx {

namespace thresholds {
inline constexpr std::size_t kOracleMaxDepth = 16;
inline constexpr double kOracleQ[] = {-2.0, -0.5, 0.0, 0.5, 1.0, 2.0};
inline constexpr double kOracleTol = 1e-12;
inline constexpr double kOracleBudget = 10.0;
inline constexpr double kAnchorTol = 1e-12;
inline constexpr std::size_t kAnchorMaxDepth = 5039;
inline constexpr double kOscillationRatio = 0.5;
inline constexpr double kOscillationQ = 2.0;
inline constexpr double kOscillationBudget = 1.0;
inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kIdentityQMin = -8.0;
inline constexpr double kIdentityQMax = 8.0;
inline constexpr double kIdentityStep = 1e-2;
inline constexpr double kConjugateTol = 1e-5;
inline constexpr std::size_t kSolverSamples = 50;
inline constexpr double kSolverTol = 1e-12;
inline constexpr double kPhiDerivativeTol = 1e-6;
inline constexpr double kPhiDerivativeStep = 1e-4;
inline constexpr std::size_t kPhiWindowMin = 720;
inline constexpr std::size_t kPhiWindowMax = 5039;
inline constexpr double kPhiHatTol = 0.05;
inline constexpr double kPhiPoints[] = {-1.0, 0.5, 1.0};
inline constexpr double kLocalizedFraction = 0.95;
inline constexpr double kSamplingBudget = 30.0;
inline constexpr std::size_t kConditionSamples = 1000;
inline constexpr double kConvexityTol = 1e-8;
inline constexpr std::size_t kConvexityDepths[] = {1, 5, 23, 100, 119, 719, 720, 5039};
} // namespace thresholds

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    nlohmann::ordered_json details;
};

struct RuntimeLog {
    std::vector<std::pair<int, double>> seconds;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

namespace detail {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/// theta in extended precision, as an independent reference.
inline double theta_reference(double q, double w) {
    const long double lw = w;
    return static_cast<double>(std::log2(std::pow(lw, static_cast<long double>(q)) +
                                         std::pow(1.0L - lw, static_cast<long double>(q))));
}

inline std::vector<double> q_grid(double lo, double hi, double step) {
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step));
    for (std::size_t i = 0; i <= count; ++i) {
        out.push_back(lo + step * static_cast<double>(i));
    }
    return out;
}

/// Largest excess f(mid) - (f(a) + f(b))/2 over consecutive triples.
template <class F>
double midpoint_excess(const F& f, const std::vector<double>& grid) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        worst = std::max(worst, f(grid[i]) - 0.5 * (f(grid[i - 1]) + f(grid[i + 1])));
    }
    return worst;
}

} // namespace detail

// ------------------------------------------------------------------ checks

inline CheckResult check_oracle_equivalence(const ExperimentConfig& cfg) {
    const auto mu = cfg.mu();
    double worst = 0.0;
    std::size_t compared = 0;
    for (double q : thresholds::kOracleQ) {
        for (std::size_t n = 1; n <= thresholds::kOracleMaxDepth; ++n) {
            worst = std::max(worst, std::abs(level_log2_sum(mu, q, n) - oracle::enumerated_level_log2_sum(mu, q, n)));
            ++compared;
        }
    }
    CheckResult r{1, "oracle_equivalence", worst <= thresholds::kOracleTol, {}};
    r.details = {{"max_depth", thresholds::kOracleMaxDepth},
                 {"q", thresholds::kOracleQ},
                 {"comparisons", compared},
                 {"max_abs_diff", worst},
                 {"tolerance", thresholds::kOracleTol},
                 {"runtime_budget_s", thresholds::kOracleBudget}};
    return r;
}

inline CheckResult check_trivial_anchors(const ExperimentConfig& cfg) {
    const auto mu = cfg.mu();
    const std::size_t top = std::max(thresholds::kAnchorMaxDepth, cfg.partition.n_max);
    double worst0 = 0.0;
    double worst1 = 0.0;
    for (std::size_t n = 1; n <= top; ++n) {
        worst0 = std::max({worst0, std::abs(tau_hat(mu, 0.0, n) - 1.0), std::abs(level_stats(mu, 0.0, n).tau_hat - 1.0)});
        worst1 = std::max({worst1, std::abs(tau_hat(mu, 1.0, n)), std::abs(level_stats(mu, 1.0, n).tau_hat)});
    }
    CheckResult r{2, "trivial_anchors",
                  worst0 <= thresholds::kAnchorTol && worst1 <= thresholds::kAnchorTol, {}};
    r.details = {{"max_depth", top},
                 {"max_abs_dev_q0", worst0},
                 {"max_abs_dev_q1", worst1},
                 {"tolerance", thresholds::kAnchorTol}};
    return r;
}

inline CheckResult check_oscillation(const ExperimentConfig& cfg) {
    const auto mu = cfg.mu();
    const auto& s = mu.schedule();
    const double q = thresholds::kOscillationQ;
    const double th = detail::theta_reference(q, cfg.measure.p);
    const double tht = detail::theta_reference(q, cfg.measure.p_tilde);
    const auto env = subsequence_envelope(mu, q, cfg.partition.n_min, cfg.partition.n_max);
    const auto ends = s.block_ends(cfg.partition.n_max);
    const auto is_end = [&](std::size_t n) { return std::find(ends.begin(), ends.end(), n) != ends.end(); };
    // tau_hat increases with the share of the larger branch, so the max sits
    // at the end of a block of that branch's phase and the min at the other.
    const Phase hi_phase = th >= tht ? Phase::P : Phase::PTilde;
    const Phase lo_phase = hi_phase == Phase::P ? Phase::PTilde : Phase::P;
    const double required = thresholds::kOscillationRatio * std::abs(th - tht);
    const bool width_ok = env.width() >= required;
    const bool max_ok = is_end(env.argmax_n) && s.phase(env.argmax_n) == hi_phase;
    const bool min_ok = is_end(env.argmin_n) && s.phase(env.argmin_n) == lo_phase;
    CheckResult r{3, "oscillation_b_ne_B", width_ok && max_ok && min_ok, {}};
    r.details = {{"q", q},
                 {"window", {cfg.partition.n_min, cfg.partition.n_max}},
                 {"theta", th},
                 {"theta_tilde", tht},
                 {"required_width", required},
                 {"width", env.width()},
                 {"lim_inf_est", env.lim_inf_est},
                 {"lim_sup_est", env.lim_sup_est},
                 {"argmax_n", env.argmax_n},
                 {"argmax_phase", to_string(s.phase(env.argmax_n))},
                 {"argmax_is_block_end", is_end(env.argmax_n)},
                 {"argmin_n", env.argmin_n},
                 {"argmin_phase", to_string(s.phase(env.argmin_n))},
                 {"argmin_is_block_end", is_end(env.argmin_n)},
                 {"runtime_budget_s", thresholds::kOscillationBudget}};
    return r;
}

inline CheckResult check_entropy_identity(const ExperimentConfig& cfg) {
    const auto pair = cfg.pair();
    double worst_theta = 0.0;
    double worst_theta_tilde = 0.0;
    std::size_t points = 0;
    for (double q : detail::q_grid(thresholds::kIdentityQMin, thresholds::kIdentityQMax, thresholds::kIdentityStep)) {
        worst_theta = std::max(worst_theta, legendre_identity_check(q, pair, Branch::Theta));
        worst_theta_tilde = std::max(worst_theta_tilde, legendre_identity_check(q, pair, Branch::ThetaTilde));
        ++points;
    }
    CheckResult r{4, "entropy_identity",
                  worst_theta <= thresholds::kIdentityTol && worst_theta_tilde <= thresholds::kIdentityTol, {}};
    r.details = {{"grid", {thresholds::kIdentityQMin, thresholds::kIdentityQMax, thresholds::kIdentityStep}},
                 {"points", points},
                 {"max_residual_theta", worst_theta},
                 {"max_residual_theta_tilde", worst_theta_tilde},
                 {"tolerance", thresholds::kIdentityTol}};
    return r;
}

inline CheckResult check_conjugates(const ExperimentConfig& cfg, const SpectrumTable& table) {
    double worst_b = 0.0;
    double worst_B = 0.0;
    std::size_t valid = 0;
    for (const auto& row : table.rows) {
        const double lo = std::min(row.branch.h_r, row.branch.h_r_tilde);
        const double hi = std::max(row.branch.h_r, row.branch.h_r_tilde);
        worst_b = std::max(worst_b, std::abs(row.b_star - lo));
        if (row.packing_valid) {
            worst_B = std::max(worst_B, std::abs(row.B_star - hi));
            ++valid;
        }
    }
    const std::size_t expected_rows = cfg.grids.alpha_count - 2;
    CheckResult r{5, "legendre_conjugates",
                  table.rows.size() == expected_rows && worst_b <= thresholds::kConjugateTol &&
                      worst_B <= thresholds::kConjugateTol,
                  {}};
    r.details = {{"rows", table.rows.size()},
                 {"expected_rows", expected_rows},
                 {"dropped", table.dropped.size()},
                 {"packing_valid_rows", valid},
                 {"q_grid", {table.q_min, table.q_max, table.q_step}},
                 {"max_abs_diff_b", worst_b},
                 {"max_abs_diff_B_valid", worst_B},
                 {"tolerance", thresholds::kConjugateTol}};
    return r;
}

inline CheckResult check_constraint_solver(const ExperimentConfig& cfg) {
    const auto pair = cfg.pair();
    const auto window = r_window(pair);
    double worst = 0.0;
    bool in_unit = true;
    const std::size_t n = thresholds::kSolverSamples;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = window.lo + window.width() * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const auto aux = solve_r_tilde(r, pair);
        worst = std::max(worst, derivative_matching_residual(aux.r(), aux.r_tilde(), pair));
        in_unit = in_unit && aux.r_tilde() > 0.0 && aux.r_tilde() < 1.0;
    }
    const auto rejected = [&](double r) {
        try {
            (void)solve_r_tilde(r, pair);
            return false;
        } catch (const AdmissibilityError&) {
            return true;
        }
    };
    const double below = window.lo - 0.5 * window.lo;
    const double above = window.hi + 0.5 * (1.0 - window.hi);
    const bool rejects = rejected(below) && rejected(above) && rejected(window.lo) && rejected(window.hi);

    const double configured_residual = derivative_matching_residual(cfg.nu.r, cfg.r_tilde(), pair);
    const bool configured_ok = configured_residual <= thresholds::kSolverTol;

    CheckResult r{6, "constraint_solver",
                  worst <= thresholds::kSolverTol && in_unit && rejects && configured_ok, {}};
    r.details = {{"samples", n},
                 {"r_window", {window.lo, window.hi}},
                 {"max_residual", worst},
                 {"r_tilde_in_unit_interval", in_unit},
                 {"inadmissible_rejected", rejects},
                 {"configured_r", cfg.nu.r},
                 {"configured_r_tilde", cfg.r_tilde()},
                 {"configured_residual", configured_residual},
                 {"tolerance", thresholds::kSolverTol}};
    return r;
}

inline CheckResult check_phi(const ExperimentConfig& cfg) {
    const auto pair = cfg.pair();
    CheckResult r{7, "phi_consistency", false, {}};
    std::optional<AuxiliaryParams> aux;
    try {
        aux = AuxiliaryParams::from(cfg.nu.r, cfg.r_tilde(), pair);
    } catch (const Error& e) {
        r.details = {{"error", e.what()}};
        return r;
    }
    const auto phi = [&](double x) { return phi_closed_form(x, pair, *aux); };
    const double phi0 = phi(0.0);
    const double h = thresholds::kPhiDerivativeStep;
    const double dphi = (phi(h) - phi(-h)) / (2.0 * h);
    const double deriv_err = std::abs(dphi + aux->alpha());

    const auto mu = cfg.mu();
    const auto nu = cfg.nu_measure();
    const std::size_t n_min = thresholds::kPhiWindowMin;
    const std::size_t n_max = thresholds::kPhiWindowMax;
    const auto fr = phase_fraction_extremes(mu.schedule(), n_min, n_max);
    bool hat_ok = true;
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (double x : thresholds::kPhiPoints) {
        const auto hat = phi_hat(mu, nu, x, n_min, n_max);
        const auto br = phi_branches(x, pair, *aux);
        const double closed = std::max(br.p_branch, br.p_tilde_branch);
        // phi_hat is max over n of f_n A + (1 - f_n) A~, so its shortfall from
        // max(A, A~) is fixed by the extreme phase fractions of the window.
        const double bound = br.p_branch >= br.p_tilde_branch ? (1.0 - fr.f_max) * (br.p_branch - br.p_tilde_branch)
                                                              : fr.f_min * (br.p_tilde_branch - br.p_branch);
        const double gap = std::abs(hat.value - closed);
        hat_ok = hat_ok && gap <= thresholds::kPhiHatTol;
        points.push_back({{"x", x},
                          {"phi_hat", hat.value},
                          {"argmax_n", hat.argmax_n},
                          {"phi_closed_form", closed},
                          {"gap", gap},
                          {"phase_fraction_gap_bound", bound}});
    }
    r.passed = phi0 == 0.0 && deriv_err <= thresholds::kPhiDerivativeTol && hat_ok;
    r.details = {{"phi_at_0", phi0},
                 {"alpha", aux->alpha()},
                 {"central_difference_at_0", dphi},
                 {"derivative_error", deriv_err},
                 {"derivative_tolerance", thresholds::kPhiDerivativeTol},
                 {"window", {n_min, n_max}},
                 {"phase_fraction_min", fr.f_min},
                 {"phase_fraction_max", fr.f_max},
                 {"points", points},
                 {"phi_hat_tolerance", thresholds::kPhiHatTol}};
    return r;
}

inline CheckResult check_monte_carlo(const ExperimentConfig& cfg, const SampleRun& run) {
    CheckResult r{8, "monte_carlo_localization", false, {}};
    const auto summary = summarize_depths(cfg, run);

    bool means_ok = true;
    nlohmann::ordered_json depths = nlohmann::ordered_json::array();
    for (const auto& d : summary) {
        if (std::find(std::begin(kReportDepths), std::end(kReportDepths), d.depth) == std::end(kReportDepths)) {
            continue;
        }
        // With derivative matching the expected mu-exponent is alpha at every depth.
        const bool ok = std::abs(d.mu_mean - run.alpha) <= d.mu_band;
        means_ok = means_ok && ok;
        depths.push_back({{"depth", d.depth},
                          {"mu_mean", d.mu_mean},
                          {"band", d.mu_band},
                          {"deviation", d.mu_mean - run.alpha},
                          {"within_band", ok}});
    }
    if (depths.empty()) {
        means_ok = false;
    }

    const std::size_t localized = static_cast<std::size_t>(
        std::count(run.verdicts.begin(), run.verdicts.end(), LevelSetVerdict::InBoth));
    const double fraction =
        run.traces.empty() ? 0.0 : static_cast<double>(localized) / static_cast<double>(run.traces.size());
    const bool localized_ok = fraction >= thresholds::kLocalizedFraction;

    bool reconcile_ok = false;
    nlohmann::ordered_json reconcile;
    try {
        const std::vector<double> grid{run.alpha};
        const auto table = build_spectrum(cfg.pair(), grid);
        ReconcileOptions opt;
        opt.tol = cfg.sampling.tol;
        opt.sigmas = kBandSigmas;
        opt.min_localized_fraction = thresholds::kLocalizedFraction;
        const auto rep = reconcile_with_monte_carlo(table, run.traces, cfg.schedule(), opt);
        reconcile_ok = rep.ok() && rep.rows_covered == 1;
        if (!rep.rows.empty()) {
            const auto& row = rep.rows.front();
            reconcile = {{"h_min", row.h_min},
                         {"h_max", row.h_max},
                         {"envelope_depths", row.envelope_depths},
                         {"nu_means", row.nu_means},
                         {"nu_expected", row.nu_expected},
                         {"nu_band", row.nu_band},
                         {"nu_bracket_ok", row.nu_bracket_ok},
                         {"localized_fraction", row.localized_fraction}};
        }
    } catch (const Error& e) {
        reconcile = {{"error", e.what()}};
    }

    r.passed = means_ok && localized_ok && reconcile_ok;
    r.details = {{"paths", run.traces.size()},
                 {"depth", cfg.sampling.depth},
                 {"master_seed", cfg.sampling.seed},
                 {"rng_version", kRngVersion},
                 {"r", run.r},
                 {"r_tilde", run.r_tilde},
                 {"alpha", run.alpha},
                 {"mean_exponents", depths},
                 {"classification_depths", tail_depths(cfg.schedule(), cfg.sampling.depth)},
                 {"tol", cfg.sampling.tol},
                 {"localized", localized},
                 {"localized_fraction", fraction},
                 {"required_fraction", thresholds::kLocalizedFraction},
                 {"reconcile", reconcile},
                 {"runtime_budget_s", thresholds::kSamplingBudget}};
    return r;
}

inline CheckResult check_condition_coverage(const ExperimentConfig& cfg) {
    const auto pair = cfg.pair();
    const auto iv = alpha_interval(pair);
    const std::size_t n = thresholds::kConditionSamples;
    std::size_t covered = 0;
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    std::size_t c3 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double alpha = iv.lo + iv.width() * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const auto c = branch_conditions(alpha, pair);
        covered += c.any() ? 1 : 0;
        c1 += c.c1 ? 1 : 0;
        c2 += c.c2 ? 1 : 0;
        c3 += c.c3 ? 1 : 0;
    }
    CheckResult r{9, "condition_coverage", covered == n, {}};
    r.details = {{"samples", n},
                 {"covered", covered},
                 {"c1_count", c1},
                 {"c2_count", c2},
                 {"c3_count", c3},
                 {"alpha_interval", {iv.lo, iv.hi}}};
    return r;
}

inline CheckResult check_convexity(const ExperimentConfig& cfg, const SpectrumTable& table) {
    const auto pair = cfg.pair();
    const auto mu = cfg.mu();
    const auto grid = detail::q_grid(thresholds::kIdentityQMin, thresholds::kIdentityQMax, thresholds::kIdentityStep);
    const double tol = thresholds::kConvexityTol;

    const double ex_theta = detail::midpoint_excess([&](double q) { return theta(q, pair.p()); }, grid);
    const double ex_theta_tilde = detail::midpoint_excess([&](double q) { return theta(q, pair.p_tilde()); }, grid);
    const double ex_B = detail::midpoint_excess([&](double q) { return B_of_q(q, pair); }, grid);
    double ex_tau = -std::numeric_limits<double>::infinity();
    for (std::size_t n : thresholds::kConvexityDepths) {
        if (n <= cfg.partition.n_max) {
            ex_tau = std::max(ex_tau, detail::midpoint_excess([&](double q) { return tau_hat(mu, q, n); }, grid));
        }
    }

    std::vector<double> alphas;
    std::vector<double> bs;
    std::vector<double> Bs;
    bool ordered = true;
    for (const auto& row : table.rows) {
        alphas.push_back(row.branch.alpha);
        bs.push_back(row.b_star);
        Bs.push_back(row.B_star);
        ordered = ordered && row.b_star <= row.B_star;
    }
    // Concavity on a possibly uneven grid: the middle value must not fall
    // below the chord through its neighbours.
    const auto chord_deficit = [&](const std::vector<double>& v) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            const double t = (alphas[i] - alphas[i - 1]) / (alphas[i + 1] - alphas[i - 1]);
            worst = std::max(worst, (1.0 - t) * v[i - 1] + t * v[i + 1] - v[i]);
        }
        return worst;
    };
    const double def_b = chord_deficit(bs);
    const double def_B = chord_deficit(Bs);

    CheckResult r{10, "convexity_suite",
                  ex_theta <= tol && ex_theta_tilde <= tol && ex_B <= tol && ex_tau <= tol && def_b <= tol &&
                      def_B <= tol && ordered,
                  {}};
    r.details = {{"tolerance", tol},
                 {"theta_midpoint_excess", ex_theta},
                 {"theta_tilde_midpoint_excess", ex_theta_tilde},
                 {"B_midpoint_excess", ex_B},
                 {"tau_hat_midpoint_excess", ex_tau},
                 {"tau_hat_depths", thresholds::kConvexityDepths},
                 {"b_star_concavity_deficit", def_b},
                 {"B_star_concavity_deficit", def_B},
                 {"b_star_le_B_star", ordered}};
    return r;
}

inline CheckResult check_determinism(const ExperimentConfig& cfg) {
    const auto build = [&] {
        Artifacts all = partition_artifacts(cfg);
        all.merge(spectrum_artifacts(cfg));
        all.merge(sample_artifacts(cfg));
        return all;
    };
    const Artifacts first = build();
    const Artifacts second = build();
    nlohmann::ordered_json files = nlohmann::ordered_json::object();
    bool same = first.size() == second.size();
    for (const auto& [name, content] : first) {
        const auto it = second.find(name);
        const bool eq = it != second.end() && it->second == content;
        same = same && eq;
        files[name] = {{"bytes", content.size()}, {"digest", io::fnv1a64_hex(content)}, {"identical", eq}};
    }
    CheckResult r{11, "determinism", same, {}};
    r.details = {{"files", files}};
    return r;
}

// ------------------------------------------------------------------ driver

/// Runs every check; per-check wall time goes to `times` when given.
/// Runtime budgets count toward the verdict of checks 1, 3 and 8.
[[nodiscard]] inline VerifyReport run_verify(const ExperimentConfig& cfg, RuntimeLog* times = nullptr) {
    VerifyReport report;
    const auto timed = [&](double budget, const std::function<CheckResult()>& fn) {
        detail::Stopwatch sw;
        CheckResult r = fn();
        const double s = sw.seconds();
        if (budget > 0.0) {
            const bool within = s < budget;
            r.details["within_budget"] = within;
            r.passed = r.passed && within;
        }
        if (times != nullptr) {
            times->seconds.emplace_back(r.id, s);
        }
        report.checks.push_back(std::move(r));
    };

    timed(thresholds::kOracleBudget, [&] { return check_oracle_equivalence(cfg); });
    timed(0.0, [&] { return check_trivial_anchors(cfg); });
    timed(thresholds::kOscillationBudget, [&] { return check_oscillation(cfg); });
    timed(0.0, [&] { return check_entropy_identity(cfg); });

    SpectrumTable table{cfg.pair(), {}, {}, 0.0, 0.0, 0.0};
    timed(0.0, [&] {
        table = spectrum_table(cfg);
        return check_conjugates(cfg, table);
    });
    timed(0.0, [&] { return check_constraint_solver(cfg); });
    timed(0.0, [&] { return check_phi(cfg); });
    timed(thresholds::kSamplingBudget, [&] { return check_monte_carlo(cfg, run_sampling(cfg)); });
    timed(0.0, [&] { return check_condition_coverage(cfg); });
    timed(0.0, [&] { return check_convexity(cfg, table); });
    timed(0.0, [&] { return check_determinism(cfg); });
    return report;
}

[[nodiscard]] inline std::string verify_json(const ExperimentConfig& cfg, const VerifyReport& report) {
    nlohmann::ordered_json j;
    j["config_hash"] = cfg.hash();
    j["tool_version"] = io::kToolVersion;
    j["all_passed"] = report.all_passed();
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"details", c.details}});
    }
    j["checks"] = checks;
    return j.dump(2) + "\n";
}

} // namespace mfx
