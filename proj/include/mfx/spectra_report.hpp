#pragma once

// Spectrum tables for the two-phase example: for each exponent alpha the
// Hausdorff spectrum b*(alpha) = inf_q b(q) + alpha q and the packing spectrum
// B*(alpha) = inf_q B(q) + alpha q, computed by grid conjugation and compared
// with min / max {h(r), h(r~)} from the matched auxiliary pair.

#include "mfx/analytic_spectra.hpp"
#include "mfx/error.hpp"
#include "mfx/legendre.hpp"
#include "mfx/measures.hpp"
#include "mfx/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mfx {

struct SpectrumRow {
    SpectrumBranch branch;
    double r = 0.0;
    double r_tilde = 0.0;
    double b_star = 0.0;
    double B_star = 0.0;
    double b_star_error = 0.0; ///< grid error estimate of b_star
    double B_star_error = 0.0;
    bool packing_valid = false;
    BranchConditions conditions;
};

struct DroppedRow {
    double alpha;
    std::string reason;
};

struct SpectrumOptions {
    double q_min = -8.0;
    double q_max = 8.0;
    double q_step = 1e-3;
    /// Widen [q_min, q_max] so the matched q and q~ of every row sit at least
    /// q_margin inside the grid (q~ diverges as alpha nears the interval ends).
    bool extend_q_range = true;
    double q_margin = 1.0;
};

struct SpectrumTable {
    BernoulliPair pair;
    std::vector<SpectrumRow> rows;
    std::vector<DroppedRow> dropped;
    double q_min = 0.0; ///< grid actually used
    double q_max = 0.0;
    double q_step = 0.0;
};

/// count equally spaced exponents covering the closed interval
/// [-log2(1-p~), -log2 p~]; the two endpoints are dropped by build_spectrum.
[[nodiscard]] inline std::vector<double> uniform_alpha_grid(const BernoulliPair& pair, std::size_t count) {
    if (count < 2) {
        throw ValidationError("alpha grid needs at least two points");
    }
    const auto iv = alpha_interval(pair);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

[[nodiscard]] inline SpectrumTable build_spectrum(const BernoulliPair& pair, std::span<const double> alpha_grid,
                                                  const SpectrumOptions& opt = {}) {
    const auto iv = alpha_interval(pair);
    SpectrumTable table{pair, {}, {}, opt.q_min, opt.q_max, opt.q_step};

    std::vector<double> alphas(alpha_grid.begin(), alpha_grid.end());
    std::sort(alphas.begin(), alphas.end());

    struct Pending {
        AuxiliaryParams aux;
        SpectrumBranch branch;
    };
    std::vector<Pending> pending;
    for (double alpha : alphas) {
        if (!(alpha >= iv.lo && alpha <= iv.hi)) {
            throw RangeError("alpha = " + std::to_string(alpha) + " outside (-log2(1-p~), -log2 p~)");
        }
        try {
            if (!iv.contains(alpha)) {
                throw AdmissibilityError("alpha on the boundary of the open interval");
            }
            const auto aux = solve_r_tilde(r_of_alpha(alpha, pair.p()), pair);
            pending.push_back({aux, spectrum_branch(aux, pair)});
        } catch (const Error& e) {
            table.dropped.push_back({alpha, e.what()});
        }
    }

    if (opt.extend_q_range) {
        for (const auto& p : pending) {
            const double reach = std::max(std::abs(p.branch.q), std::abs(p.branch.q_tilde)) + opt.q_margin;
            table.q_min = std::min(table.q_min, -std::ceil(reach));
            table.q_max = std::max(table.q_max, std::ceil(reach));
        }
    }
    const auto b_grid =
        GridFunction::sample([&](double q) { return b_of_q(q, pair); }, table.q_min, table.q_max, table.q_step);
    const auto B_grid =
        GridFunction::sample([&](double q) { return B_of_q(q, pair); }, table.q_min, table.q_max, table.q_step);

    for (const auto& p : pending) {
        const double alpha = p.aux.alpha();
        const auto bs = legendre_transform(b_grid, alpha);
        const auto Bs = legendre_transform(B_grid, alpha);
        SpectrumRow row;
        row.branch = p.branch;
        row.r = p.aux.r();
        row.r_tilde = p.aux.r_tilde();
        row.b_star = bs.value;
        row.B_star = Bs.value;
        row.b_star_error = bs.error_estimate;
        row.B_star_error = Bs.error_estimate;
        row.packing_valid = !packing_excluded(alpha, pair);
        row.conditions = branch_conditions(alpha, pair);
        table.rows.push_back(row);
    }
    return table;
}

struct ReconcileOptions {
    double tol = 0.03;
    double sigmas = 3.0;
    double min_localized_fraction = 0.95;
    /// Tolerance for matching a trace's (r, r~) to a row.
    double match_tol = 1e-9;
};

struct ReconcileRow {
    double alpha = 0.0;
    std::size_t trace_count = 0;
    std::size_t localized = 0;
    double localized_fraction = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
    /// Path-averaged nu-exponent at the last two block ends (one per phase).
    std::vector<std::size_t> envelope_depths;
    std::vector<double> nu_means;
    std::vector<double> nu_expected;
    std::vector<double> nu_band; ///< sigmas * standard error of each mean
    bool localization_ok = false;
    bool nu_bracket_ok = false;
};

struct ReconcileReport {
    std::size_t rows_covered = 0;
    double coverage = 0.0; ///< fraction of table rows with at least one trace
    std::vector<ReconcileRow> rows;

    [[nodiscard]] bool ok() const noexcept {
        return std::all_of(rows.begin(), rows.end(),
                           [](const ReconcileRow& r) { return r.localization_ok && r.nu_bracket_ok; });
    }
};

/// The last two block-end depths not exceeding depth.
[[nodiscard]] inline std::vector<std::size_t> envelope_depths(const PhaseSchedule& schedule, std::size_t depth) {
    auto ends = schedule.block_ends(depth);
    if (ends.size() > 2) {
        ends.erase(ends.begin(), ends.end() - 2);
    }
    return ends;
}

/// Checks traces drawn from the nu matched to each row: mu-exponents localize
/// at alpha on the tail block ends, and the nu-exponent block-end envelope
/// stays within [min h, max h] up to the CLT band.
[[nodiscard]] inline ReconcileReport reconcile_with_monte_carlo(const SpectrumTable& table,
                                                                std::span<const ExponentTrace> traces,
                                                                const PhaseSchedule& schedule,
                                                                const ReconcileOptions& opt = {}) {
    ReconcileReport report;
    std::vector<std::vector<const ExponentTrace*>> by_row(table.rows.size());
    for (const auto& tr : traces) {
        bool matched = false;
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            if (std::abs(tr.sampled_r - table.rows[i].r) <= opt.match_tol &&
                std::abs(tr.sampled_r_tilde - table.rows[i].r_tilde) <= opt.match_tol) {
                by_row[i].push_back(&tr);
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw MismatchError("trace seed " + std::to_string(tr.seed) +
                                " was sampled from (r, r~) matching no spectrum row");
        }
    }

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& group = by_row[i];
        if (group.empty()) {
            continue;
        }
        const auto& row = table.rows[i];
        const OscillatingMeasure nu(row.r, row.r_tilde, schedule);
        ReconcileRow out;
        out.alpha = row.branch.alpha;
        out.trace_count = group.size();
        out.h_min = std::min(row.branch.h_r, row.branch.h_r_tilde);
        out.h_max = std::max(row.branch.h_r, row.branch.h_r_tilde);

        for (const ExponentTrace* tr : group) {
            if (tr->depths.empty()) {
                continue;
            }
            const auto window = tail_depths(schedule, tr->depths.back());
            if (level_set_classifier(*tr, row.branch.alpha, row.branch.alpha, opt.tol, window) ==
                LevelSetVerdict::InBoth) {
                ++out.localized;
            }
        }
        out.localized_fraction = static_cast<double>(out.localized) / static_cast<double>(group.size());
        out.localization_ok = out.localized_fraction >= opt.min_localized_fraction;

        const std::size_t top = group.front()->depths.empty() ? 0 : group.front()->depths.back();
        out.nu_bracket_ok = true;
        for (std::size_t d : envelope_depths(schedule, top)) {
            double sum = 0.0;
            std::size_t count = 0;
            for (const ExponentTrace* tr : group) {
                const auto it = std::find(tr->depths.begin(), tr->depths.end(), d);
                if (it != tr->depths.end()) {
                    sum += tr->nu_exponents[static_cast<std::size_t>(it - tr->depths.begin())];
                    ++count;
                }
            }
            if (count == 0) {
                continue;
            }
            const auto moments = exponent_moments(nu, nu, d);
            const double mean = sum / static_cast<double>(count);
            const double band = opt.sigmas * moments.sd / std::sqrt(static_cast<double>(count));
            out.envelope_depths.push_back(d);
            out.nu_means.push_back(mean);
            out.nu_expected.push_back(moments.mean);
            out.nu_band.push_back(band);
            const bool bracketed = mean >= out.h_min - band && mean <= out.h_max + band;
            const bool on_target = std::abs(mean - moments.mean) <= band;
            out.nu_bracket_ok = out.nu_bracket_ok && bracketed && on_target;
        }
        if (out.envelope_depths.empty()) {
            out.nu_bracket_ok = false;
        }
        report.rows.push_back(std::move(out));
        ++report.rows_covered;
    }
    report.coverage = table.rows.empty()
                          ? 0.0
                          : static_cast<double>(report.rows_covered) / static_cast<double>(table.rows.size());
    return report;
}

} // namespace mfx
