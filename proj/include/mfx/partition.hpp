#pragma once

// Coarse partition functions over level-n packings. For a product measure the
// level sum factorizes position by position:
//
//   log2 S_n(q) = log2 sum_{|c| = n} m(c)^q = sum_{j <= n} theta(q; w_j),
//
// so no level is ever enumerated here. tau_hat_n(q) = log2 S_n(q) / n is the
// fixed-scale estimate at delta = 2^-n.

#include "mfx/analytic_spectra.hpp"
#include "mfx/error.hpp"
#include "mfx/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace mfx {

struct LevelStats {
    std::size_t n = 0;
    double q = 0.0;
    double log2_sum = 0.0;
    double tau_hat = 0.0;
    std::size_t a_n = 0; ///< P-phase positions among 1..n
};

struct JointLevelStats {
    std::size_t n = 0;
    double q1 = 0.0;
    double q2 = 0.0;
    double t = 0.0;
    double log2_sum = 0.0;
};

namespace detail {

inline void require_positive_depth(std::size_t n) {
    if (n == 0) {
        throw PreconditionError("level sums need n >= 1");
    }
}

inline void require_window(std::size_t n_min, std::size_t n_max) {
    if (n_min < 1 || n_min >= n_max) {
        throw WindowError("depth window requires 1 <= n_min < n_max (got [" + std::to_string(n_min) + ", " +
                          std::to_string(n_max) + "])");
    }
}

} // namespace detail

/// log2 S_n(q), summed position by position.
[[nodiscard]] inline double level_log2_sum(const OscillatingMeasure& m, double q, std::size_t n) {
    detail::require_positive_depth(n);
    const double theta_p = theta(q, m.weight(Phase::P));
    const double theta_pt = theta(q, m.weight(Phase::PTilde));
    double acc = 0.0;
    for_each_position(m.schedule(), n, [&](std::size_t, Phase ph) { acc += ph == Phase::P ? theta_p : theta_pt; });
    return acc;
}

/// (a_n theta(q) + (n - a_n) theta~(q)) / n, from the phase counts.
[[nodiscard]] inline double tau_hat(const OscillatingMeasure& m, double q, std::size_t n) {
    detail::require_positive_depth(n);
    const double a = static_cast<double>(m.schedule().p_phase_count(n));
    const double nn = static_cast<double>(n);
    return (a * theta(q, m.weight(Phase::P)) + (nn - a) * theta(q, m.weight(Phase::PTilde))) / nn;
}

[[nodiscard]] inline LevelStats level_stats(const OscillatingMeasure& m, double q, std::size_t n) {
    const double s = level_log2_sum(m, q, n);
    return {n, q, s, s / static_cast<double>(n), m.schedule().p_phase_count(n)};
}

/// Estimate at the packing scale lambda = 1/4: radii in (2^-(n+2), 2^-n]
/// admit mixing levels n and n+1. Per level-n cylinder the best choice is
/// either the cylinder or its two children, whose q-moments add up to
/// m(c)^q 2^theta_{n+1}(q); the sup therefore gains max(0, theta_{n+1}(q)).
[[nodiscard]] inline double tau_hat_quarter_scale(const OscillatingMeasure& m, double q, std::size_t n) {
    detail::require_positive_depth(n);
    const double next = theta(q, m.weight_at(n + 1));
    return (level_log2_sum(m, q, n) + std::max(0.0, next)) / static_cast<double>(n);
}

struct Envelope {
    double lim_inf_est = 0.0;
    double lim_sup_est = 0.0;
    std::size_t argmin_n = 0;
    std::size_t argmax_n = 0;

    [[nodiscard]] double width() const noexcept { return lim_sup_est - lim_inf_est; }
};

/// Extremes of tau_hat over n in [n_min, n_max]; the first location wins ties.
[[nodiscard]] inline Envelope subsequence_envelope(const OscillatingMeasure& m, double q, std::size_t n_min,
                                                   std::size_t n_max) {
    detail::require_window(n_min, n_max);
    const double theta_p = theta(q, m.weight(Phase::P));
    const double theta_pt = theta(q, m.weight(Phase::PTilde));
    Envelope env;
    std::size_t a = m.schedule().p_phase_count(n_min - 1);
    bool first = true;
    for_each_position(m.schedule(), n_max, [&](std::size_t n, Phase ph) {
        if (n < n_min) {
            return;
        }
        if (ph == Phase::P) {
            ++a;
        }
        const double nn = static_cast<double>(n);
        const double ad = static_cast<double>(a);
        const double v = (ad * theta_p + (nn - ad) * theta_pt) / nn;
        if (first || v < env.lim_inf_est) {
            env.lim_inf_est = v;
            env.argmin_n = n;
        }
        if (first || v > env.lim_sup_est) {
            env.lim_sup_est = v;
            env.argmax_n = n;
        }
        first = false;
    });
    return env;
}

struct PhaseFractionExtremes {
    double f_min = 0.0;
    double f_max = 0.0;
    std::size_t argmin_n = 0;
    std::size_t argmax_n = 0;
};

/// Extremes of a_n / n over the window.
[[nodiscard]] inline PhaseFractionExtremes phase_fraction_extremes(const PhaseSchedule& schedule, std::size_t n_min,
                                                                   std::size_t n_max) {
    detail::require_window(n_min, n_max);
    PhaseFractionExtremes out;
    bool first = true;
    for (std::size_t n = n_min; n <= n_max; ++n) {
        const double f = static_cast<double>(schedule.p_phase_count(n)) / static_cast<double>(n);
        if (first || f < out.f_min) {
            out.f_min = f;
            out.argmin_n = n;
        }
        if (first || f > out.f_max) {
            out.f_max = f;
            out.argmax_n = n;
        }
        first = false;
    }
    return out;
}

/// log2 sum_{|c| = n} 2^(-n t) mu(c)^q1 nu(c)^q2, factorized per position.
[[nodiscard]] inline double joint_level_log2_sum(const OscillatingMeasure& mu, const OscillatingMeasure& nu,
                                                 double q1, double q2, double t, std::size_t n) {
    detail::require_positive_depth(n);
    if (!(mu.schedule() == nu.schedule())) {
        throw ScheduleMismatchError("joint partition sums need mu and nu on the same schedule");
    }
    const auto term = [&](Phase ph) { return log2_joint_moment(q1, mu.weight(ph), q2, nu.weight(ph)); };
    const double a = static_cast<double>(mu.schedule().p_phase_count(n));
    const double nn = static_cast<double>(n);
    return -nn * t + a * term(Phase::P) + (nn - a) * term(Phase::PTilde);
}

[[nodiscard]] inline JointLevelStats joint_level_stats(const OscillatingMeasure& mu, const OscillatingMeasure& nu,
                                                       double q1, double q2, double t, std::size_t n) {
    return {n, q1, q2, t, joint_level_log2_sum(mu, nu, q1, q2, t, n)};
}

struct PhiHat {
    double value = 0.0;
    std::size_t argmax_n = 0;
};

/// max over n in [n_min, n_max] of joint_level_log2_sum(mu, nu, x, 1, 0, n) / n.
[[nodiscard]] inline PhiHat phi_hat(const OscillatingMeasure& mu, const OscillatingMeasure& nu, double x,
                                    std::size_t n_min, std::size_t n_max) {
    detail::require_window(n_min, n_max);
    PhiHat best;
    for (std::size_t n = n_min; n <= n_max; ++n) {
        const double v = joint_level_log2_sum(mu, nu, x, 1.0, 0.0, n) / static_cast<double>(n);
        if (n == n_min || v > best.value) {
            best = {v, n};
        }
    }
    return best;
}

} // namespace mfx
