#pragma once

// Oscillating Bernoulli product measures on the dyadic space. The digit bias at
// position j is w_P or w_P~ according to the phase block containing j; the
// mass of [e_1 ... e_n] is the product of w (digit 0) or 1 - w (digit 1).
// Masses are handled as log2 values throughout: at depth 5040 they underflow.

#include "mfx/error.hpp"
#include "mfx/symbolic_space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mfx {

enum class Phase { P, PTilde };

[[nodiscard]] inline const char* to_string(Phase ph) noexcept {
    return ph == Phase::P ? "P_PHASE" : "PTILDE_PHASE";
}

/// Switch times 1 = t_0 < t_1 < ... < t_K. Interval [t_i, t_{i+1}) is a
/// P~-phase block for even i and a P-phase block for odd i; positions
/// j >= t_K belong to the open-ended interval K.
class PhaseSchedule {
public:
    PhaseSchedule() : times_{1} {}

    explicit PhaseSchedule(std::vector<std::size_t> switch_times) : times_(std::move(switch_times)) {
        if (times_.empty() || times_.front() != 1) {
            throw ValidationError("schedule must start at t_0 = 1 (1 = t_0 < t_1 < ...)");
        }
        for (std::size_t i = 1; i < times_.size(); ++i) {
            if (times_[i] <= times_[i - 1]) {
                throw ValidationError("schedule must be strictly increasing (1 = t_0 < t_1 < ...): t_" +
                                      std::to_string(i) + " = " + std::to_string(times_[i]) +
                                      " <= t_" + std::to_string(i - 1) + " = " +
                                      std::to_string(times_[i - 1]));
            }
        }
    }

    [[nodiscard]] const std::vector<std::size_t>& times() const noexcept { return times_; }

    /// Index i of the interval [t_i, t_{i+1}) containing position j >= 1.
    [[nodiscard]] std::size_t interval_index(std::size_t j) const {
        if (j == 0) {
            throw PreconditionError("positions are 1-based");
        }
        const auto it = std::upper_bound(times_.begin(), times_.end(), j);
        return static_cast<std::size_t>(it - times_.begin()) - 1;
    }

    [[nodiscard]] static Phase phase_of_interval(std::size_t i) noexcept {
        return i % 2 == 0 ? Phase::PTilde : Phase::P;
    }

    [[nodiscard]] Phase phase(std::size_t j) const { return phase_of_interval(interval_index(j)); }

    /// a_n: the number of P-phase positions among 1..n.
    [[nodiscard]] std::size_t p_phase_count(std::size_t n) const noexcept {
        std::size_t count = 0;
        for (std::size_t i = 1; i < times_.size() && times_[i] <= n; i += 2) {
            const std::size_t hi = i + 1 < times_.size() ? std::min(times_[i + 1] - 1, n) : n;
            count += hi - times_[i] + 1;
        }
        return count;
    }

    /// Depths t_i - 1 (i >= 1) not exceeding depth: the last position of each
    /// completed phase block.
    [[nodiscard]] std::vector<std::size_t> block_ends(std::size_t depth) const {
        std::vector<std::size_t> ends;
        for (std::size_t i = 1; i < times_.size(); ++i) {
            const std::size_t e = times_[i] - 1;
            if (e >= 1 && e <= depth) {
                ends.push_back(e);
            }
        }
        return ends;
    }

    /// First position of the phase block that contains position n.
    [[nodiscard]] std::size_t block_start(std::size_t n) const { return times_[interval_index(n)]; }

    /// Diagnostic for the asymptotic requirement t_i / t_{i+1} -> 0: true when
    /// the ratios decrease strictly over the supplied prefix.
    [[nodiscard]] bool vanishing_ratio() const noexcept {
        double prev = 2.0;
        for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
            const double ratio = static_cast<double>(times_[i]) / static_cast<double>(times_[i + 1]);
            if (!(ratio < prev)) {
                return false;
            }
            prev = ratio;
        }
        return true;
    }

    friend bool operator==(const PhaseSchedule&, const PhaseSchedule&) = default;

private:
    std::vector<std::size_t> times_;
};

[[nodiscard]] inline Phase phase(std::size_t j, const PhaseSchedule& schedule) { return schedule.phase(j); }

/// 0 < p < p~ <= 1/2.
class BernoulliPair {
public:
    BernoulliPair(double p, double p_tilde) : p_(p), p_tilde_(p_tilde) {
        if (!(p > 0.0)) {
            throw ValidationError("BernoulliPair requires 0 < p (got p = " + num(p) + ")");
        }
        if (!(p_tilde <= 0.5)) {
            throw ValidationError("BernoulliPair requires p~ <= 1/2 (got p~ = " + num(p_tilde) + ")");
        }
        if (!(p < p_tilde)) {
            throw ValidationError("BernoulliPair requires p < p~ (got p = " + num(p) +
                                  ", p~ = " + num(p_tilde) + ")");
        }
    }

    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] double p_tilde() const noexcept { return p_tilde_; }

    friend bool operator==(const BernoulliPair&, const BernoulliPair&) = default;

private:
    static std::string num(double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    }

    double p_;
    double p_tilde_;
};

/// Product measure with digit-0 probability w_P in P-phase blocks and w_P~ in
/// P~-phase blocks. Serves both for mu (p, p~) and the auxiliary nu (r, r~).
class OscillatingMeasure {
public:
    OscillatingMeasure(double p_phase_weight, double ptilde_phase_weight, PhaseSchedule schedule)
        : weights_{p_phase_weight, ptilde_phase_weight}, schedule_(std::move(schedule)) {
        for (double w : weights_) {
            if (!(w > 0.0 && w < 1.0)) {
                throw ValidationError("phase weights must lie in (0, 1)");
            }
        }
        for (std::size_t k = 0; k < 2; ++k) {
            log2_digit_[k][0] = std::log2(weights_[k]);
            log2_digit_[k][1] = std::log1p(-weights_[k]) / std::numbers::ln2;
        }
    }

    OscillatingMeasure(const BernoulliPair& pair, PhaseSchedule schedule)
        : OscillatingMeasure(pair.p(), pair.p_tilde(), std::move(schedule)) {}

    [[nodiscard]] const PhaseSchedule& schedule() const noexcept { return schedule_; }

    /// Digit-0 probability used during the given phase.
    [[nodiscard]] double weight(Phase ph) const noexcept { return weights_[index(ph)]; }

    [[nodiscard]] double weight_at(std::size_t j) const { return weight(schedule_.phase(j)); }

    /// log2 of the factor contributed by digit d at a position in phase ph.
    [[nodiscard]] double log2_factor(Phase ph, unsigned d) const noexcept {
        return log2_digit_[index(ph)][d != 0 ? 1 : 0];
    }

    friend bool operator==(const OscillatingMeasure& a, const OscillatingMeasure& b) {
        return a.weights_ == b.weights_ && a.schedule_ == b.schedule_;
    }

private:
    static std::size_t index(Phase ph) noexcept { return ph == Phase::P ? 0 : 1; }

    std::array<double, 2> weights_;
    std::array<std::array<double, 2>, 2> log2_digit_{};
    PhaseSchedule schedule_;
};

/// Calls fn(j, phase) for j = 1..n, walking the schedule blocks in order.
template <class Fn>
void for_each_position(const PhaseSchedule& schedule, std::size_t n, Fn&& fn) {
    const auto& t = schedule.times();
    std::size_t i = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        while (i + 1 < t.size() && j >= t[i + 1]) {
            ++i;
        }
        fn(j, PhaseSchedule::phase_of_interval(i));
    }
}

/// log2 mu([e_1 ... e_n]).
[[nodiscard]] inline double log2_mass(const OscillatingMeasure& m, const Cylinder& c) {
    double acc = 0.0;
    for_each_position(m.schedule(), c.depth(),
                      [&](std::size_t j, Phase ph) { acc += m.log2_factor(ph, c.digit(j)); });
    return acc;
}

struct AdditivityViolation {
    std::string cylinder;
    double relative_error;
};

struct AdditivityReport {
    std::size_t max_depth = 0;
    std::size_t cylinders_checked = 0;
    std::vector<AdditivityViolation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Checks |m(c) - m(c0) - m(c1)| <= 1e-12 m(c) for every cylinder of depth
/// below max_depth (so every child has depth <= max_depth).
[[nodiscard]] inline AdditivityReport check_additivity(const OscillatingMeasure& m, std::size_t max_depth,
                                                       const DepthLimits& limits = {}) {
    if (max_depth > limits.max_enumeration_depth) {
        throw DepthOverflowError("additivity check depth " + std::to_string(max_depth) +
                                 " exceeds enumeration cap " +
                                 std::to_string(limits.max_enumeration_depth));
    }
    AdditivityReport report;
    report.max_depth = max_depth;
    for (std::size_t n = 0; n < max_depth; ++n) {
        for (const Cylinder& c : level_packing(n, limits)) {
            const double parent = std::exp2(log2_mass(m, c));
            const double left = std::exp2(log2_mass(m, c.child(0)));
            const double right = std::exp2(log2_mass(m, c.child(1)));
            const double rel = std::abs(parent - left - right) / parent;
            ++report.cylinders_checked;
            if (!(rel <= 1e-12)) {
                report.violations.push_back({c.to_string(), rel});
            }
        }
    }
    return report;
}

} // namespace mfx
