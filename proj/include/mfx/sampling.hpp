#pragma once

// Monte-Carlo paths drawn from a product measure and the local exponents
// -log2 m(C_n(x)) / n along them.
//
// RNG contract (version "mfx-rng-1"): per-path seeds are derived from
// (master seed, path index) with the splitmix64 finalizer; each path draws
// from std::mt19937_64 seeded through std::seed_seq with the low and high
// 32-bit halves of its seed, and turns the top 53 bits of each output into a
// uniform in [0, 1). Digit j is 0 iff that uniform is below the digit-0
// probability at j. Both engine and seed_seq are fully specified by the
// standard, so traces are bit-identical across platforms and schedulers.

#include "mfx/error.hpp"
#include "mfx/measures.hpp"
#include "mfx/symbolic_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace mfx {

inline constexpr const char* kRngVersion = "mfx-rng-1";

[[nodiscard]] inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

[[nodiscard]] inline std::uint64_t derive_path_seed(std::uint64_t master_seed, std::uint64_t path_index) noexcept {
    return splitmix64(master_seed ^ splitmix64(path_index));
}

class PathRng {
public:
    explicit PathRng(std::uint64_t seed) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32)};
        engine_.seed(seq);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Draws digits 1..depth independently, digit 0 with the phase weight of m.
[[nodiscard]] inline Path sample_path(const OscillatingMeasure& m, std::size_t depth, std::uint64_t seed,
                                      const DepthLimits& limits = {}) {
    if (depth > limits.max_depth) {
        throw DepthOverflowError("sample depth " + std::to_string(depth) + " exceeds configured maximum " +
                                 std::to_string(limits.max_depth));
    }
    PathRng rng(seed);
    Cylinder digits;
    digits.reserve(depth);
    for_each_position(m.schedule(), depth,
                      [&](std::size_t, Phase ph) { digits.push_back(rng.uniform() < m.weight(ph) ? 0u : 1u); });
    return Path(std::move(digits), seed);
}

struct ExponentTrace {
    std::vector<std::size_t> depths;
    std::vector<double> mu_exponents; ///< -log2 mu(C_n(x)) / n
    std::vector<double> nu_exponents; ///< -log2 nu(C_n(x)) / n
    std::uint64_t seed = 0;
    /// Digit-0 probabilities (r, r~) of the measure x was drawn from.
    double sampled_r = 0.0;
    double sampled_r_tilde = 0.0;
};

/// Exponents of mu and nu along x at the requested depths (increasing, >= 1).
[[nodiscard]] inline ExponentTrace exponent_trace(const Path& x, const OscillatingMeasure& mu,
                                                  const OscillatingMeasure& nu, std::span<const std::size_t> depths) {
    if (!std::is_sorted(depths.begin(), depths.end()) ||
        std::adjacent_find(depths.begin(), depths.end()) != depths.end()) {
        throw PreconditionError("trace depths must be strictly increasing");
    }
    if (!depths.empty() && (depths.front() < 1 || depths.back() > x.length())) {
        throw PreconditionError("trace depths must lie in [1, sampled depth]");
    }
    ExponentTrace tr;
    tr.seed = x.seed().value_or(0);
    tr.sampled_r = nu.weight(Phase::P);
    tr.sampled_r_tilde = nu.weight(Phase::PTilde);
    if (depths.empty()) {
        return tr;
    }
    const std::size_t top = depths.back();
    std::vector<double> log_mu(top + 1, 0.0);
    std::vector<double> log_nu(top + 1, 0.0);
    for_each_position(mu.schedule(), top, [&](std::size_t j, Phase ph) {
        log_mu[j] = log_mu[j - 1] + mu.log2_factor(ph, x.digit(j));
    });
    for_each_position(nu.schedule(), top, [&](std::size_t j, Phase ph) {
        log_nu[j] = log_nu[j - 1] + nu.log2_factor(ph, x.digit(j));
    });
    tr.depths.assign(depths.begin(), depths.end());
    for (std::size_t n : depths) {
        tr.mu_exponents.push_back(-log_mu[n] / static_cast<double>(n));
        tr.nu_exponents.push_back(-log_nu[n] / static_cast<double>(n));
    }
    return tr;
}

/// Traces of `count` paths drawn from nu, path i seeded with derive_path_seed(master, i).
[[nodiscard]] inline std::vector<ExponentTrace> sample_traces(const OscillatingMeasure& mu,
                                                              const OscillatingMeasure& nu, std::size_t count,
                                                              std::size_t depth, std::uint64_t master_seed,
                                                              std::span<const std::size_t> depths,
                                                              const DepthLimits& limits = {}) {
    std::vector<ExponentTrace> traces;
    traces.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Path x = sample_path(nu, depth, derive_path_seed(master_seed, i), limits);
        traces.push_back(exponent_trace(x, mu, nu, depths));
    }
    return traces;
}

struct ExponentMoments {
    double mean = 0.0; ///< E[-log2 m(C_n(x))] / n
    double sd = 0.0;   ///< standard deviation of the exponent at depth n
};

/// Exact mean and spread of the exponent of `evaluated` at depth n along a
/// path drawn from `sampled`; digits are independent so variances add.
[[nodiscard]] inline ExponentMoments exponent_moments(const OscillatingMeasure& evaluated,
                                                      const OscillatingMeasure& sampled, std::size_t n) {
    if (n == 0) {
        throw PreconditionError("exponent moments need n >= 1");
    }
    double mean = 0.0;
    double var = 0.0;
    for (Phase ph : {Phase::P, Phase::PTilde}) {
        const double u = sampled.weight(ph);
        const double a0 = -evaluated.log2_factor(ph, 0);
        const double a1 = -evaluated.log2_factor(ph, 1);
        const std::size_t count = ph == Phase::P ? sampled.schedule().p_phase_count(n)
                                                 : n - sampled.schedule().p_phase_count(n);
        mean += static_cast<double>(count) * (u * a0 + (1.0 - u) * a1);
        var += static_cast<double>(count) * u * (1.0 - u) * (a0 - a1) * (a0 - a1);
    }
    const double nn = static_cast<double>(n);
    return {mean / nn, std::sqrt(var) / nn};
}

/// Block-end depths inside the phase block that contains `depth`, or {depth}
/// when that block has not ended yet. Used as the tail window of a trace.
[[nodiscard]] inline std::vector<std::size_t> tail_depths(const PhaseSchedule& schedule, std::size_t depth) {
    const std::size_t start = schedule.block_start(depth);
    std::vector<std::size_t> out;
    for (std::size_t e : schedule.block_ends(depth)) {
        if (e >= start) {
            out.push_back(e);
        }
    }
    if (out.empty()) {
        out.push_back(depth);
    }
    return out;
}

enum class LevelSetVerdict { InLower, InUpper, InBoth, Undetermined };

[[nodiscard]] inline const char* to_string(LevelSetVerdict v) noexcept {
    switch (v) {
    case LevelSetVerdict::InLower: return "in_lower";
    case LevelSetVerdict::InUpper: return "in_upper";
    case LevelSetVerdict::InBoth: return "in_both";
    case LevelSetVerdict::Undetermined: return "undetermined";
    }
    return "undetermined";
}

/// Membership of x in X_lower(alpha) (liminf >= alpha), X_upper(beta)
/// (limsup <= beta) or both, judged from the mu-exponent envelope over the
/// window depths (all trace depths when the window is empty).
[[nodiscard]] inline LevelSetVerdict level_set_classifier(const ExponentTrace& trace, double alpha, double beta,
                                                          double tol, std::span<const std::size_t> window = {}) {
    if (alpha > beta) {
        throw PreconditionError("level set classification needs alpha <= beta");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    for (std::size_t i = 0; i < trace.depths.size(); ++i) {
        if (!window.empty() && std::find(window.begin(), window.end(), trace.depths[i]) == window.end()) {
            continue;
        }
        lo = std::min(lo, trace.mu_exponents[i]);
        hi = std::max(hi, trace.mu_exponents[i]);
        ++used;
    }
    if (used == 0) {
        throw PreconditionError("no trace depth falls in the classification window");
    }
    const bool lower = lo >= alpha - tol;
    const bool upper = hi <= beta + tol;
    if (lower && upper) {
        return LevelSetVerdict::InBoth;
    }
    if (lower) {
        return LevelSetVerdict::InLower;
    }
    if (upper) {
        return LevelSetVerdict::InUpper;
    }
    return LevelSetVerdict::Undetermined;
}

} // namespace mfx
