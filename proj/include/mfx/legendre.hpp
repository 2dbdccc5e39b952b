#pragma once

// Grid-based convex conjugation f*(alpha) = inf_q (q alpha + f(q)) and
// one-sided / flat derivative estimates.

#include "mfx/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace mfx {

/// Samples of a real function on a strictly increasing grid.
class GridFunction {
public:
    GridFunction() = default;

    GridFunction(std::vector<double> q_grid, std::vector<double> values)
        : q_(std::move(q_grid)), v_(std::move(values)) {
        if (q_.size() != v_.size()) {
            throw ValidationError("grid and values differ in length");
        }
        for (std::size_t i = 0; i < q_.size(); ++i) {
            if (!std::isfinite(q_[i]) || !std::isfinite(v_[i])) {
                throw ValidationError("grid function entries must be finite");
            }
            if (i > 0 && !(q_[i] > q_[i - 1])) {
                throw ValidationError("grid must be strictly increasing");
            }
        }
    }

    /// f on lo, lo + step, ..., hi (the last point is hi up to rounding).
    template <class F>
    static GridFunction sample(F&& f, double lo, double hi, double step) {
        if (!(step > 0.0) || !(hi > lo)) {
            throw ValidationError("sampling needs lo < hi and step > 0");
        }
        const auto count = static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
        std::vector<double> q(count);
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i) {
            q[i] = lo + static_cast<double>(i) * step;
            v[i] = f(q[i]);
        }
        return GridFunction(std::move(q), std::move(v));
    }

    [[nodiscard]] std::size_t size() const noexcept { return q_.size(); }
    [[nodiscard]] bool empty() const noexcept { return q_.empty(); }
    [[nodiscard]] const std::vector<double>& q_grid() const noexcept { return q_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return v_; }

private:
    std::vector<double> q_;
    std::vector<double> v_;
};

struct ConjugateValue {
    double value = 0.0;
    double argmin_q = 0.0;
    /// The infimum is reached only at a grid edge, so the true infimum may be lower.
    bool at_boundary = false;
    /// curvature * step^2 / 8 at the minimizer; infinite when at_boundary.
    double error_estimate = 0.0;
};

[[nodiscard]] inline ConjugateValue legendre_transform(const GridFunction& f, double alpha) {
    if (f.empty()) {
        throw EmptyGridError("legendre_transform on an empty grid");
    }
    const auto& q = f.q_grid();
    const auto& v = f.values();
    const std::size_t n = q.size();
    const auto objective = [&](std::size_t i) { return q[i] * alpha + v[i]; };

    std::size_t best = 0;
    double best_value = objective(0);
    double interior_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double o = objective(i);
        if (o < best_value) {
            best_value = o;
            best = i;
        }
        if (i > 0 && i + 1 < n) {
            interior_min = std::min(interior_min, o);
        }
    }

    ConjugateValue out;
    out.value = best_value;
    out.argmin_q = q[best];
    out.at_boundary = n < 3 || interior_min > best_value;
    if (out.at_boundary) {
        out.error_estimate = std::numeric_limits<double>::infinity();
        return out;
    }
    if (best == 0 || best + 1 == n) {
        // Tied with an interior point; the tie gives no curvature information.
        return out;
    }
    const double hl = q[best] - q[best - 1];
    const double hr = q[best + 1] - q[best];
    const double curvature = 2.0 * ((v[best + 1] - v[best]) / hr - (v[best] - v[best - 1]) / hl) / (hl + hr);
    const double step = std::max(hl, hr);
    out.error_estimate = std::abs(curvature) * step * step / 8.0;
    return out;
}

struct DifferenceOptions {
    double h = 1e-3;
    /// Number of step scales h, h/2, ..., used by the flat (limsup) estimator.
    std::size_t levels = 8;
    /// Domain of f; every stencil point must lie in [lo, hi].
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct OneSidedDerivatives {
    double left;
    double right;
};

struct FlatDerivatives {
    double left_flat;
    double right_flat;
};

namespace detail {

inline void require_stencil(double q, double reach, const DifferenceOptions& opt) {
    if (!(opt.h > 0.0)) {
        throw ValidationError("difference step must be positive");
    }
    if (!(q - reach >= opt.lo && q + reach <= opt.hi && opt.lo < q && q < opt.hi)) {
        throw BoundaryError("difference stencil around q = " + std::to_string(q) + " leaves the domain");
    }
}

/// Richardson extrapolation of a one-sided quotient over steps s, s/2, s/4.
/// direction = +1 for the right quotient, -1 for the left one.
template <class F>
double extrapolated_quotient(const F& f, double q, double s, double direction) {
    const double f0 = f(q);
    const auto quotient = [&](double t) { return (f(q + direction * t) - f0) / (direction * t); };
    const double d1 = quotient(s);
    const double d2 = quotient(s / 2.0);
    const double d3 = quotient(s / 4.0);
    const double r1 = 2.0 * d2 - d1;
    const double r2 = 2.0 * d3 - d2;
    return (4.0 * r2 - r1) / 3.0;
}

} // namespace detail

/// Left and right derivatives of a callable f at q.
template <class F>
[[nodiscard]] OneSidedDerivatives one_sided_derivatives(const F& f, double q, const DifferenceOptions& opt = {}) {
    detail::require_stencil(q, opt.h, opt);
    return {detail::extrapolated_quotient(f, q, opt.h, -1.0), detail::extrapolated_quotient(f, q, opt.h, 1.0)};
}

/// psi_l^flat(q) = limsup_{t -> 0+} (psi(q - t) - psi(q)) / (-t) and the
/// mirrored psi_r^flat. The limsup is taken as the maximum of the extrapolated
/// quotients over the finer half of the scales h 2^-k, k < levels.
template <class F>
[[nodiscard]] FlatDerivatives flat_derivatives(const F& f, double q, const DifferenceOptions& opt = {}) {
    detail::require_stencil(q, opt.h, opt);
    if (opt.levels < 2) {
        throw ValidationError("flat derivatives need at least two step scales");
    }
    FlatDerivatives out{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t k = opt.levels / 2; k < opt.levels; ++k) {
        const double s = std::ldexp(opt.h, -static_cast<int>(k));
        out.left_flat = std::max(out.left_flat, detail::extrapolated_quotient(f, q, s, -1.0));
        out.right_flat = std::max(out.right_flat, detail::extrapolated_quotient(f, q, s, 1.0));
    }
    return out;
}

} // namespace mfx
