#pragma once

// Closed forms for the two-phase Bernoulli example: the moment functions
// theta(q) = log2(w^q + (1-w)^q) for w = p and w = p~, the separator functions
// b = min and B = max of the two, the auxiliary pair (r, r~) matching the
// exponent alpha in both phases, and the spectrum conditions.
//
// Everything is computed in natural log internally and converted to log2 at
// the return statement.

#include "mfx/error.hpp"
#include "mfx/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mfx {

namespace detail {

inline constexpr double kLn2 = std::numbers::ln2;

/// ln(e^a + e^b) without overflow.
[[nodiscard]] inline double log_add_exp(double a, double b) noexcept {
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// e^a / (e^a + e^b).
[[nodiscard]] inline double logistic_weight(double a, double b) noexcept {
    if (a >= b) {
        return 1.0 / (1.0 + std::exp(b - a));
    }
    const double e = std::exp(a - b);
    return e / (1.0 + e);
}

inline void require_open_unit(double w, const char* what) {
    if (!(w > 0.0 && w < 1.0)) {
        throw PreconditionError(std::string(what) + " must lie in (0, 1)");
    }
}

/// ln((1 - w) / w)
[[nodiscard]] inline double log_odds(double w) noexcept { return std::log1p(-w) - std::log(w); }

} // namespace detail

enum class Branch { Theta, ThetaTilde };

[[nodiscard]] inline double branch_weight(Branch which, const BernoulliPair& pair) noexcept {
    return which == Branch::Theta ? pair.p() : pair.p_tilde();
}

[[nodiscard]] inline double theta(double q, double w) {
    detail::require_open_unit(w, "w");
    // Exact anchors: 2 cylinders per position at q = 0, unit mass at q = 1.
    if (q == 0.0) {
        return 1.0;
    }
    if (q == 1.0) {
        return 0.0;
    }
    return detail::log_add_exp(q * std::log(w), q * std::log1p(-w)) / detail::kLn2;
}

[[nodiscard]] inline double theta_prime(double q, double w) {
    detail::require_open_unit(w, "w");
    const double lw = std::log(w);
    const double l1w = std::log1p(-w);
    const double s = detail::logistic_weight(q * lw, q * l1w);
    return (s * lw + (1.0 - s) * l1w) / detail::kLn2;
}

[[nodiscard]] inline double theta_second(double q, double w) {
    detail::require_open_unit(w, "w");
    const double s = detail::logistic_weight(q * std::log(w), q * std::log1p(-w));
    const double lo = detail::log_odds(w);
    return s * (1.0 - s) * lo * lo / detail::kLn2;
}

/// Binary entropy -r log2 r - (1-r) log2 (1-r).
[[nodiscard]] inline double entropy_h(double r) {
    detail::require_open_unit(r, "r");
    return -(r * std::log(r) + (1.0 - r) * std::log1p(-r)) / detail::kLn2;
}

[[nodiscard]] inline double b_of_q(double q, const BernoulliPair& pair) {
    return std::min(theta(q, pair.p()), theta(q, pair.p_tilde()));
}

[[nodiscard]] inline double B_of_q(double q, const BernoulliPair& pair) {
    return std::max(theta(q, pair.p()), theta(q, pair.p_tilde()));
}

/// alpha = -r log2 w - (1 - r) log2 (1 - w): the mean per-digit exponent of a
/// w-measure seen by an r-distributed digit.
[[nodiscard]] inline double alpha_of_r(double r, double w) {
    detail::require_open_unit(r, "r");
    detail::require_open_unit(w, "w");
    return (r * detail::log_odds(w) - std::log1p(-w)) / detail::kLn2;
}

/// Inverse of alpha_of_r in r.
[[nodiscard]] inline double r_of_alpha(double alpha, double w) {
    detail::require_open_unit(w, "w");
    if (w == 0.5) {
        throw RangeError("alpha_of_r is constant for w = 1/2");
    }
    return (alpha * detail::kLn2 + std::log1p(-w)) / detail::log_odds(w);
}

/// The unique q with -theta'(q; w) = alpha_of_r(r, w).
[[nodiscard]] inline double q_of_r(double r, double w) {
    detail::require_open_unit(r, "r");
    detail::require_open_unit(w, "w");
    if (w == 0.5) {
        throw RangeError("q_of_r is undefined for w = 1/2 (theta is affine)");
    }
    return detail::log_odds(r) / detail::log_odds(w);
}

/// Closed-form inverse of q_of_r: r = 1 / (1 + ((1 - w)/w)^q).
[[nodiscard]] inline double r_of_q(double q, double w) {
    detail::require_open_unit(w, "w");
    return detail::logistic_weight(q * std::log(w), q * std::log1p(-w));
}

struct OpenInterval {
    double lo;
    double hi;

    [[nodiscard]] bool contains(double x) const noexcept { return lo < x && x < hi; }
    [[nodiscard]] double width() const noexcept { return hi - lo; }
};

/// Values of r for which the matched r~ lies in (0, 1).
[[nodiscard]] inline OpenInterval r_window(const BernoulliPair& pair) {
    const double p = pair.p();
    const double pt = pair.p_tilde();
    const double scale = detail::log_odds(p);
    return {(std::log1p(-p) - std::log1p(-pt)) / scale, (std::log1p(-p) - std::log(pt)) / scale};
}

/// (-log2(1 - p~), -log2 p~): the exponents reachable by matched pairs.
[[nodiscard]] inline OpenInterval alpha_interval(const BernoulliPair& pair) {
    return {-std::log1p(-pair.p_tilde()) / detail::kLn2, -std::log2(pair.p_tilde())};
}

/// r ln p + (1-r) ln(1-p) - r~ ln p~ - (1-r~) ln(1-p~), in absolute value.
[[nodiscard]] inline double derivative_matching_residual(double r, double r_tilde, const BernoulliPair& pair) {
    const double p = pair.p();
    const double pt = pair.p_tilde();
    return std::abs(r * std::log(p) + (1.0 - r) * std::log1p(-p) - r_tilde * std::log(pt) -
                    (1.0 - r_tilde) * std::log1p(-pt));
}

inline constexpr double kMatchingTolerance = 1e-12;

/// Parameters (r, r~) of the auxiliary measure nu together with the common
/// exponent alpha they produce.
class AuxiliaryParams {
public:
    /// Validates both invariants: derivative matching and the r window.
    static AuxiliaryParams from(double r, double r_tilde, const BernoulliPair& pair) {
        if (!(r > 0.0 && r < 1.0) || !(r_tilde > 0.0 && r_tilde < 1.0)) {
            throw ValidationError("r and r~ must lie in (0, 1)");
        }
        const double residual = derivative_matching_residual(r, r_tilde, pair);
        if (!(residual <= kMatchingTolerance)) {
            throw ValidationError("r, r~ violate r log p + (1-r) log (1-p) = r~ log p~ + (1-r~) log (1-p~)");
        }
        if (!r_window(pair).contains(r)) {
            throw AdmissibilityError("r outside log((1-p)/(1-p~)) < r log((1-p)/p) < log((1-p)/p~)");
        }
        return AuxiliaryParams(r, r_tilde, alpha_of_r(r, pair.p()));
    }

    [[nodiscard]] double r() const noexcept { return r_; }
    [[nodiscard]] double r_tilde() const noexcept { return r_tilde_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }

private:
    AuxiliaryParams(double r, double r_tilde, double alpha) : r_(r), r_tilde_(r_tilde), alpha_(alpha) {}

    double r_;
    double r_tilde_;
    double alpha_;
};

/// Solves the derivative-matching equation for r~ (it is linear in r~).
[[nodiscard]] inline AuxiliaryParams solve_r_tilde(double r, const BernoulliPair& pair) {
    detail::require_open_unit(r, "r");
    const auto window = r_window(pair);
    if (!window.contains(r)) {
        throw AdmissibilityError("r = " + std::to_string(r) +
                                 " violates log((1-p)/(1-p~)) < r log((1-p)/p) < log((1-p)/p~); "
                                 "admissible r lie in (" +
                                 std::to_string(window.lo) + ", " + std::to_string(window.hi) + ")");
    }
    const double p = pair.p();
    const double pt = pair.p_tilde();
    const double r_tilde =
        (-r * detail::log_odds(p) + std::log1p(-p) - std::log1p(-pt)) / (-detail::log_odds(pt));
    return AuxiliaryParams::from(r, r_tilde, pair);
}

/// |theta(q) - q theta'(q) - h(r(q))| for the chosen branch.
[[nodiscard]] inline double legendre_identity_check(double q, const BernoulliPair& pair, Branch which) {
    const double w = branch_weight(which, pair);
    return std::abs(theta(q, w) - q * theta_prime(q, w) - entropy_h(r_of_q(q, w)));
}

struct BranchConditions {
    bool c1 = false; ///< theta carries b at the matched q (0 < q < 1)
    bool c2 = false; ///< theta~ carries b with q~ < 0
    bool c3 = false; ///< theta~ carries b with q~ > 1

    [[nodiscard]] bool any() const noexcept { return c1 || c2 || c3; }
};

/// -B'_l(0), -B'_r(0), -B'_l(1), -B'_r(1): the kinks of B at q = 0 and q = 1.
struct BEndpoints {
    double minus_Bl0;
    double minus_Br0;
    double minus_Bl1;
    double minus_Br1;
};

[[nodiscard]] inline BEndpoints B_endpoints(const BernoulliPair& pair) {
    const double p = pair.p();
    const double pt = pair.p_tilde();
    const auto inv_sqrt = [](double w) { return -0.5 * (std::log(w) + std::log1p(-w)) / detail::kLn2; };
    const auto inv_self_power = [](double w) {
        return -(w * std::log(w) + (1.0 - w) * std::log1p(-w)) / detail::kLn2;
    };
    return {inv_sqrt(p), inv_sqrt(pt), inv_self_power(pt), inv_self_power(p)};
}

/// Strict inequalities; boundary values of alpha give false.
[[nodiscard]] inline BranchConditions branch_conditions(double alpha, const BernoulliPair& pair) {
    if (!alpha_interval(pair).contains(alpha)) {
        throw RangeError("alpha = " + std::to_string(alpha) + " outside (-log2(1-p~), -log2 p~)");
    }
    const auto e = B_endpoints(pair);
    // e.minus_Br1 = log2 1/(p^p (1-p)^(1-p)), e.minus_Bl0 = log2 1/sqrt(p(1-p)),
    // e.minus_Br0 = log2 1/sqrt(p~(1-p~)), e.minus_Bl1 = log2 1/(p~^p~ (1-p~)^(1-p~)).
    return {e.minus_Br1 < alpha && alpha < e.minus_Bl0, alpha > e.minus_Br0, alpha < e.minus_Bl1};
}

/// True when alpha lies in [-B'_r(0), -B'_l(0)] or [-B'_r(1), -B'_l(1)].
[[nodiscard]] inline bool packing_excluded(double alpha, const BernoulliPair& pair) {
    const auto e = B_endpoints(pair);
    return (e.minus_Br0 <= alpha && alpha <= e.minus_Bl0) || (e.minus_Br1 <= alpha && alpha <= e.minus_Bl1);
}

struct PhiBranches {
    double p_branch;       ///< log2(p^x r + (1-p)^x (1-r))
    double p_tilde_branch; ///< log2(p~^x r~ + (1-p~)^x (1-r~))
};

/// log2(w^q1 u^q2 + (1-w)^q1 (1-u)^q2): one position's factor of a joint
/// level sum over two product measures with digit-0 probabilities w and u.
[[nodiscard]] inline double log2_joint_moment(double q1, double w, double q2, double u) {
    detail::require_open_unit(w, "w");
    detail::require_open_unit(u, "u");
    if ((q1 == 0.0 && q2 == 1.0) || (q1 == 1.0 && q2 == 0.0)) {
        return 0.0;
    }
    if (q1 == 0.0 && q2 == 0.0) {
        return 1.0;
    }
    return detail::log_add_exp(q1 * std::log(w) + q2 * std::log(u), q1 * std::log1p(-w) + q2 * std::log1p(-u)) /
           detail::kLn2;
}

[[nodiscard]] inline PhiBranches phi_branches(double x, const BernoulliPair& pair, const AuxiliaryParams& aux) {
    return {log2_joint_moment(x, pair.p(), 1.0, aux.r()), log2_joint_moment(x, pair.p_tilde(), 1.0, aux.r_tilde())};
}

[[nodiscard]] inline double phi_closed_form(double x, const BernoulliPair& pair, const AuxiliaryParams& aux) {
    const auto b = phi_branches(x, pair, aux);
    return std::max(b.p_branch, b.p_tilde_branch);
}

/// One row of the closed-form correspondence alpha <-> (r, r~) <-> (q, q~).
struct SpectrumBranch {
    double q;
    double q_tilde;
    double alpha;
    double h_r;
    double h_r_tilde;
    double b_value; ///< b(q)
    double B_value; ///< B(q)
};

[[nodiscard]] inline SpectrumBranch spectrum_branch(const AuxiliaryParams& aux, const BernoulliPair& pair) {
    const double q = q_of_r(aux.r(), pair.p());
    return {q,
            q_of_r(aux.r_tilde(), pair.p_tilde()),
            aux.alpha(),
            entropy_h(aux.r()),
            entropy_h(aux.r_tilde()),
            b_of_q(q, pair),
            B_of_q(q, pair)};
}

} // namespace mfx
