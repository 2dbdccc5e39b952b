#pragma once

// Brute-force references for the factorized partition sums. They enumerate
// every cylinder of a level (n <= 20) and evaluate each mass from the product
// formula, sharing nothing with the per-position factorization they check.

#include "mfx/measures.hpp"
#include "mfx/symbolic_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace mfx::oracle {

/// log2 of sum* m(c)^q over the 2^n cylinders of depth n; zero-mass
/// cylinders are skipped as in the starred sum.
[[nodiscard]] inline double enumerated_level_log2_sum(const OscillatingMeasure& m, double q, std::size_t n) {
    double sum = 0.0;
    for (const Cylinder& c : level_packing(n)) {
        const double mass = std::exp2(log2_mass(m, c));
        if (mass == 0.0) {
            continue;
        }
        sum += std::pow(mass, q);
    }
    return std::log2(sum);
}

/// log2 of sum 2^(-n t) mu(c)^q1 nu(c)^q2 over the cylinders of depth n.
[[nodiscard]] inline double enumerated_joint_log2_sum(const OscillatingMeasure& mu, const OscillatingMeasure& nu,
                                                      double q1, double q2, double t, std::size_t n) {
    double sum = 0.0;
    for (const Cylinder& c : level_packing(n)) {
        const double a = std::exp2(log2_mass(mu, c));
        const double b = std::exp2(log2_mass(nu, c));
        if (a == 0.0 || b == 0.0) {
            continue;
        }
        sum += std::pow(a, q1) * std::pow(b, q2);
    }
    return std::log2(sum) - static_cast<double>(n) * t;
}

/// Best packing with radii in (2^-(n+2), 2^-n]: each level-n cylinder is kept
/// or replaced by its two children, whichever carries more q-moment.
[[nodiscard]] inline double enumerated_quarter_scale_log2_sum(const OscillatingMeasure& m, double q, std::size_t n) {
    double sum = 0.0;
    for (const Cylinder& c : level_packing(n)) {
        const double self = std::pow(std::exp2(log2_mass(m, c)), q);
        const double children =
            std::pow(std::exp2(log2_mass(m, c.child(0))), q) + std::pow(std::exp2(log2_mass(m, c.child(1))), q);
        sum += std::max(self, children);
    }
    return std::log2(sum);
}

} // namespace mfx::oracle
