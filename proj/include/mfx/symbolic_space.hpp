#pragma once

// The dyadic symbolic space {0,1}^N*: finite words (cylinders), points given
// by digit streams, and level-n packings. A cylinder of depth n is the ball of
// diameter 2^-n around any of its points.

#include "mfx/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfx {

inline constexpr std::size_t kDefaultMaxDepth = 6000;
inline constexpr std::size_t kMaxEnumerationDepth = 20;

struct DepthLimits {
    std::size_t max_depth = kDefaultMaxDepth;
    /// 2^n blowup: level packings are only materialized up to this depth.
    std::size_t max_enumeration_depth = kMaxEnumerationDepth;
};

/// A finite binary word [e_1 e_2 ... e_n], stored packed. Positions are 1-based.
class Cylinder {
public:
    Cylinder() = default;

    static Cylinder from_string(std::string_view digits) {
        Cylinder c;
        c.reserve(digits.size());
        for (char ch : digits) {
            if (ch != '0' && ch != '1') {
                throw ValidationError("cylinder digits must be '0' or '1', got '" +
                                      std::string(1, ch) + "'");
            }
            c.push_back(ch == '1' ? 1 : 0);
        }
        return c;
    }

    /// The depth-n cylinder whose digits are the binary expansion of index,
    /// most significant digit first (lexicographic order of level n).
    static Cylinder from_index(std::uint64_t index, std::size_t depth) {
        if (depth > 64) {
            throw DepthOverflowError("from_index supports depth <= 64");
        }
        Cylinder c;
        c.reserve(depth);
        for (std::size_t k = depth; k-- > 0;) {
            c.push_back(static_cast<unsigned>((index >> k) & 1u));
        }
        return c;
    }

    [[nodiscard]] std::size_t depth() const noexcept { return depth_; }
    [[nodiscard]] bool is_root() const noexcept { return depth_ == 0; }

    /// Digit e_j for 1 <= j <= depth().
    [[nodiscard]] unsigned digit(std::size_t j) const {
        if (j == 0 || j > depth_) {
            throw std::out_of_range("cylinder digit position out of range");
        }
        const std::size_t bit = j - 1;
        return static_cast<unsigned>((words_[bit / 64] >> (bit % 64)) & 1u);
    }

    [[nodiscard]] Cylinder child(unsigned d) const {
        Cylinder c = *this;
        c.push_back(d);
        return c;
    }

    /// The first n digits.
    [[nodiscard]] Cylinder prefix(std::size_t n) const {
        if (n > depth_) {
            throw DepthOverflowError("prefix length " + std::to_string(n) +
                                     " exceeds cylinder depth " + std::to_string(depth_));
        }
        Cylinder c;
        c.depth_ = n;
        c.words_.assign(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>((n + 63) / 64));
        if (n % 64 != 0) {
            c.words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
        }
        return c;
    }

    [[nodiscard]] bool is_prefix_of(const Cylinder& other) const {
        return depth_ <= other.depth_ && other.prefix(depth_) == *this;
    }

    /// Number of 1 digits.
    [[nodiscard]] std::size_t count_ones() const noexcept {
        std::size_t n = 0;
        for (auto w : words_) {
            n += static_cast<std::size_t>(std::popcount(w));
        }
        return n;
    }

    /// Text form: the digit string, empty for the root.
    [[nodiscard]] std::string to_string() const {
        std::string s;
        s.reserve(depth_);
        for (std::size_t j = 1; j <= depth_; ++j) {
            s.push_back(digit(j) ? '1' : '0');
        }
        return s;
    }

    void reserve(std::size_t depth) { words_.reserve((depth + 63) / 64); }

    void push_back(unsigned d) {
        if (depth_ % 64 == 0) {
            words_.push_back(0);
        }
        if (d != 0) {
            words_.back() |= std::uint64_t{1} << (depth_ % 64);
        }
        ++depth_;
    }

    [[nodiscard]] const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    friend bool operator==(const Cylinder&, const Cylinder&) = default;

private:
    // Bits past depth_ in the last word are always zero.
    std::vector<std::uint64_t> words_;
    std::size_t depth_ = 0;
};

/// 2^-depth. Depths past the double exponent range throw; use log2_diameter there.
[[nodiscard]] inline double diameter(const Cylinder& c) {
    if (c.depth() > 1074) {
        throw DepthOverflowError("diameter 2^-" + std::to_string(c.depth()) +
                                 " is not representable; use log2_diameter");
    }
    return std::ldexp(1.0, -static_cast<int>(c.depth()));
}

[[nodiscard]] inline double log2_diameter(const Cylinder& c) noexcept {
    return -static_cast<double>(c.depth());
}

/// Depth of the cylinder identified with the ball of radius r: ceil(-log2 r).
[[nodiscard]] inline std::size_t ball_depth(double radius) {
    if (!(radius > 0.0)) {
        throw ValidationError("ball radius must be positive");
    }
    if (radius >= 1.0) {
        return 0;
    }
    return static_cast<std::size_t>(std::ceil(-std::log2(radius)));
}

/// The 2^n cylinders of depth n in lexicographic order: the maximal packing of
/// the space by balls with 2^-(n+1) < r <= 2^-n.
class LevelPacking {
public:
    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = Cylinder;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = Cylinder;

        iterator() = default;
        iterator(std::uint64_t index, std::size_t depth) : index_(index), depth_(depth) {}

        Cylinder operator*() const { return Cylinder::from_index(index_, depth_); }
        iterator& operator++() {
            ++index_;
            return *this;
        }
        iterator operator++(int) {
            auto tmp = *this;
            ++index_;
            return tmp;
        }
        friend bool operator==(const iterator&, const iterator&) = default;

    private:
        std::uint64_t index_ = 0;
        std::size_t depth_ = 0;
    };

    explicit LevelPacking(std::size_t n) : n_(n) {}

    [[nodiscard]] std::size_t depth() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t size() const noexcept { return std::uint64_t{1} << n_; }
    [[nodiscard]] iterator begin() const { return {0, n_}; }
    [[nodiscard]] iterator end() const { return {size(), n_}; }

private:
    std::size_t n_;
};

[[nodiscard]] inline LevelPacking level_packing(std::size_t n, const DepthLimits& limits = {}) {
    if (n > limits.max_enumeration_depth) {
        throw DepthOverflowError("level packing depth " + std::to_string(n) +
                                 " exceeds enumeration cap " +
                                 std::to_string(limits.max_enumeration_depth));
    }
    return LevelPacking(n);
}

/// A point x of the space, materialized up to a finite length. Sampled paths
/// remember the seed they were drawn with.
class Path {
public:
    Path() = default;
    explicit Path(Cylinder digits, std::optional<std::uint64_t> seed = std::nullopt)
        : digits_(std::move(digits)), seed_(seed) {}

    static Path from_digits(std::string_view digits) { return Path(Cylinder::from_string(digits)); }

    static Path constant(unsigned d, std::size_t length) {
        Cylinder c;
        c.reserve(length);
        for (std::size_t j = 0; j < length; ++j) {
            c.push_back(d);
        }
        return Path(std::move(c));
    }

    /// The pattern repeated until length digits are produced.
    static Path periodic(std::string_view pattern, std::size_t length) {
        if (pattern.empty()) {
            throw ValidationError("periodic path needs a non-empty pattern");
        }
        const Cylinder unit = Cylinder::from_string(pattern);
        Cylinder c;
        c.reserve(length);
        for (std::size_t j = 0; j < length; ++j) {
            c.push_back(unit.digit(j % unit.depth() + 1));
        }
        return Path(std::move(c));
    }

    [[nodiscard]] std::size_t length() const noexcept { return digits_.depth(); }
    [[nodiscard]] unsigned digit(std::size_t j) const { return digits_.digit(j); }
    [[nodiscard]] const Cylinder& digits() const noexcept { return digits_; }
    [[nodiscard]] std::optional<std::uint64_t> seed() const noexcept { return seed_; }

private:
    Cylinder digits_;
    std::optional<std::uint64_t> seed_;
};

/// The depth-n cylinder containing x, i.e. the ball B(x, 2^-n).
[[nodiscard]] inline Cylinder prefix(const Path& x, std::size_t n, const DepthLimits& limits = {}) {
    if (n > limits.max_depth) {
        throw DepthOverflowError("depth " + std::to_string(n) + " exceeds configured maximum " +
                                 std::to_string(limits.max_depth));
    }
    if (n > x.length()) {
        throw DepthOverflowError("depth " + std::to_string(n) +
                                 " exceeds the materialized path length " +
                                 std::to_string(x.length()));
    }
    return x.digits().prefix(n);
}

/// Length of the longest common prefix; the ultrametric distance is 2^-result.
[[nodiscard]] inline std::size_t common_prefix_depth(const Path& x, const Path& y) {
    const std::size_t n = std::min(x.length(), y.length());
    for (std::size_t j = 1; j <= n; ++j) {
        if (x.digit(j) != y.digit(j)) {
            return j - 1;
        }
    }
    return n;
}

} // namespace mfx

template <>
struct std::hash<mfx::Cylinder> {
    std::size_t operator()(const mfx::Cylinder& c) const noexcept {
        std::size_t h = std::hash<std::size_t>{}(c.depth());
        for (auto w : c.words()) {
            h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};
