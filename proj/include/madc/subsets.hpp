#pragma once

// Lexicographic ranking of fixed-size subsets of [n] = {1, ..., n}.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "madc/error.hpp"

namespace madc {

inline constexpr int kMaxGroundSet = 64;

/// Binomial coefficient C(n, k). Throws ValidationError when the result does
/// not fit in 64 bits or n exceeds kMaxGroundSet.
inline std::uint64_t binomial(int n, int k) {
    if (n < 0 || n > kMaxGroundSet) {
        throw ValidationError("binomial: n=" + std::to_string(n) + " outside [0, " +
                              std::to_string(kMaxGroundSet) + "]");
    }
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (int i = 0; i < k; ++i) {
        // result * (n - i) / (i + 1) is always an integer: it equals C(n, i + 1).
        result = result * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
        if (result > UINT64_MAX) {
            throw ValidationError("binomial: C(" + std::to_string(n) + "," + std::to_string(k) +
                                  ") overflows 64 bits");
        }
    }
    return static_cast<std::uint64_t>(result);
}

/// A subset of [n], stored as a strictly increasing sequence of positive points.
/// Construction sorts its input; duplicates and non-positive points are rejected.
class KSubset {
  public:
    KSubset() = default;
    KSubset(std::initializer_list<int> points) : KSubset(std::vector<int>(points)) {}
    explicit KSubset(std::vector<int> points) : points_(std::move(points)) {
        std::sort(points_.begin(), points_.end());
        if (!points_.empty() && points_.front() < 1) {
            throw ValidationError("subset point " + std::to_string(points_.front()) +
                                  " is not positive");
        }
        if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
            throw ValidationError("subset has duplicate points: " + to_string());
        }
    }

    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    int operator[](std::size_t i) const { return points_[i]; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }
    const std::vector<int>& points() const noexcept { return points_; }
    int max() const { return points_.empty() ? 0 : points_.back(); }

    bool contains(int point) const { return std::binary_search(points_.begin(), points_.end(), point); }

    bool is_subset_of(const KSubset& other) const {
        return std::includes(other.points_.begin(), other.points_.end(), points_.begin(),
                             points_.end());
    }

    /// this ∪ {point}; throws if point is already present.
    KSubset with(int point) const {
        std::vector<int> pts = points_;
        pts.push_back(point);
        return KSubset(std::move(pts));
    }

    /// Renders as the compact label "{123}"; points above 9 are space separated.
    std::string to_string() const { return to_string(points_.empty() || points_.back() <= 9); }

    /// Compact form concatenates digits ("{123}"); otherwise "{10 11 12}".
    std::string to_string(bool compact) const {
        std::string out = "{";
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (!compact && i > 0) out += ' ';
            out += std::to_string(points_[i]);
        }
        out += '}';
        return out;
    }

    friend bool operator==(const KSubset&, const KSubset&) = default;
    friend std::strong_ordering operator<=>(const KSubset& a, const KSubset& b) {
        return std::lexicographical_compare_three_way(a.points_.begin(), a.points_.end(),
                                                      b.points_.begin(), b.points_.end());
    }

  private:
    std::vector<int> points_;
};

/// 1-based position of `subset` among all |subset|-subsets of [n] in
/// lexicographic order. The sequence must be strictly increasing inside [n].
inline std::uint64_t rank_subset(int n, std::span<const int> subset) {
    if (n < 1 || n > kMaxGroundSet) {
        throw ValidationError("rank_subset: ground set size " + std::to_string(n) +
                              " unsupported");
    }
    const int k = static_cast<int>(subset.size());
    if (k > n) throw ValidationError("rank_subset: subset larger than ground set");
    int prev = 0;
    std::uint64_t rank = 1;
    for (int i = 0; i < k; ++i) {
        const int x = subset[static_cast<std::size_t>(i)];
        if (x < 1 || x > n) {
            throw ValidationError("rank_subset: element " + std::to_string(x) +
                                  " outside [1, " + std::to_string(n) + "]");
        }
        if (x <= prev) throw ValidationError("rank_subset: elements not strictly increasing");
        // Skip every subset that agrees on the first i positions but has a smaller
        // element at position i.
        for (int v = prev + 1; v < x; ++v) rank += binomial(n - v, k - i - 1);
        prev = x;
    }
    return rank;
}

inline std::uint64_t rank_subset(int n, const KSubset& subset) {
    return rank_subset(n, std::span<const int>(subset.points()));
}

/// Inverse of rank_subset: the k-subset of [n] at 1-based lexicographic position `rank`.
inline KSubset unrank_subset(int n, int k, std::uint64_t rank) {
    if (n < 1 || k < 0 || k > n) {
        throw ValidationError("unrank_subset: need 0 <= k <= n, got n=" + std::to_string(n) +
                              " k=" + std::to_string(k));
    }
    const std::uint64_t total = binomial(n, k);
    if (rank < 1 || rank > total) {
        throw ValidationError("unrank_subset: rank " + std::to_string(rank) + " outside [1, " +
                              std::to_string(total) + "]");
    }
    std::vector<int> points;
    points.reserve(static_cast<std::size_t>(k));
    std::uint64_t remaining = rank - 1;
    int v = 1;
    for (int i = 0; i < k; ++i) {
        for (;; ++v) {
            const std::uint64_t block = binomial(n - v, k - i - 1);
            if (remaining < block) break;
            remaining -= block;
        }
        points.push_back(v++);
    }
    return KSubset(std::move(points));
}

/// All k-subsets of [n] in lexicographic order.
inline std::vector<KSubset> enumerate_subsets(int n, int k) {
    if (k < 1 || n < 1 || k > n) {
        throw ValidationError("enumerate_subsets: need 0 < k <= n, got n=" + std::to_string(n) +
                              " k=" + std::to_string(k));
    }
    std::vector<KSubset> out;
    out.reserve(static_cast<std::size_t>(binomial(n, k)));
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
    for (;;) {
        out.emplace_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

/// The k-subsets of `set`, in lexicographic order of their points.
inline std::vector<KSubset> subsets_of(const KSubset& set, int k) {
    const int size = static_cast<int>(set.size());
    if (k < 1 || k > size) return {};
    std::vector<KSubset> out;
    for (const KSubset& idx : enumerate_subsets(size, k)) {
        std::vector<int> pts;
        pts.reserve(idx.size());
        for (int i : idx) pts.push_back(set[static_cast<std::size_t>(i - 1)]);
        out.emplace_back(std::move(pts));
    }
    return out;
}

}  // namespace madc
