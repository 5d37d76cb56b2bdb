#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace segcoreset {

// Half-open, zero-based rectangle [r0, r1) x [c0, c1).
struct Rect {
    int r0 = 0;
    int r1 = 0;
    int c0 = 0;
    int c1 = 0;

    int rows() const noexcept { return r1 - r0; }
    int cols() const noexcept { return c1 - c0; }
    std::int64_t area() const noexcept {
        return static_cast<std::int64_t>(rows()) * cols();
    }
    bool empty() const noexcept { return r1 <= r0 || c1 <= c0; }
    bool contains(int r, int c) const noexcept {
        return r >= r0 && r < r1 && c >= c0 && c < c1;
    }
    bool contains(const Rect& o) const noexcept {
        return o.r0 >= r0 && o.r1 <= r1 && o.c0 >= c0 && o.c1 <= c1;
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

// Number of cells shared by two rectangles.
std::int64_t overlap_area(const Rect& a, const Rect& b) noexcept;

std::string to_string(const Rect& r);

// Dense n x m grid of finite real labels, row-major.
class Signal {
public:
    Signal(int rows, int cols, std::vector<double> labels);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return labels_.size(); }
    Rect bounds() const noexcept { return {0, rows_, 0, cols_}; }

    double at(int r, int c) const noexcept {
        return labels_[static_cast<std::size_t>(r) * cols_ + c];
    }
    std::span<const double> labels() const noexcept { return labels_; }
    std::span<const double> row(int r) const noexcept {
        return std::span<const double>(labels_).subspan(
            static_cast<std::size_t>(r) * cols_, cols_);
    }

    // Throws a bounds error unless rect is nonempty and inside the grid.
    void check(const Rect& rect) const;

private:
    int rows_;
    int cols_;
    std::vector<double> labels_;
};

struct Moments {
    double count = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
};

// Summed-area tables of y and y^2 with one guard row/column of zeros.
// Labels are shifted by the global mean before accumulation so that
// opt1 does not lose precision to large offsets.
class PrefixStats {
public:
    explicit PrefixStats(const Signal& signal);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    Rect bounds() const noexcept { return {0, rows_, 0, cols_}; }

    Moments moments(const Rect& rect) const;
    double opt1(const Rect& rect) const;
    double mean(const Rect& rect) const;

    // Unchecked variants for hot loops; rect must be valid.
    double opt1_unchecked(const Rect& rect) const noexcept;

private:
    std::size_t idx(int r, int c) const noexcept {
        return static_cast<std::size_t>(r) * (cols_ + 1) + c;
    }
    void check(const Rect& rect) const;

    int rows_;
    int cols_;
    double shift_;
    std::vector<double> sum_;
    std::vector<double> sum_sq_;
};

inline PrefixStats build_prefix_stats(const Signal& signal) {
    return PrefixStats(signal);
}

// Minimum over constants c of sum (y - c)^2 on rect, clamped to >= 0.
inline double opt1(const PrefixStats& stats, const Rect& rect) {
    return stats.opt1(rect);
}

inline double block_mean(const PrefixStats& stats, const Rect& rect) {
    return stats.mean(rect);
}

}  // namespace segcoreset
