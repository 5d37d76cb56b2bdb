#include "segcoreset/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "segcoreset/error.hpp"

namespace segcoreset {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Bounds: return "bounds";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::SizeGuard: return "size-guard";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

std::int64_t overlap_area(const Rect& a, const Rect& b) noexcept {
    const int h = std::min(a.r1, b.r1) - std::max(a.r0, b.r0);
    const int w = std::min(a.c1, b.c1) - std::max(a.c0, b.c0);
    if (h <= 0 || w <= 0) return 0;
    return static_cast<std::int64_t>(h) * w;
}

std::string to_string(const Rect& r) {
    std::ostringstream os;
    os << "[" << r.r0 << "," << r.r1 << ")x[" << r.c0 << "," << r.c1 << ")";
    return os.str();
}

Signal::Signal(int rows, int cols, std::vector<double> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
    if (rows < 1 || cols < 1) {
        fail(ErrorKind::Parameter, "signal must have at least one row and one column");
    }
    if (labels_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        fail(ErrorKind::Parameter, "signal label count does not match rows*cols");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (!std::isfinite(labels_[i])) {
            fail(ErrorKind::Parameter, "signal label at index " + std::to_string(i) + " is not finite");
        }
    }
}

void Signal::check(const Rect& rect) const {
    if (rect.empty() || rect.r0 < 0 || rect.c0 < 0 || rect.r1 > rows_ || rect.c1 > cols_) {
        fail(ErrorKind::Bounds, "rect " + to_string(rect) + " outside " +
                                    std::to_string(rows_) + "x" + std::to_string(cols_) + " grid");
    }
}

PrefixStats::PrefixStats(const Signal& signal)
    : rows_(signal.rows()),
      cols_(signal.cols()),
      shift_(0.0),
      sum_(static_cast<std::size_t>(rows_ + 1) * (cols_ + 1), 0.0),
      sum_sq_(sum_.size(), 0.0) {
    double total = 0.0;
    for (double y : signal.labels()) total += y;
    shift_ = total / static_cast<double>(signal.size());

    for (int r = 0; r < rows_; ++r) {
        double row_sum = 0.0;
        double row_sq = 0.0;
        for (int c = 0; c < cols_; ++c) {
            const double y = signal.at(r, c) - shift_;
            row_sum += y;
            row_sq += y * y;
            sum_[idx(r + 1, c + 1)] = sum_[idx(r, c + 1)] + row_sum;
            sum_sq_[idx(r + 1, c + 1)] = sum_sq_[idx(r, c + 1)] + row_sq;
        }
    }
}

void PrefixStats::check(const Rect& rect) const {
    if (rect.empty() || rect.r0 < 0 || rect.c0 < 0 || rect.r1 > rows_ || rect.c1 > cols_) {
        fail(ErrorKind::Bounds, "rect " + to_string(rect) + " outside " +
                                    std::to_string(rows_) + "x" + std::to_string(cols_) + " grid");
    }
}

Moments PrefixStats::moments(const Rect& rect) const {
    check(rect);
    const auto box = [&](const std::vector<double>& t) {
        return t[idx(rect.r1, rect.c1)] - t[idx(rect.r0, rect.c1)] -
               t[idx(rect.r1, rect.c0)] + t[idx(rect.r0, rect.c0)];
    };
    const double area = static_cast<double>(rect.area());
    const double s = box(sum_);
    const double sq = box(sum_sq_);
    // Undo the shift: y = (y - mu) + mu.
    return {area, s + shift_ * area, sq + 2.0 * shift_ * s + shift_ * shift_ * area};
}

double PrefixStats::mean(const Rect& rect) const {
    check(rect);
    const double s = sum_[idx(rect.r1, rect.c1)] - sum_[idx(rect.r0, rect.c1)] -
                     sum_[idx(rect.r1, rect.c0)] + sum_[idx(rect.r0, rect.c0)];
    return shift_ + s / static_cast<double>(rect.area());
}

double PrefixStats::opt1(const Rect& rect) const {
    check(rect);
    return opt1_unchecked(rect);
}

double PrefixStats::opt1_unchecked(const Rect& rect) const noexcept {
    if (rect.area() == 1) return 0.0;
    const std::size_t a = idx(rect.r1, rect.c1);
    const std::size_t b = idx(rect.r0, rect.c1);
    const std::size_t c = idx(rect.r1, rect.c0);
    const std::size_t d = idx(rect.r0, rect.c0);
    const double s = sum_[a] - sum_[b] - sum_[c] + sum_[d];
    const double sq = sum_sq_[a] - sum_sq_[b] - sum_sq_[c] + sum_sq_[d];
    const double area = static_cast<double>(rect.area());
    const double v = sq - s * s / area;

    // Inclusion-exclusion rounding floor; anything below it is
    // indistinguishable from a constant block.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double sq_mag = std::abs(sum_sq_[a]) + std::abs(sum_sq_[b]) +
                          std::abs(sum_sq_[c]) + std::abs(sum_sq_[d]);
    const double s_mag = std::abs(sum_[a]) + std::abs(sum_[b]) +
                         std::abs(sum_[c]) + std::abs(sum_[d]);
    const double floor = 8.0 * eps * (sq_mag + 2.0 * std::abs(s) * s_mag / area);
    return v <= floor ? 0.0 : v;
}

}  // namespace segcoreset
