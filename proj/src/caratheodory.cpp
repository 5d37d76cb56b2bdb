#include "segcoreset/caratheodory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "segcoreset/error.hpp"

namespace segcoreset {

namespace {

// Relative label gap below which the affine-dependence solve is treated as
// degenerate (condition estimate above 1e12).
constexpr double kMinRelativeGap = 1e-12;

}  // namespace

void CaratheodoryReducer::add(double label, double weight) {
    for (std::size_t i = 0; i < count_; ++i) {
        if (pts_[i].label == label) {
            pts_[i].weight += weight;
            return;
        }
    }
    pts_[count_++] = {label, weight};
    if (count_ == 5) reduce();
}

void CaratheodoryReducer::reduce() {
    // The first four slots hold distinct labels y_0..y_3. The third divided
    // difference of any quadratic vanishes, so
    //   lambda_j = 1 / prod_{i != j} (y_j - y_i)
    // satisfies sum lambda_j * (1, y_j, y_j^2) = 0.
    double lo = pts_[0].label;
    double hi = pts_[0].label;
    double scale = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        lo = std::min(lo, pts_[i].label);
        hi = std::max(hi, pts_[i].label);
        scale = std::max(scale, std::abs(pts_[i].label));
    }
    scale = std::max(scale, hi - lo);
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            min_gap = std::min(min_gap, std::abs(pts_[i].label - pts_[j].label));
        }
    }
    if (min_gap <= kMinRelativeGap * scale) {
        merge_closest();
        return;
    }

    std::array<double, 4> lambda{};
    double norm = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        double p = 1.0;
        for (std::size_t i = 0; i < 4; ++i) {
            if (i != j) p *= (pts_[j].label - pts_[i].label) / scale;
        }
        lambda[j] = 1.0 / p;
        if (!std::isfinite(lambda[j])) {
            merge_closest();
            return;
        }
        norm = std::max(norm, std::abs(lambda[j]));
    }
    for (double& l : lambda) l /= norm;

    // Move along -lambda until the first positive-coefficient weight hits 0.
    std::size_t drop = 4;
    double step = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 4; ++j) {
        if (lambda[j] > 0.0) {
            const double t = pts_[j].weight / lambda[j];
            if (t < step) {
                step = t;
                drop = j;
            }
        }
    }
    for (std::size_t j = 0; j < 4; ++j) {
        pts_[j].weight = j == drop ? 0.0 : std::max(0.0, pts_[j].weight - step * lambda[j]);
    }

    std::size_t out = 0;
    for (std::size_t i = 0; i < count_; ++i) {
        if (pts_[i].weight > 0.0) pts_[out++] = pts_[i];
    }
    count_ = out;
    if (count_ == 5) merge_closest();
}

void CaratheodoryReducer::merge_closest() {
    std::size_t a = 0;
    std::size_t b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count_; ++i) {
        for (std::size_t j = i + 1; j < count_; ++j) {
            const double gap = std::abs(pts_[i].label - pts_[j].label);
            if (gap < best) {
                best = gap;
                a = i;
                b = j;
            }
        }
    }
    const double w = pts_[a].weight + pts_[b].weight;
    if (w > 0.0) {
        pts_[a].label = (pts_[a].weight * pts_[a].label + pts_[b].weight * pts_[b].label) / w;
    }
    pts_[a].weight = w;
    for (std::size_t i = b; i + 1 < count_; ++i) pts_[i] = pts_[i + 1];
    --count_;
    ++fallback_merges_;
}

std::vector<WeightedLabel> CaratheodoryReducer::result() const {
    std::vector<WeightedLabel> out;
    for (std::size_t i = 0; i < count_; ++i) {
        if (pts_[i].weight > 0.0) out.push_back(pts_[i]);
    }
    return out;
}

std::vector<WeightedLabel> caratheodory_reduce(std::span<const WeightedLabel> stream) {
    if (stream.empty()) fail(ErrorKind::Parameter, "caratheodory_reduce needs a nonempty stream");
    CaratheodoryReducer reducer;
    for (const WeightedLabel& p : stream) {
        if (!std::isfinite(p.label)) fail(ErrorKind::Parameter, "non-finite label in stream");
        if (!(p.weight > 0.0) || !std::isfinite(p.weight)) {
            fail(ErrorKind::Parameter, "multiplicities must be positive and finite");
        }
        reducer.add(p.label, p.weight);
    }
    return reducer.result();
}

BlockCoreset compress_block(const Signal& signal, const Rect& rect) {
    signal.check(rect);
    CaratheodoryReducer reducer;
    for (int r = rect.r0; r < rect.r1; ++r) {
        for (int c = rect.c0; c < rect.c1; ++c) reducer.add(signal.at(r, c), 1.0);
    }
    const std::vector<WeightedLabel> kept = reducer.result();

    BlockCoreset block;
    block.rect = rect;
    const std::array<std::pair<int, int>, 4> corners{{
        {rect.r0, rect.c0},
        {rect.r0, rect.c1 - 1},
        {rect.r1 - 1, rect.c0},
        {rect.r1 - 1, rect.c1 - 1},
    }};
    for (std::size_t i = 0; i < 4; ++i) {
        CoresetPoint& p = block.points[i];
        p.row = corners[i].first;
        p.col = corners[i].second;
        if (i < kept.size()) {
            p.label = kept[i].label;
            p.weight = kept[i].weight;
        } else {
            // Zero-weight pad; reuse a surviving label so pads stay inert.
            p.label = kept.front().label;
            p.weight = 0.0;
        }
    }
    return block;
}

}  // namespace segcoreset
