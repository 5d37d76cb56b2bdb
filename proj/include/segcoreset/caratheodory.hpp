#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "segcoreset/grid.hpp"

namespace segcoreset {

struct WeightedLabel {
    double label = 0.0;
    double weight = 0.0;
};

// Streaming reduction of weighted labels to at most four survivors that
// preserve total weight, sum of weight*label and sum of weight*label^2.
//
// Labels are lifted to (1, y, y^2). At most four lifted points are kept;
// admitting a fifth solves for an affine dependence among four of them and
// shifts weight along it until one weight reaches zero. Ill-conditioned
// dependences (near-duplicate labels) fall back to merging the closest
// pair by weighted average.
class CaratheodoryReducer {
public:
    void add(double label, double weight);

    // Survivors with positive weight, in slot order.
    std::vector<WeightedLabel> result() const;

    std::size_t fallback_merges() const noexcept { return fallback_merges_; }

private:
    void reduce();
    void merge_closest();

    std::array<WeightedLabel, 5> pts_{};
    std::size_t count_ = 0;
    std::size_t fallback_merges_ = 0;
};

// Throws a parameter error on an empty stream, nonpositive multiplicity or
// non-finite label.
std::vector<WeightedLabel> caratheodory_reduce(std::span<const WeightedLabel> stream);

struct CoresetPoint {
    int row = 0;
    int col = 0;
    double label = 0.0;
    double weight = 0.0;

    friend bool operator==(const CoresetPoint&, const CoresetPoint&) = default;
};

// One partition cell compressed to exactly four weighted points placed on
// the rect corners in order top-left, top-right, bottom-left, bottom-right.
struct BlockCoreset {
    Rect rect;
    std::array<CoresetPoint, 4> points{};

    friend bool operator==(const BlockCoreset&, const BlockCoreset&) = default;
};

// Labels are admitted in row-major order, so the output is deterministic.
BlockCoreset compress_block(const Signal& signal, const Rect& rect);

}  // namespace segcoreset
