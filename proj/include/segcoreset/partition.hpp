#pragma once

#include <cstddef>
#include <vector>

#include "segcoreset/grid.hpp"

namespace segcoreset {

struct BalancedPartition {
    std::vector<Rect> rects;
    double threshold = 0.0;  // gamma^2 * sigma
};

// Greedy column sweep over `view`: a column interval grows while its opt1
// stays within sigma. A single column that already exceeds sigma is swept
// by rows instead. Every returned rect has opt1 <= sigma.
//
// With `limit` set, the sweep stops as soon as more than `limit` rects have
// been produced; the caller only needs to know it overflowed.
std::vector<Rect> slice_partition(const PrefixStats& stats, const Rect& view, double sigma,
                                  std::size_t limit = static_cast<std::size_t>(-1));

// Grows horizontal slabs row by row, re-slicing each slab at gamma^2*sigma,
// and commits the last slab whose slice partition had at most floor(1/gamma)
// pieces. A single row that already overflows is committed on its own.
BalancedPartition partition(const PrefixStats& stats, double gamma, double sigma);

}  // namespace segcoreset
