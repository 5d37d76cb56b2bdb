#pragma once

#include <cstddef>

#include "segcoreset/caratheodory.hpp"
#include "segcoreset/coreset.hpp"
#include "segcoreset/segmentation.hpp"

namespace segcoreset {

struct QueryReport {
    double loss_estimate = 0.0;
    std::size_t blocks_intersected = 0;
    std::size_t blocks_exact = 0;
    // The segmentation has more cells than the coreset's build-time k.
    bool exceeds_k = false;
};

struct BlockEstimate {
    double loss = 0.0;
    double drained = 0.0;  // total weight consumed; equals area on the drain path
    bool exact = false;
};

// Loss contribution of one block. A block that sees a single label uses the
// closed form sum w (b - s)^2. Otherwise a copy of the four weights is
// drained against the segmentation cells in canonical order, each cell
// consuming as much weight as it overlaps the block.
BlockEstimate estimate_block(const BlockCoreset& block, const KSegmentation& seg);

// Throws a dimension error if the segmentation grid differs from the
// coreset grid. The coreset is not modified.
QueryReport evaluate_loss(const Coreset& coreset, const KSegmentation& seg);

}  // namespace segcoreset
