#include "segcoreset/query.hpp"

#include <array>

#include "segcoreset/error.hpp"

namespace segcoreset {

BlockEstimate estimate_block(const BlockCoreset& block, const KSegmentation& seg) {
    BlockEstimate est;
    if (distinct_labels_on_rect(seg, block.rect) == 1) {
        double value = 0.0;
        for (const Cell& cell : seg.cells()) {
            if (overlap_area(cell.rect, block.rect) > 0) {
                value = cell.label;
                break;
            }
        }
        for (const CoresetPoint& p : block.points) {
            const double d = p.label - value;
            est.loss += p.weight * d * d;
            est.drained += p.weight;
        }
        est.exact = true;
        return est;
    }

    std::array<double, 4> remaining{};
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        remaining[i] = block.points[i].weight;
        if (remaining[i] > 0.0) last_positive = i;
    }
    std::size_t i = 0;
    for (const Cell& cell : seg.cells()) {
        double z = static_cast<double>(overlap_area(block.rect, cell.rect));
        if (z == 0.0) continue;
        while (z > 0.0 && i < 4) {
            const double d = cell.label - block.points[i].label;
            if (remaining[i] <= z) {
                est.loss += remaining[i] * d * d;
                est.drained += remaining[i];
                z -= remaining[i];
                remaining[i] = 0.0;
                ++i;
            } else {
                est.loss += z * d * d;
                est.drained += z;
                remaining[i] -= z;
                z = 0.0;
            }
        }
        if (z > 0.0) {
            // Rounding left the weights a hair short of the block area.
            const double d = cell.label - block.points[last_positive].label;
            est.loss += z * d * d;
            est.drained += z;
        }
    }
    return est;
}

QueryReport evaluate_loss(const Coreset& coreset, const KSegmentation& seg) {
    if (seg.rows() != coreset.rows || seg.cols() != coreset.cols) {
        fail(ErrorKind::Dimension, "segmentation is " + std::to_string(seg.rows()) + "x" +
                                       std::to_string(seg.cols()) + ", coreset grid is " +
                                       std::to_string(coreset.rows) + "x" + std::to_string(coreset.cols));
    }
    QueryReport report;
    report.exceeds_k = seg.size() > static_cast<std::size_t>(coreset.k);
    for (const BlockCoreset& block : coreset.blocks) {
        const BlockEstimate est = estimate_block(block, seg);
        report.loss_estimate += est.loss;
        if (est.exact) {
            ++report.blocks_exact;
        } else {
            ++report.blocks_intersected;
        }
    }
    if (report.loss_estimate < 0.0) report.loss_estimate = 0.0;
    return report;
}

}  // namespace segcoreset
