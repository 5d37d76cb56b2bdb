#include "segcoreset/segmentation.hpp"

#include <algorithm>
#include <vector>

#include "segcoreset/error.hpp"

namespace segcoreset {

namespace {

bool canonical_less(const Cell& a, const Cell& b) {
    if (a.rect.r0 != b.rect.r0) return a.rect.r0 < b.rect.r0;
    return a.rect.c0 < b.rect.c0;
}

}  // namespace

KSegmentation::KSegmentation(int rows, int cols, std::vector<Cell> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows < 1 || cols < 1) fail(ErrorKind::Validation, "segmentation grid must be nonempty");
    if (cells_.empty()) fail(ErrorKind::Validation, "segmentation has no cells");

    const Rect grid{0, rows, 0, cols};
    std::int64_t total = 0;
    for (const Cell& cell : cells_) {
        if (cell.rect.empty() || !grid.contains(cell.rect)) {
            fail(ErrorKind::Validation, "segmentation cell " + to_string(cell.rect) + " outside grid");
        }
        total += cell.rect.area();
    }
    std::sort(cells_.begin(), cells_.end(), canonical_less);

    // Sorted by r0: a cell can only overlap later cells starting above its r1.
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        for (std::size_t j = i + 1; j < cells_.size() && cells_[j].rect.r0 < cells_[i].rect.r1; ++j) {
            if (overlap_area(cells_[i].rect, cells_[j].rect) > 0) {
                fail(ErrorKind::Validation, "segmentation cells " + to_string(cells_[i].rect) +
                                                " and " + to_string(cells_[j].rect) + " overlap");
            }
        }
    }
    if (total != grid.area()) {
        fail(ErrorKind::Validation, "segmentation does not cover the grid");
    }
}

double KSegmentation::value_at(int r, int c) const {
    for (const Cell& cell : cells_) {
        if (cell.rect.contains(r, c)) return cell.label;
    }
    fail(ErrorKind::Bounds, "cell (" + std::to_string(r) + "," + std::to_string(c) + ") outside segmentation");
}

void KSegmentation::check_budget(std::size_t k) const {
    if (cells_.size() > k) {
        fail(ErrorKind::Validation, "segmentation has " + std::to_string(cells_.size()) +
                                        " cells, budget is " + std::to_string(k));
    }
}

KTree KTree::leaf(double label) {
    KTree t;
    t.set_root(t.add_leaf(label));
    return t;
}

int KTree::add_leaf(double label) {
    Node n;
    n.leaf = true;
    n.label = label;
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
}

int KTree::add_split(Axis axis, int threshold, int low, int high) {
    const int count = static_cast<int>(nodes_.size());
    if (low < 0 || low >= count || high < 0 || high >= count || low == high) {
        fail(ErrorKind::Validation, "split children must be existing, distinct nodes");
    }
    Node n;
    n.leaf = false;
    n.axis = axis;
    n.threshold = threshold;
    n.low = low;
    n.high = high;
    nodes_.push_back(n);
    return count;
}

std::size_t KTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

KSegmentation ktree_to_segmentation(const KTree& tree, int rows, int cols) {
    if (tree.root() < 0 || static_cast<std::size_t>(tree.root()) >= tree.node_count()) {
        fail(ErrorKind::Validation, "tree has no root");
    }
    std::vector<Cell> cells;
    struct Frame {
        int node;
        Rect rect;
    };
    std::vector<Frame> stack{{tree.root(), Rect{0, rows, 0, cols}}};
    std::size_t visited = 0;
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (++visited > tree.node_count()) {
            fail(ErrorKind::Validation, "tree contains a cycle or shared node");
        }
        const KTree::Node& n = tree.node(f.node);
        if (n.leaf) {
            cells.push_back({f.rect, n.label});
            continue;
        }
        Rect low = f.rect;
        Rect high = f.rect;
        if (n.axis == Axis::Row) {
            if (n.threshold <= f.rect.r0 || n.threshold >= f.rect.r1) {
                fail(ErrorKind::Validation, "row threshold " + std::to_string(n.threshold) +
                                                " not strictly inside " + to_string(f.rect));
            }
            low.r1 = n.threshold;
            high.r0 = n.threshold;
        } else {
            if (n.threshold <= f.rect.c0 || n.threshold >= f.rect.c1) {
                fail(ErrorKind::Validation, "column threshold " + std::to_string(n.threshold) +
                                                " not strictly inside " + to_string(f.rect));
            }
            low.c1 = n.threshold;
            high.c0 = n.threshold;
        }
        stack.push_back({n.high, high});
        stack.push_back({n.low, low});
    }
    return KSegmentation(rows, cols, std::move(cells));
}

double exact_loss(const PrefixStats& stats, const KSegmentation& seg) {
    if (stats.rows() != seg.rows() || stats.cols() != seg.cols()) {
        fail(ErrorKind::Dimension, "segmentation grid does not match signal");
    }
    double loss = 0.0;
    for (const Cell& cell : seg.cells()) {
        // sum (y - l)^2 = opt1 + area * (mean - l)^2, which avoids the
        // cancellation of sum y^2 - 2 l sum y + l^2 area.
        const double d = stats.mean(cell.rect) - cell.label;
        loss += stats.opt1(cell.rect) + static_cast<double>(cell.rect.area()) * d * d;
    }
    return loss;
}

double exact_loss(const Signal& signal, const KSegmentation& seg) {
    return exact_loss(PrefixStats(signal), seg);
}

std::size_t distinct_labels_on_rect(const KSegmentation& seg, const Rect& rect) {
    const Rect grid{0, seg.rows(), 0, seg.cols()};
    if (rect.empty() || !grid.contains(rect)) {
        fail(ErrorKind::Bounds, "rect " + to_string(rect) + " outside segmentation grid");
    }
    std::vector<double> labels;
    for (const Cell& cell : seg.cells()) {
        if (overlap_area(cell.rect, rect) > 0) labels.push_back(cell.label);
    }
    std::sort(labels.begin(), labels.end());
    return static_cast<std::size_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
}

}  // namespace segcoreset
