#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "segcoreset/grid.hpp"

namespace segcoreset {

struct Cell {
    Rect rect;
    double label = 0.0;
};

// k disjoint labeled rectangles covering an n x m grid. Cells are kept in
// canonical (r0, c0) order.
class KSegmentation {
public:
    // Validates disjointness and coverage; throws a validation error.
    KSegmentation(int rows, int cols, std::vector<Cell> cells);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return cells_.size(); }
    const std::vector<Cell>& cells() const noexcept { return cells_; }

    // Label assigned to one grid cell; O(|cells|).
    double value_at(int r, int c) const;

    // Throws a validation error if the segmentation has more than k cells.
    void check_budget(std::size_t k) const;

private:
    int rows_;
    int cols_;
    std::vector<Cell> cells_;
};

enum class Axis { Row, Col };

// Guillotine decision tree over a grid, stored as a flat node array with
// the root at index 0. A split at threshold t sends [lo, t) to `low` and
// [t, hi) to `high` along its axis.
class KTree {
public:
    struct Node {
        bool leaf = true;
        double label = 0.0;
        Axis axis = Axis::Row;
        int threshold = 0;
        int low = -1;
        int high = -1;
    };

    KTree() = default;
    static KTree leaf(double label);

    // Builders returning the new node index; children must already exist.
    int add_leaf(double label);
    int add_split(Axis axis, int threshold, int low, int high);
    void set_root(int index) { root_ = index; }

    int root() const noexcept { return root_; }
    const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t leaf_count() const;

private:
    std::vector<Node> nodes_;
    int root_ = -1;
};

// One cell per leaf. Throws a validation error if a threshold is not
// strictly inside the node's inherited rect.
KSegmentation ktree_to_segmentation(const KTree& tree, int rows, int cols);

// SSE of the segmentation against the signal via block moments.
double exact_loss(const Signal& signal, const KSegmentation& seg);
double exact_loss(const PrefixStats& stats, const KSegmentation& seg);

// Number of distinct labels the segmentation assigns inside rect.
std::size_t distinct_labels_on_rect(const KSegmentation& seg, const Rect& rect);

}  // namespace segcoreset
