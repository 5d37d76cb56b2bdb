#include "segcoreset/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "segcoreset/error.hpp"

namespace segcoreset {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n <= 1) return 0;
    // Rejection keeps the draw unbiased for every n.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(theta);
    has_spare_ = true;
    return radius * std::cos(theta);
}

namespace {

// Dense tables indexed by (row interval, column interval, budget - 1).
class DpTable {
public:
    DpTable(int rows, int cols, int k) : rows_(rows), cols_(cols), k_(k) {
        row_pairs_ = static_cast<std::size_t>(rows) * (rows + 1) / 2;
        col_pairs_ = static_cast<std::size_t>(cols) * (cols + 1) / 2;
        const std::size_t entries = row_pairs_ * col_pairs_ * static_cast<std::size_t>(k);
        loss_.assign(entries, 0.0);
        choice_.assign(entries, -1);
        label_.assign(row_pairs_ * col_pairs_, 0.0);
    }

    std::size_t rect_id(const Rect& r) const {
        return pair_id(r.r0, r.r1, rows_) * col_pairs_ + pair_id(r.c0, r.c1, cols_);
    }
    std::size_t at(const Rect& r, int j) const {
        return rect_id(r) * k_ + static_cast<std::size_t>(j - 1);
    }

    std::vector<double> loss_;
    std::vector<std::int64_t> choice_;
    std::vector<double> label_;

private:
    // Intervals [a, b) with 0 <= a < b <= len, grouped by start.
    static std::size_t pair_id(int a, int b, int len) {
        const std::size_t before = static_cast<std::size_t>(a) * len -
                                   static_cast<std::size_t>(a) * (a - 1) / 2;
        return before + static_cast<std::size_t>(b - a - 1);
    }

    int rows_;
    int cols_;
    std::size_t k_;
    std::size_t row_pairs_ = 0;
    std::size_t col_pairs_ = 0;
};

int budget_for(const Rect& r, int j) {
    return static_cast<int>(std::min<std::int64_t>(j, r.area()));
}

// choice encoding: -1 leaf, else ((axis * (span + 1) + threshold) * (k + 1) + low budget)
struct Decoded {
    Axis axis;
    int threshold;
    int low_budget;
};

Decoded decode(std::int64_t code, int span, int k) {
    const int low_budget = static_cast<int>(code % (k + 1));
    code /= (k + 1);
    const int threshold = static_cast<int>(code % (span + 1));
    const int axis = static_cast<int>(code / (span + 1));
    return {axis == 0 ? Axis::Row : Axis::Col, threshold, low_budget};
}

int rebuild(const DpTable& dp, KTree& tree, const Rect& r, int j, int span, int k) {
    const int b = budget_for(r, j);
    const std::int64_t code = dp.choice_[dp.at(r, b)];
    if (code < 0) return tree.add_leaf(dp.label_[dp.rect_id(r)]);
    const Decoded d = decode(code, span, k);
    Rect lo = r;
    Rect hi = r;
    if (d.axis == Axis::Row) {
        lo.r1 = d.threshold;
        hi.r0 = d.threshold;
    } else {
        lo.c1 = d.threshold;
        hi.c0 = d.threshold;
    }
    const int low = rebuild(dp, tree, lo, d.low_budget, span, k);
    const int high = rebuild(dp, tree, hi, b - d.low_budget, span, k);
    return tree.add_split(d.axis, d.threshold, low, high);
}

}  // namespace

OptimalTree optimal_ktree(int rows, int cols, int k, const LeafCost& leaf_cost,
                          std::size_t cell_limit) {
    if (rows < 1 || cols < 1) fail(ErrorKind::Parameter, "grid must be nonempty");
    if (k < 1) fail(ErrorKind::Parameter, "k must be at least 1");
    const std::size_t cells = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (cells > cell_limit) {
        fail(ErrorKind::SizeGuard, "grid has " + std::to_string(cells) +
                                       " cells, exact tree search is limited to " +
                                       std::to_string(cell_limit) + "; use a smaller grid");
    }
    const int kk = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), cells));
    const std::size_t entries = static_cast<std::size_t>(rows) * (rows + 1) / 2 *
                                (static_cast<std::size_t>(cols) * (cols + 1) / 2) * kk;
    constexpr std::size_t kEntryLimit = std::size_t{1} << 26;
    if (entries > kEntryLimit) {
        fail(ErrorKind::SizeGuard, "exact tree search would need " + std::to_string(entries) +
                                       " table entries; reduce k or the grid");
    }

    DpTable dp(rows, cols, kk);
    const int span = std::max(rows, cols);
    for (int h = 1; h <= rows; ++h) {
        for (int w = 1; w <= cols; ++w) {
            for (int r0 = 0; r0 + h <= rows; ++r0) {
                for (int c0 = 0; c0 + w <= cols; ++c0) {
                    const Rect rect{r0, r0 + h, c0, c0 + w};
                    const LeafFit fit = leaf_cost(rect);
                    dp.label_[dp.rect_id(rect)] = fit.label;
                    const int top = budget_for(rect, kk);
                    for (int j = 1; j <= top; ++j) {
                        double best = fit.cost;
                        std::int64_t best_code = -1;
                        if (j >= 2) {
                            auto consider = [&](Axis axis, int t, const Rect& lo, const Rect& hi) {
                                const int lo_cap = budget_for(lo, j - 1);
                                for (int i = 1; i <= lo_cap; ++i) {
                                    const int hi_budget = budget_for(hi, j - i);
                                    const double v = dp.loss_[dp.at(lo, i)] + dp.loss_[dp.at(hi, hi_budget)];
                                    if (v < best) {
                                        best = v;
                                        const int axis_id = axis == Axis::Row ? 0 : 1;
                                        best_code = (static_cast<std::int64_t>(axis_id) * (span + 1) + t) * (kk + 1) + i;
                                    }
                                }
                            };
                            for (int t = r0 + 1; t < r0 + h; ++t) {
                                consider(Axis::Row, t, {r0, t, c0, c0 + w}, {t, r0 + h, c0, c0 + w});
                            }
                            for (int t = c0 + 1; t < c0 + w; ++t) {
                                consider(Axis::Col, t, {r0, r0 + h, c0, t}, {r0, r0 + h, t, c0 + w});
                            }
                        }
                        const std::size_t slot = dp.at(rect, j);
                        dp.loss_[slot] = best;
                        dp.choice_[slot] = best_code;
                    }
                }
            }
        }
    }

    OptimalTree out;
    const Rect full{0, rows, 0, cols};
    out.loss = dp.loss_[dp.at(full, budget_for(full, kk))];
    out.tree.set_root(rebuild(dp, out.tree, full, kk, span, kk));
    return out;
}

OptimalTree optimal_ktree(const Signal& signal, int k, std::size_t cell_limit) {
    const PrefixStats stats(signal);
    return optimal_ktree(signal.rows(), signal.cols(), k,
                         [&stats](const Rect& r) {
                             return LeafFit{stats.opt1_unchecked(r), stats.mean(r)};
                         },
                         cell_limit);
}

LeafCost coreset_leaf_cost(const Coreset& coreset) {
    struct BlockSums {
        Rect rect;
        double area;
        double s1;
        double s2;
    };
    std::vector<BlockSums> sums;
    sums.reserve(coreset.blocks.size());
    for (const BlockCoreset& b : coreset.blocks) {
        BlockSums s{b.rect, static_cast<double>(b.rect.area()), 0.0, 0.0};
        for (const CoresetPoint& p : b.points) {
            s.s1 += p.weight * p.label;
            s.s2 += p.weight * p.label * p.label;
        }
        sums.push_back(s);
    }
    return [sums = std::move(sums)](const Rect& r) {
        double w = 0.0;
        double s1 = 0.0;
        double s2 = 0.0;
        for (const BlockSums& b : sums) {
            const double o = static_cast<double>(overlap_area(b.rect, r));
            if (o == 0.0) continue;
            const double f = o / b.area;
            w += o;
            s1 += f * b.s1;
            s2 += f * b.s2;
        }
        const double mean = w > 0.0 ? s1 / w : 0.0;
        return LeafFit{std::max(0.0, s2 - s1 * mean), mean};
    };
}

KTree random_ktree(int rows, int cols, int k, Rng& rng) {
    if (rows < 1 || cols < 1) fail(ErrorKind::Parameter, "grid must be nonempty");
    if (k < 1) fail(ErrorKind::Parameter, "k must be at least 1");

    struct Leaf {
        Rect rect;
        int parent;  // split slot in `splits`, -1 for the root
        bool high;
    };
    struct Split {
        Axis axis;
        int threshold;
        int low = -1;   // index into leaves while open, node index once built
        int high = -1;
    };
    std::vector<Leaf> leaves{{{0, rows, 0, cols}, -1, false}};
    std::vector<Split> splits;
    std::vector<int> open;

    while (static_cast<int>(leaves.size()) < k) {
        open.clear();
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (leaves[i].rect.area() > 1) open.push_back(static_cast<int>(i));
        }
        if (open.empty()) break;
        const int pick = open[rng.below(open.size())];
        const Rect r = leaves[static_cast<std::size_t>(pick)].rect;
        Axis axis;
        if (r.rows() > 1 && r.cols() > 1) {
            axis = rng.below(2) == 0 ? Axis::Row : Axis::Col;
        } else {
            axis = r.rows() > 1 ? Axis::Row : Axis::Col;
        }
        const int lo = axis == Axis::Row ? r.r0 : r.c0;
        const int hi = axis == Axis::Row ? r.r1 : r.c1;
        const int t = lo + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo - 1)));
        Rect a = r;
        Rect b = r;
        if (axis == Axis::Row) {
            a.r1 = t;
            b.r0 = t;
        } else {
            a.c1 = t;
            b.c0 = t;
        }
        const int split_id = static_cast<int>(splits.size());
        splits.push_back({axis, t});
        Leaf& old = leaves[static_cast<std::size_t>(pick)];
        const Leaf parent_link = old;
        // Reuse the slot for the low child, append the high child.
        old = {a, split_id, false};
        leaves.push_back({b, split_id, true});
        // Re-point the parent's reference from the old leaf to this split.
        if (parent_link.parent >= 0) {
            Split& p = splits[static_cast<std::size_t>(parent_link.parent)];
            (parent_link.high ? p.high : p.low) = -2 - split_id;
        }
    }

    // Leaves take labels in creation order, then splits are assembled
    // bottom-up. Child references: >= 0 leaf index, <= -2 split index.
    KTree tree;
    std::vector<int> leaf_node(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        leaf_node[i] = tree.add_leaf(rng.uniform(-10.0, 10.0));
    }
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const Leaf& l = leaves[i];
        if (l.parent < 0) continue;
        Split& p = splits[static_cast<std::size_t>(l.parent)];
        (l.high ? p.high : p.low) = static_cast<int>(i);
    }
    std::vector<int> split_node(splits.size(), -1);
    auto resolve = [&](auto&& self, int ref) -> int {
        if (ref >= 0) return leaf_node[static_cast<std::size_t>(ref)];
        const std::size_t s = static_cast<std::size_t>(-2 - ref);
        if (split_node[s] < 0) {
            const int low = self(self, splits[s].low);
            const int high = self(self, splits[s].high);
            split_node[s] = tree.add_split(splits[s].axis, splits[s].threshold, low, high);
        }
        return split_node[s];
    };
    tree.set_root(splits.empty() ? leaf_node[0] : resolve(resolve, -2));
    return tree;
}

KTree random_ktree(int rows, int cols, int k, std::uint64_t seed) {
    Rng rng(seed);
    return random_ktree(rows, cols, k, rng);
}

double UniformSample::estimate(const KSegmentation& seg) const {
    if (seg.rows() != rows || seg.cols() != cols) {
        fail(ErrorKind::Dimension, "segmentation grid does not match the sample grid");
    }
    // Dense lookup of the segmentation value per cell.
    std::vector<double> value(static_cast<std::size_t>(rows) * cols);
    for (const Cell& cell : seg.cells()) {
        for (int r = cell.rect.r0; r < cell.rect.r1; ++r) {
            std::fill_n(value.begin() + static_cast<std::ptrdiff_t>(r) * cols + cell.rect.c0,
                        cell.rect.cols(), cell.label);
        }
    }
    double total = 0.0;
    for (const SamplePoint& p : points) {
        const double d = value[static_cast<std::size_t>(p.row) * cols + p.col] - p.label;
        total += p.weight * d * d;
    }
    return total;
}

UniformSample random_sample_estimator(const Signal& signal, std::size_t tau, std::uint64_t seed) {
    const std::size_t n = signal.size();
    if (tau < 1 || tau > n) {
        fail(ErrorKind::Parameter, "tau must lie in [1, " + std::to_string(n) + "]");
    }
    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < tau; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    UniformSample out;
    out.rows = signal.rows();
    out.cols = signal.cols();
    const double w = static_cast<double>(n) / static_cast<double>(tau);
    out.points.reserve(tau);
    for (std::size_t i = 0; i < tau; ++i) {
        const int r = static_cast<int>(idx[i] / static_cast<std::size_t>(signal.cols()));
        const int c = static_cast<int>(idx[i] % static_cast<std::size_t>(signal.cols()));
        out.points.push_back({r, c, signal.at(r, c), w});
    }
    return out;
}

GeneratedSignal generate_signal(int rows, int cols, int pieces, double noise, std::uint64_t seed) {
    if (pieces < 1) fail(ErrorKind::Parameter, "pieces must be at least 1");
    if (!(noise >= 0.0) || !std::isfinite(noise)) fail(ErrorKind::Parameter, "noise must be finite and nonnegative");
    Rng rng(seed);
    KTree truth = random_ktree(rows, cols, pieces, rng);
    const KSegmentation seg = ktree_to_segmentation(truth, rows, cols);
    std::vector<double> labels(static_cast<std::size_t>(rows) * cols);
    for (const Cell& cell : seg.cells()) {
        for (int r = cell.rect.r0; r < cell.rect.r1; ++r) {
            for (int c = cell.rect.c0; c < cell.rect.c1; ++c) {
                labels[static_cast<std::size_t>(r) * cols + c] = cell.label;
            }
        }
    }
    for (double& y : labels) y += noise * rng.normal();
    return {Signal(rows, cols, std::move(labels)), std::move(truth)};
}

}  // namespace segcoreset
