#include "segcoreset/bicriteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "segcoreset/error.hpp"

namespace segcoreset {

void BicriteriaConfig::validate() const {
    if (!(nu > 50.0)) fail(ErrorKind::Parameter, "bicriteria nu must exceed 50");
    if (!(gamma_b >= 8.0)) fail(ErrorKind::Parameter, "bicriteria gamma_b must be at least 8");
    if (!(c_alpha > 0.0)) fail(ErrorKind::Parameter, "bicriteria c_alpha must be positive");
}

double BicriteriaConfig::alpha(int k, std::size_t n_cells) const {
    const double a = alpha_formula
                         ? alpha_formula(k, n_cells)
                         : c_alpha * k * std::log2(static_cast<double>(n_cells));
    return std::max(1.0, a);
}

namespace {

struct Candidate {
    std::vector<std::size_t> cells;
    double opt1 = 0.0;
    double mean = 0.0;
};

void fit(const Signal& signal, Candidate& cand) {
    const auto labels = signal.labels();
    double s = 0.0;
    for (std::size_t i : cand.cells) s += labels[i];
    cand.mean = s / static_cast<double>(cand.cells.size());
    double ss = 0.0;
    for (std::size_t i : cand.cells) {
        const double d = labels[i] - cand.mean;
        ss += d * d;
    }
    cand.opt1 = ss;
}

// Closes a group the moment it holds `target` units; a tail shorter than one
// group is absorbed into the group being closed.
template <typename Weight>
std::vector<std::pair<std::size_t, std::size_t>> greedy_groups(std::size_t count, double target,
                                                               Weight weight) {
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) total += weight(i);
    std::size_t begin = 0;
    double acc = 0.0;
    double seen = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        acc += weight(i);
        seen += weight(i);
        if (acc >= target) {
            std::size_t end = i + 1;
            if (total - seen < target) end = count;
            groups.emplace_back(begin, end);
            if (end == count) return groups;
            begin = end;
            acc = 0.0;
        }
    }
    if (begin < count) {
        if (groups.empty()) {
            groups.emplace_back(begin, count);
        } else {
            groups.back().second = count;
        }
    }
    return groups;
}

// Keeps the `keep` candidates with smallest opt1. Zero-loss candidates are
// always kept and at least one candidate is kept so every round progresses.
std::vector<Candidate> select_smallest(std::vector<Candidate> cands, double keep) {
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.opt1 < b.opt1; });
    const std::size_t zeros = static_cast<std::size_t>(std::count_if(
        cands.begin(), cands.end(), [](const Candidate& c) { return c.opt1 == 0.0; }));
    std::size_t n = keep > 0.0 ? static_cast<std::size_t>(std::floor(keep)) : 0;
    n = std::max({n, zeros, std::size_t{1}});
    n = std::min(n, cands.size());
    cands.resize(n);
    return cands;
}

class Peeler {
public:
    Peeler(const Signal& signal, int k, const BicriteriaConfig& cfg)
        : signal_(signal),
          k_(k),
          cfg_(cfg),
          rows_(signal.rows()),
          cols_(signal.cols()),
          active_(signal.size(), 1),
          row_count_(static_cast<std::size_t>(rows_), cols_),
          remaining_(signal.size()) {}

    std::size_t remaining() const { return remaining_; }

    std::vector<Candidate> round() {
        const double heavy = static_cast<double>(remaining_) / (cfg_.nu * k_);
        const auto best = std::max_element(row_count_.begin(), row_count_.end());
        if (static_cast<double>(*best) >= heavy) {
            return heavy_row(static_cast<int>(best - row_count_.begin()));
        }
        return slabs();
    }

    void remove(const Candidate& c) {
        for (std::size_t i : c.cells) {
            active_[i] = 0;
            --row_count_[i / static_cast<std::size_t>(cols_)];
        }
        remaining_ -= c.cells.size();
    }

    std::vector<std::size_t> active_cells() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < active_.size(); ++i) {
            if (active_[i]) out.push_back(i);
        }
        return out;
    }

private:
    std::size_t index(int r, int c) const {
        return static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c);
    }

    std::vector<Candidate> heavy_row(int r) {
        std::vector<std::size_t> cells;
        for (int c = 0; c < cols_; ++c) {
            if (active_[index(r, c)]) cells.push_back(index(r, c));
        }
        const double t = std::max(1.0, std::floor(cfg_.gamma_b * k_));
        const double per = std::ceil(static_cast<double>(cells.size()) / t);
        std::vector<Candidate> cands;
        for (auto [b, e] : greedy_groups(cells.size(), per, [](std::size_t) { return 1.0; })) {
            Candidate cand;
            cand.cells.assign(cells.begin() + static_cast<std::ptrdiff_t>(b),
                              cells.begin() + static_cast<std::ptrdiff_t>(e));
            fit(signal_, cand);
            cands.push_back(std::move(cand));
        }
        return select_smallest(std::move(cands), t - 2.0 * k_);
    }

    std::vector<Candidate> slabs() {
        const double nuk = cfg_.nu * k_;
        const double slab_target = static_cast<double>(remaining_) / nuk;
        std::vector<int> live_rows;
        for (int r = 0; r < rows_; ++r) {
            if (row_count_[static_cast<std::size_t>(r)] > 0) live_rows.push_back(r);
        }
        const auto groups = greedy_groups(live_rows.size(), slab_target, [&](std::size_t i) {
            return static_cast<double>(row_count_[static_cast<std::size_t>(live_rows[i])]);
        });
        const double psi = static_cast<double>(groups.size());
        const double r_heavy = 2.0 * nuk * nuk;

        struct Slab {
            int r0, r1;
            double size;
            std::vector<int> col_count;
            int heavy_col = -1;
        };
        std::vector<Slab> slabs;
        for (auto [b, e] : groups) {
            Slab s{live_rows[b], live_rows[e - 1] + 1, 0.0, std::vector<int>(static_cast<std::size_t>(cols_), 0)};
            for (int r = s.r0; r < s.r1; ++r) {
                for (int c = 0; c < cols_; ++c) {
                    if (active_[index(r, c)]) ++s.col_count[static_cast<std::size_t>(c)];
                }
            }
            for (int v : s.col_count) s.size += v;
            const double threshold = s.size / r_heavy;
            int best = -1;
            for (int c = 0; c < cols_; ++c) {
                const int v = s.col_count[static_cast<std::size_t>(c)];
                if (v > 0 && v >= threshold &&
                    (best < 0 || v > s.col_count[static_cast<std::size_t>(best)])) {
                    best = c;
                }
            }
            s.heavy_col = best;
            slabs.push_back(std::move(s));
        }

        const auto no_heavy = static_cast<double>(std::count_if(
            slabs.begin(), slabs.end(), [](const Slab& s) { return s.heavy_col < 0; }));

        std::vector<Candidate> cands;
        if (no_heavy >= psi / 2.0) {
            for (const Slab& s : slabs) {
                if (s.heavy_col >= 0) continue;
                const double target = s.size / r_heavy;
                const auto parts = greedy_groups(static_cast<std::size_t>(cols_), target, [&](std::size_t c) {
                    return static_cast<double>(s.col_count[c]);
                });
                for (auto [b, e] : parts) {
                    Candidate cand;
                    for (int r = s.r0; r < s.r1; ++r) {
                        for (std::size_t c = b; c < e; ++c) {
                            const std::size_t i = index(r, static_cast<int>(c));
                            if (active_[i]) cand.cells.push_back(i);
                        }
                    }
                    if (cand.cells.empty()) continue;
                    fit(signal_, cand);
                    cands.push_back(std::move(cand));
                }
            }
            const double k = k_;
            const double keep = static_cast<double>(cands.size()) -
                                4.0 * cfg_.nu * cfg_.nu * k * k * k - 2.0 * k * psi;
            return select_smallest(std::move(cands), keep);
        }

        for (const Slab& s : slabs) {
            if (s.heavy_col < 0) continue;
            Candidate cand;
            for (int r = s.r0; r < s.r1; ++r) {
                const std::size_t i = index(r, s.heavy_col);
                if (active_[i]) cand.cells.push_back(i);
            }
            fit(signal_, cand);
            cands.push_back(std::move(cand));
        }
        return select_smallest(std::move(cands), static_cast<double>(cands.size()) - 2.0 * k_);
    }

    const Signal& signal_;
    int k_;
    const BicriteriaConfig& cfg_;
    int rows_;
    int cols_;
    std::vector<unsigned char> active_;
    std::vector<int> row_count_;
    std::size_t remaining_;
};

Rect bounding_rect(const std::vector<std::size_t>& cells, int cols) {
    Rect r{std::numeric_limits<int>::max(), 0, std::numeric_limits<int>::max(), 0};
    for (std::size_t i : cells) {
        const int row = static_cast<int>(i / static_cast<std::size_t>(cols));
        const int col = static_cast<int>(i % static_cast<std::size_t>(cols));
        r.r0 = std::min(r.r0, row);
        r.r1 = std::max(r.r1, row + 1);
        r.c0 = std::min(r.c0, col);
        r.c1 = std::max(r.c1, col + 1);
    }
    return r;
}

}  // namespace

BicriteriaResult bicriteria(const Signal& signal, int k, const BicriteriaConfig& cfg) {
    cfg.validate();
    if (k < 1) fail(ErrorKind::Parameter, "k must be at least 1");
    if (static_cast<std::size_t>(k) > signal.size()) {
        fail(ErrorKind::Parameter, "k exceeds the number of cells");
    }

    BicriteriaResult out;
    out.rows = signal.rows();
    out.cols = signal.cols();
    out.assignment.assign(signal.size(), 0.0);

    const double floor_size = k * std::log2(static_cast<double>(signal.size()));
    Peeler peeler(signal, k, cfg);

    auto collect = [&](Candidate&& cand, int iteration) {
        BicriteriaBlock block;
        block.rect = bounding_rect(cand.cells, signal.cols());
        block.mean = cand.mean;
        block.opt1 = cand.opt1;
        block.iteration = iteration;
        for (std::size_t i : cand.cells) out.assignment[i] = cand.mean;
        block.cells = std::move(cand.cells);
        out.blocks.push_back(std::move(block));
    };

    int iteration = 0;
    while (static_cast<double>(peeler.remaining()) > floor_size) {
        std::vector<Candidate> chosen = peeler.round();
        for (Candidate& cand : chosen) {
            peeler.remove(cand);
            collect(std::move(cand), iteration);
        }
        ++iteration;
    }
    for (std::size_t i : peeler.active_cells()) {
        Candidate cand;
        cand.cells = {i};
        cand.mean = signal.labels()[i];
        collect(std::move(cand), iteration);
    }

    double loss = 0.0;
    const auto labels = signal.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double d = out.assignment[i] - labels[i];
        loss += d * d;
    }
    out.loss = loss;
    out.alpha = cfg.alpha(k, signal.size());
    out.beta_effective = out.blocks.size();
    out.iterations = iteration;
    return out;
}

namespace {

struct SplitChoice {
    double gain = 0.0;
    Axis axis = Axis::Row;
    int threshold = -1;
};

SplitChoice best_split(const PrefixStats& stats, const Rect& rect) {
    SplitChoice best;
    const double whole = stats.opt1_unchecked(rect);
    for (int t = rect.r0 + 1; t < rect.r1; ++t) {
        const double g = whole - stats.opt1_unchecked({rect.r0, t, rect.c0, rect.c1}) -
                         stats.opt1_unchecked({t, rect.r1, rect.c0, rect.c1});
        if (best.threshold < 0 || g > best.gain) best = {g, Axis::Row, t};
    }
    for (int t = rect.c0 + 1; t < rect.c1; ++t) {
        const double g = whole - stats.opt1_unchecked({rect.r0, rect.r1, rect.c0, t}) -
                         stats.opt1_unchecked({rect.r0, rect.r1, t, rect.c1});
        if (best.threshold < 0 || g > best.gain) best = {g, Axis::Col, t};
    }
    return best;
}

}  // namespace

GreedyTreeResult greedy_ktree(const PrefixStats& stats, int k) {
    if (k < 1) fail(ErrorKind::Parameter, "k must be at least 1");

    struct Work {
        Rect rect;
        SplitChoice split;
        int low = -1;
        int high = -1;
    };
    std::vector<Work> work{{stats.bounds(), best_split(stats, stats.bounds())}};
    auto cmp = [&](int a, int b) {
        const double ga = work[static_cast<std::size_t>(a)].split.gain;
        const double gb = work[static_cast<std::size_t>(b)].split.gain;
        return ga < gb || (ga == gb && a > b);
    };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> open(cmp);
    open.push(0);
    int leaves = 1;
    while (leaves < k && !open.empty()) {
        const int top = open.top();
        open.pop();
        const Work w = work[static_cast<std::size_t>(top)];
        if (w.split.threshold < 0 || !(w.split.gain > 0.0)) continue;
        Rect low = w.rect;
        Rect high = w.rect;
        if (w.split.axis == Axis::Row) {
            low.r1 = high.r0 = w.split.threshold;
        } else {
            low.c1 = high.c0 = w.split.threshold;
        }
        const int li = static_cast<int>(work.size());
        work.push_back({low, best_split(stats, low)});
        work.push_back({high, best_split(stats, high)});
        work[static_cast<std::size_t>(top)].low = li;
        work[static_cast<std::size_t>(top)].high = li + 1;
        open.push(li);
        open.push(li + 1);
        ++leaves;
    }

    GreedyTreeResult out;
    std::function<int(int)> emit = [&](int i) -> int {
        const Work& w = work[static_cast<std::size_t>(i)];
        if (w.low < 0) {
            out.loss += stats.opt1_unchecked(w.rect);
            return out.tree.add_leaf(stats.mean(w.rect));
        }
        const int lo = emit(w.low);
        const int hi = emit(w.high);
        return out.tree.add_split(w.split.axis, w.split.threshold, lo, hi);
    };
    out.tree.set_root(emit(0));
    return out;
}

}  // namespace segcoreset
