#pragma once

// Brute-force references the tests compare the library against. None of
// these use prefix sums or any library routine beyond accessors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "segcoreset/grid.hpp"
#include "segcoreset/segmentation.hpp"

namespace support {

using segcoreset::Rect;
using segcoreset::Signal;

inline Signal make_signal(int rows, int cols, std::vector<double> v) {
    return Signal(rows, cols, std::move(v));
}

inline Signal uniform_signal(int rows, int cols, std::uint64_t seed, double lo = -10.0, double hi = 10.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(rows) * cols);
    for (double& x : v) x = dist(gen);
    return Signal(rows, cols, std::move(v));
}

inline Rect random_rect(std::mt19937_64& gen, int rows, int cols) {
    std::uniform_int_distribution<int> rr(0, rows - 1), cc(0, cols - 1);
    int a = rr(gen), b = rr(gen), c = cc(gen), d = cc(gen);
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    return {a, b + 1, c, d + 1};
}

struct NaiveMoments {
    double count = 0, sum = 0, sum_sq = 0;
};

inline NaiveMoments naive_moments(const Signal& s, const Rect& r) {
    NaiveMoments m;
    for (int i = r.r0; i < r.r1; ++i) {
        for (int j = r.c0; j < r.c1; ++j) {
            m.count += 1;
            m.sum += s.at(i, j);
            m.sum_sq += s.at(i, j) * s.at(i, j);
        }
    }
    return m;
}

// Two-pass variance times area.
inline double naive_opt1(const Signal& s, const Rect& r) {
    double mean = 0;
    for (int i = r.r0; i < r.r1; ++i)
        for (int j = r.c0; j < r.c1; ++j) mean += s.at(i, j);
    mean /= static_cast<double>(r.area());
    double acc = 0;
    for (int i = r.r0; i < r.r1; ++i)
        for (int j = r.c0; j < r.c1; ++j) acc += (s.at(i, j) - mean) * (s.at(i, j) - mean);
    return acc;
}

inline double naive_loss(const Signal& s, const segcoreset::KSegmentation& seg) {
    double acc = 0;
    for (int i = 0; i < s.rows(); ++i) {
        for (int j = 0; j < s.cols(); ++j) {
            const double d = seg.value_at(i, j) - s.at(i, j);
            acc += d * d;
        }
    }
    return acc;
}

// Exhaustive guillotine search without memoisation: min over leaf or every
// split and budget split. Only usable on tiny grids.
inline double brute_opt_tree(const Signal& s, const Rect& r, int k) {
    double best = naive_opt1(s, r);
    if (k < 2) return best;
    for (int t = r.r0 + 1; t < r.r1; ++t) {
        for (int i = 1; i < k; ++i) {
            best = std::min(best, brute_opt_tree(s, {r.r0, t, r.c0, r.c1}, i) +
                                      brute_opt_tree(s, {t, r.r1, r.c0, r.c1}, k - i));
        }
    }
    for (int t = r.c0 + 1; t < r.c1; ++t) {
        for (int i = 1; i < k; ++i) {
            best = std::min(best, brute_opt_tree(s, {r.r0, r.r1, r.c0, t}, i) +
                                      brute_opt_tree(s, {r.r0, r.r1, t, r.c1}, k - i));
        }
    }
    return best;
}

inline bool close_rel(double a, double b, double tol) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= tol * scale;
}

// Pairwise disjoint and covering the grid.
inline bool is_partition(const std::vector<Rect>& rects, int rows, int cols) {
    std::vector<int> hits(static_cast<std::size_t>(rows) * cols, 0);
    for (const Rect& r : rects) {
        if (r.empty() || r.r0 < 0 || r.c0 < 0 || r.r1 > rows || r.c1 > cols) return false;
        for (int i = r.r0; i < r.r1; ++i)
            for (int j = r.c0; j < r.c1; ++j) ++hits[static_cast<std::size_t>(i) * cols + j];
    }
    return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

}  // namespace support
