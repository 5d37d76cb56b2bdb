#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "segcoreset/grid.hpp"
#include "segcoreset/segmentation.hpp"

namespace segcoreset {

struct BicriteriaConfig {
    // Heavy-row fraction is 1/(nu*k); must exceed 50.
    double nu = 64.0;
    // A heavy row is cut into gamma_b*k intervals; must be at least 8.
    double gamma_b = 8.0;
    // Multiplier on k*log2(N) when reporting alpha.
    double c_alpha = 1.0;
    // Optional override for alpha as a function of (k, N); floored at 1.
    std::function<double(int, std::size_t)> alpha_formula;

    void validate() const;
    double alpha(int k, std::size_t n_cells) const;
};

// A collected block: the cells of `rect` that were still active when the
// block was collected.
struct BicriteriaBlock {
    Rect rect;
    std::vector<std::size_t> cells;  // row-major cell indices
    double mean = 0.0;
    double opt1 = 0.0;
    int iteration = 0;
};

struct BicriteriaResult {
    int rows = 0;
    int cols = 0;
    std::vector<double> assignment;  // row-major fitted value per cell
    std::vector<BicriteriaBlock> blocks;
    double loss = 0.0;
    double alpha = 1.0;
    std::size_t beta_effective = 0;
    int iterations = 0;
};

// Iterative peeling: each round collects low-opt1 blocks from the
// surviving cells until at most k*log2(N) cells remain, which then become
// singleton blocks. Each collected block is fitted with its own mean.
BicriteriaResult bicriteria(const Signal& signal, int k, const BicriteriaConfig& cfg = {});

// Greedy best-first guillotine k-tree (each step applies the split with
// the largest loss reduction). Used as the practical sigma seed.
struct GreedyTreeResult {
    KTree tree;
    double loss = 0.0;
};

GreedyTreeResult greedy_ktree(const PrefixStats& stats, int k);

}  // namespace segcoreset
