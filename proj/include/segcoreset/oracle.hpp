#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "segcoreset/coreset.hpp"
#include "segcoreset/grid.hpp"
#include "segcoreset/segmentation.hpp"

namespace segcoreset {

// mt19937_64 with hand-rolled uniform and normal draws, so streams are
// identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    std::uint64_t below(std::uint64_t n);   // [0, n)
    double normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct LeafFit {
    double cost = 0.0;
    double label = 0.0;
};

using LeafCost = std::function<LeafFit(const Rect&)>;

struct OptimalTree {
    KTree tree;
    double loss = 0.0;
};

constexpr std::size_t kDefaultDpCellLimit = 4096;

// Exact minimum over guillotine trees with at most k leaves of the summed
// leaf cost. Throws a size-guard error when rows*cols exceeds `cell_limit`.
OptimalTree optimal_ktree(int rows, int cols, int k, const LeafCost& leaf_cost,
                          std::size_t cell_limit = kDefaultDpCellLimit);

// Leaf cost opt1 with the block mean as label.
OptimalTree optimal_ktree(const Signal& signal, int k,
                          std::size_t cell_limit = kDefaultDpCellLimit);

// Leaf cost read off a coreset: every block contributes its moments scaled
// by the fraction of its area inside the leaf, and the leaf is fitted with
// the resulting weighted mean.
LeafCost coreset_leaf_cost(const Coreset& coreset);

// Random recursive splits of a uniformly chosen splittable leaf until k
// leaves or nothing is splittable. Labels are uniform in [-10, 10).
KTree random_ktree(int rows, int cols, int k, std::uint64_t seed);
KTree random_ktree(int rows, int cols, int k, Rng& rng);

struct SamplePoint {
    int row = 0;
    int col = 0;
    double label = 0.0;
    double weight = 0.0;
};

struct UniformSample {
    int rows = 0;
    int cols = 0;
    std::vector<SamplePoint> points;

    double estimate(const KSegmentation& seg) const;
};

// tau cells without replacement, each weighted rows*cols/tau.
UniformSample random_sample_estimator(const Signal& signal, std::size_t tau, std::uint64_t seed);

struct GeneratedSignal {
    Signal signal;
    KTree truth;
};

// Random guillotine ground truth with `pieces` leaves plus Gaussian noise
// of standard deviation `noise`.
GeneratedSignal generate_signal(int rows, int cols, int pieces, double noise, std::uint64_t seed);

}  // namespace segcoreset
