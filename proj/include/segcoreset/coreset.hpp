#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "segcoreset/bicriteria.hpp"
#include "segcoreset/caratheodory.hpp"
#include "segcoreset/grid.hpp"

namespace segcoreset {

enum class BuildMode { Theory, Practical };

const char* to_string(BuildMode mode) noexcept;
BuildMode parse_build_mode(const std::string& text);

struct CoresetConfig {
    int k = 1;
    double eps = 0.2;
    BuildMode mode = BuildMode::Practical;
    double delta = 1.0;
    std::optional<double> gamma_override;
    BicriteriaConfig bicriteria;
    // Worker threads for per-block compression; 0 or 1 runs sequentially.
    unsigned threads = 0;

    void validate() const;
};

// Weighted point set: four points per balanced-partition rect, blocks in
// partition order.
struct Coreset {
    int rows = 0;
    int cols = 0;
    int k = 1;
    double eps = 0.0;
    double delta = 1.0;
    double gamma = 0.0;
    double sigma = 0.0;
    BuildMode mode = BuildMode::Practical;
    std::vector<BlockCoreset> blocks;

    std::size_t size() const noexcept { return 4 * blocks.size(); }
    std::size_t cells() const noexcept {
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }
    bool sigma_zero() const noexcept { return sigma == 0.0; }

    friend bool operator==(const Coreset&, const Coreset&) = default;
};

// Everything the builder computed on the way, for reporting.
struct BuildTrace {
    double seed_loss = 0.0;     // loss of the sigma seed
    double alpha = 1.0;
    std::size_t beta = 1;       // beta used in the theory-mode gamma
    std::size_t seed_blocks = 0;
    double threshold = 0.0;     // gamma^2 * sigma
};

// Practical-mode default gamma for a target error eps' and budget k.
double practical_gamma(double eps, int k);

Coreset build_coreset(const Signal& signal, const CoresetConfig& cfg, BuildTrace* trace = nullptr);

}  // namespace segcoreset
