#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segcoreset/coreset.hpp"
#include "segcoreset/grid.hpp"
#include "segcoreset/segmentation.hpp"

namespace segcoreset {

// |estimate - exact| / exact; 0 when both are 0 and +inf when only exact is.
double relative_error(double estimate, double exact);

// `count` random k-trees, each with a leaf budget drawn uniformly from
// [1, kmax], from one seeded stream.
std::vector<KSegmentation> random_queries(int rows, int cols, int kmax, int count, std::uint64_t seed);

struct ErrorSummary {
    double max = 0.0;
    double median = 0.0;
};

ErrorSummary summarize(std::vector<double> errors);

struct CompareOptions {
    int k = 1;
    std::vector<double> eps_list;
    int queries = 100;
    std::uint64_t seed = 0;
    BuildMode mode = BuildMode::Practical;
    std::optional<double> gamma_override;
    double delta = 1.0;
    unsigned threads = 0;
};

struct CompareRow {
    double eps = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
    std::size_t blocks = 0;
    std::size_t size = 0;
    double size_ratio = 0.0;
    ErrorSummary coreset;
    ErrorSummary sample;  // uniform sample of the same size, capped at rows*cols
    double build_ms = 0.0;
    double query_us = 0.0;  // mean coreset evaluation time per query
};

std::vector<CompareRow> compare(const Signal& signal, const CompareOptions& opts);

// Fixed-width text table. Timing columns are appended only when asked for,
// so the default output is reproducible byte for byte.
std::string format_compare_table(const std::vector<CompareRow>& rows, bool timing);

}  // namespace segcoreset
