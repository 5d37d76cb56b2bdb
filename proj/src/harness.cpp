#include "segcoreset/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "segcoreset/error.hpp"
#include "segcoreset/oracle.hpp"
#include "segcoreset/query.hpp"

namespace segcoreset {

double relative_error(double estimate, double exact) {
    if (exact == 0.0) return estimate == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(estimate - exact) / exact;
}

std::vector<KSegmentation> random_queries(int rows, int cols, int kmax, int count, std::uint64_t seed) {
    if (kmax < 1) fail(ErrorKind::Parameter, "k must be at least 1");
    if (count < 0) fail(ErrorKind::Parameter, "query count must be nonnegative");
    Rng rng(seed);
    std::vector<KSegmentation> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int q = 0; q < count; ++q) {
        const int leaves = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(kmax)));
        out.push_back(ktree_to_segmentation(random_ktree(rows, cols, leaves, rng), rows, cols));
    }
    return out;
}

ErrorSummary summarize(std::vector<double> errors) {
    ErrorSummary s;
    if (errors.empty()) return s;
    std::sort(errors.begin(), errors.end());
    s.max = errors.back();
    const std::size_t n = errors.size();
    s.median = n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
    return s;
}

std::vector<CompareRow> compare(const Signal& signal, const CompareOptions& opts) {
    if (opts.eps_list.empty()) fail(ErrorKind::Parameter, "eps list is empty");
    if (opts.queries < 1) fail(ErrorKind::Parameter, "need at least one query");
    using Clock = std::chrono::steady_clock;

    const PrefixStats stats(signal);
    const std::vector<KSegmentation> queries =
        random_queries(signal.rows(), signal.cols(), opts.k, opts.queries, opts.seed);
    std::vector<double> exact;
    exact.reserve(queries.size());
    for (const KSegmentation& q : queries) exact.push_back(exact_loss(stats, q));

    std::vector<CompareRow> rows;
    for (std::size_t i = 0; i < opts.eps_list.size(); ++i) {
        CoresetConfig cfg;
        cfg.k = opts.k;
        cfg.eps = opts.eps_list[i];
        cfg.mode = opts.mode;
        cfg.delta = opts.delta;
        cfg.gamma_override = opts.gamma_override;
        cfg.threads = opts.threads;

        CompareRow row;
        row.eps = cfg.eps;
        const auto t0 = Clock::now();
        const Coreset coreset = build_coreset(signal, cfg);
        const auto t1 = Clock::now();
        row.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        row.gamma = coreset.gamma;
        row.sigma = coreset.sigma;
        row.blocks = coreset.blocks.size();
        row.size = coreset.size();
        row.size_ratio = static_cast<double>(row.size) / static_cast<double>(signal.size());

        std::vector<double> errs;
        errs.reserve(queries.size());
        const auto q0 = Clock::now();
        for (std::size_t j = 0; j < queries.size(); ++j) {
            errs.push_back(relative_error(evaluate_loss(coreset, queries[j]).loss_estimate, exact[j]));
        }
        const auto q1 = Clock::now();
        row.query_us = std::chrono::duration<double, std::micro>(q1 - q0).count() /
                       static_cast<double>(queries.size());
        row.coreset = summarize(std::move(errs));

        const std::size_t tau = std::min(row.size, signal.size());
        const UniformSample sample =
            random_sample_estimator(signal, tau, opts.seed + 0x9E3779B97F4A7C15ULL * (i + 1));
        std::vector<double> serrs;
        serrs.reserve(queries.size());
        for (std::size_t j = 0; j < queries.size(); ++j) {
            serrs.push_back(relative_error(sample.estimate(queries[j]), exact[j]));
        }
        row.sample = summarize(std::move(serrs));
        rows.push_back(row);
    }
    return rows;
}

std::string format_compare_table(const std::vector<CompareRow>& rows, bool timing) {
    std::string out;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-8s %-10s %-8s %-10s %-12s %-12s %-12s %-12s", "eps", "gamma", "size",
                  "ratio", "max_err", "median_err", "sample_max", "sample_med");
    out += buf;
    if (timing) {
        std::snprintf(buf, sizeof buf, " %-10s %-10s", "build_ms", "query_us");
        out += buf;
    }
    while (out.back() == ' ') out.pop_back();
    out += '\n';
    for (const CompareRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%-8.4g %-10.4g %-8zu %-10.4g %-12.4e %-12.4e %-12.4e %-12.4e", r.eps,
                      r.gamma, r.size, r.size_ratio, r.coreset.max, r.coreset.median, r.sample.max,
                      r.sample.median);
        out += buf;
        if (timing) {
            std::snprintf(buf, sizeof buf, " %-10.3f %-10.3f", r.build_ms, r.query_us);
            out += buf;
        }
        // Trailing padding is noise in a diff.
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

}  // namespace segcoreset
