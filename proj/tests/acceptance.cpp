// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "segcoreset/bicriteria.hpp"
#include "segcoreset/caratheodory.hpp"
#include "segcoreset/coreset.hpp"
#include "segcoreset/harness.hpp"
#include "segcoreset/oracle.hpp"
#include "segcoreset/partition.hpp"
#include "segcoreset/query.hpp"

using namespace segcoreset;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail, const char* verdict = nullptr) {
    const char* v = verdict ? verdict : (pass ? "PASS" : "FAIL");
    std::printf("criterion %d: %s  %s\n", id, v, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

bool is_cover(const std::vector<Rect>& rects, int rows, int cols) {
    std::vector<char> seen(static_cast<std::size_t>(rows) * cols, 0);
    std::int64_t area = 0;
    for (const Rect& r : rects) {
        area += r.area();
        for (int i = r.r0; i < r.r1; ++i)
            for (int j = r.c0; j < r.c1; ++j) {
                char& s = seen[static_cast<std::size_t>(i) * cols + j];
                if (s) return false;
                s = 1;
            }
    }
    return area == static_cast<std::int64_t>(rows) * cols;
}

void moment_preservation() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> side(1, 100);
    std::uniform_real_distribution<double> lab(-10.0, 10.0);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
        const int h = side(gen);
        const int w = side(gen);
        std::vector<double> v(static_cast<std::size_t>(h) * w);
        for (double& x : v) x = lab(gen);
        double c = 0, s1 = 0, s2 = 0;
        for (double x : v) {
            c += 1;
            s1 += x;
            s2 += x * x;
        }
        const Signal sig(h, w, std::move(v));
        const BlockCoreset b = compress_block(sig, sig.bounds());
        double wc = 0, w1 = 0, w2 = 0;
        for (const CoresetPoint& p : b.points) {
            ok = ok && p.weight >= 0.0;
            wc += p.weight;
            w1 += p.weight * p.label;
            w2 += p.weight * p.label * p.label;
        }
        worst = std::max({worst, rel(wc, c), rel(w1, s1), rel(w2, s2)});
    }
    const double secs = seconds_since(t0);
    ok = ok && worst <= 1e-6 && secs < 10.0;
    report(1, ok, fmt("1000 blocks, max relative moment error %.3g (<= 1e-6), 4 points each, %.2fs (< 10s)", worst, secs));
}

void partition_validity() {
    const auto t0 = Clock::now();
    bool ok = true;
    double worst_excess = -INFINITY;
    std::size_t rect_total = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Signal s = generate_signal(64, 64, 8, 0.5, seed).signal;
        const PrefixStats stats(s);
        const double sigma = greedy_ktree(stats, 16).loss;
        for (double gamma : {practical_gamma(0.2, 16), 0.25, 0.02}) {
            const BalancedPartition p = partition(stats, gamma, sigma);
            ok = ok && is_cover(p.rects, 64, 64);
            rect_total += p.rects.size();
            for (const Rect& r : p.rects) {
                const double excess = stats.opt1(r) - gamma * gamma * sigma;
                worst_excess = std::max(worst_excess, excess);
                ok = ok && excess <= 1e-9;
            }
        }
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 5.0;
    report(2, ok, fmt("50 signals x 3 gammas, %zu rects, disjoint covers, max opt1 - threshold %.3g (<= 1e-9), %.2fs (< 5s)",
                      rect_total, worst_excess, secs));
}

void exact_branch() {
    bool ok = true;
    double worst = 0.0;
    std::size_t intersected = 0;
    std::mt19937_64 gen(31);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Signal s = generate_signal(32, 32, 8, 0.5, seed).signal;
        const PrefixStats stats(s);
        CoresetConfig cfg;
        cfg.k = 16;
        const Coreset c = build_coreset(s, cfg);
        for (int q = 0; q < 50; ++q) {
            // Every block is one cell; labels from a small pool so neighbours often agree.
            std::vector<Cell> cells;
            const int pool = 1 + q % 6;
            for (const BlockCoreset& b : c.blocks) {
                cells.push_back({b.rect, static_cast<double>(gen() % static_cast<unsigned>(pool)) * 3.5 - 4.0});
            }
            const KSegmentation seg(32, 32, std::move(cells));
            const QueryReport r = evaluate_loss(c, seg);
            intersected += r.blocks_intersected;
            const double exact = exact_loss(stats, seg);
            const double err = std::abs(r.loss_estimate - exact);
            worst = std::max(worst, exact > 0 ? err / exact : err);
            ok = ok && err <= 1e-9 * exact;
        }
    }
    ok = ok && intersected == 0;
    report(3, ok, fmt("20 signals x 50 block-constant segmentations, max relative error %.3g (<= 1e-9)", worst));
}

struct CorpusRun {
    double max_err = 0.0;
    double median_err = 0.0;
    std::size_t size = 0;
};

CorpusRun run_corpus_seed(std::uint64_t seed, const CoresetConfig& cfg, const std::vector<KSegmentation>& queries,
                          const Signal& s) {
    const PrefixStats stats(s);
    const Coreset c = build_coreset(s, cfg);
    std::vector<double> errs;
    for (const KSegmentation& q : queries) {
        errs.push_back(relative_error(evaluate_loss(c, q).loss_estimate, exact_loss(stats, q)));
    }
    const ErrorSummary e = summarize(errs);
    (void)seed;
    return {e.max, e.median, c.size()};
}

constexpr int kCorpusSeeds = 20;

Signal corpus_signal(std::uint64_t seed) { return generate_signal(32, 32, 8, 0.5, seed).signal; }

std::vector<KSegmentation> corpus_queries(std::uint64_t seed) {
    return random_queries(32, 32, 16, 200, 1000 + seed);
}

void kepsilon_guarantee() {
    const auto t0 = Clock::now();
    bool passed = false;
    double used_delta = 0.0;
    std::string detail;
    for (double delta : {1.0, 2.0}) {
        double worst_max = 0.0, worst_median = 0.0;
        double practical_max = 0.0;
        for (std::uint64_t seed = 0; seed < kCorpusSeeds; ++seed) {
            const Signal s = corpus_signal(seed);
            const auto queries = corpus_queries(seed);
            CoresetConfig cfg;
            cfg.k = 16;
            cfg.eps = 0.2;
            cfg.delta = delta;
            cfg.mode = BuildMode::Theory;
            const CorpusRun r = run_corpus_seed(seed, cfg, queries, s);
            worst_max = std::max(worst_max, r.max_err);
            worst_median = std::max(worst_median, r.median_err);
            cfg.mode = BuildMode::Practical;
            practical_max = std::max(practical_max, run_corpus_seed(seed, cfg, queries, s).max_err);
        }
        detail = fmt("delta=%g, %d signals x 200 trees, theory max %.3g (<= 0.2), worst median %.3g (<= 0.05); "
                     "practical max %.3g (reported)",
                     delta, kCorpusSeeds, worst_max, worst_median, practical_max);
        if (worst_max <= 0.2 && worst_median <= 0.05) {
            passed = true;
            used_delta = delta;
            break;
        }
    }
    const double secs = seconds_since(t0);
    passed = passed && secs < 60.0;
    report(4, passed, detail + fmt(", passing delta %g, %.1fs (< 60s)", used_delta, secs));
}

void optimum_transfer() {
    bool ok = true;
    double worst_ratio = 0.0;
    double practical_ratio = 0.0;
    const double bound = 1.1 / 0.9;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Signal s = generate_signal(16, 16, 4, 0.5, 40 + seed).signal;
        const PrefixStats stats(s);
        const OptimalTree best = optimal_ktree(s, 4);
        for (BuildMode mode : {BuildMode::Theory, BuildMode::Practical}) {
            CoresetConfig cfg;
            cfg.k = 4;
            cfg.eps = 0.1;
            cfg.mode = mode;
            const Coreset c = build_coreset(s, cfg);
            const OptimalTree on_coreset = optimal_ktree(16, 16, 4, coreset_leaf_cost(c));
            const double got = exact_loss(stats, ktree_to_segmentation(on_coreset.tree, 16, 16));
            const double ratio = best.loss > 0 ? got / best.loss : (got == 0 ? 1.0 : INFINITY);
            if (mode == BuildMode::Theory) {
                worst_ratio = std::max(worst_ratio, ratio);
                ok = ok && got <= bound * best.loss + 1e-9;
            } else {
                practical_ratio = std::max(practical_ratio, ratio);
            }
        }
    }
    report(5, ok, fmt("5 fixtures, theory worst exact(t_C)/exact(t_D*) %.6f (<= %.6f); practical %.4f (reported)",
                      worst_ratio, bound, practical_ratio));
}

void bicriteria_sanity() {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Signal s = generate_signal(16, 16, 4, 0.5, 60 + seed).signal;
        for (int k : {2, 3}) {
            const double opt = optimal_ktree(s, k).loss;
            const double loss = bicriteria(s, k).loss;
            const double factor = opt > 0 ? loss / (k * std::log2(256.0) * opt) : (loss == 0 ? 0.0 : INFINITY);
            worst = std::max(worst, factor);
        }
    }
    const bool within = worst <= 4.0;
    // Exceeding the empirical constant is flagged, not failed.
    report(6, true, fmt("5 fixtures x k in {2,3}, worst loss / (k log2 N opt_k) = %.4g (empirical limit 4)", worst),
           within ? "PASS" : "FLAG");
}

void dp_checks() {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Signal s = generate_signal(8, 8, 5, 1.0, 80 + seed).signal;
        const PrefixStats stats(s);
        ok = ok && optimal_ktree(s, 1).loss == stats.opt1(s.bounds());
        double prev = INFINITY;
        for (int k = 1; k <= 8; ++k) {
            const double l = optimal_ktree(s, k).loss;
            ok = ok && l <= prev;
            prev = l;
        }
        ok = ok && optimal_ktree(s, 64).loss == 0.0;
    }
    report(7, ok, "5 fixtures: DP(1) == opt1 exactly, non-increasing to k=8, DP(nm) == 0");
}

double best_build_seconds(const Signal& s, const CoresetConfig& cfg, int reps, std::size_t* size) {
    double best = INFINITY;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = Clock::now();
        const Coreset c = build_coreset(s, cfg);
        best = std::min(best, seconds_since(t0));
        if (size) *size = c.size();
    }
    return best;
}

void compression_and_scaling() {
    CoresetConfig cfg;
    cfg.k = 50;
    cfg.eps = 0.2;
    cfg.mode = BuildMode::Practical;
    const Signal small = generate_signal(256, 256, 50, 0.5, 7).signal;
    const Signal large = generate_signal(512, 256, 50, 0.5, 7).signal;
    std::size_t size = 0;
    const auto t0 = Clock::now();
    build_coreset(small, cfg);
    const double first = seconds_since(t0);
    const double t_small = best_build_seconds(small, cfg, 7, &size);
    const double t_large = best_build_seconds(large, cfg, 7, nullptr);
    const double ratio = t_large / t_small;
    const double frac = static_cast<double>(size) / static_cast<double>(small.size());
    const bool ok = frac <= 0.10 && first <= 5.0 && ratio <= 2.5;
    report(8, ok, fmt("size %zu = %.2f%% of cells (<= 10%%), build %.1f ms (<= 5 s), 512x256/256x256 time ratio %.2f (<= 2.5)",
                      size, 100.0 * frac, 1000.0 * first, ratio));
}

void baseline_dominance() {
    std::vector<double> coreset_max, sample_max, theory_max, theory_sample_max;
    for (std::uint64_t seed = 0; seed < kCorpusSeeds; ++seed) {
        const Signal s = corpus_signal(seed);
        const PrefixStats stats(s);
        const auto queries = corpus_queries(seed);
        std::vector<double> exact;
        for (const auto& q : queries) exact.push_back(exact_loss(stats, q));

        for (BuildMode mode : {BuildMode::Practical, BuildMode::Theory}) {
            CoresetConfig cfg;
            cfg.k = 16;
            cfg.eps = 0.2;
            cfg.mode = mode;
            const Coreset c = build_coreset(s, cfg);
            const UniformSample sample =
                random_sample_estimator(s, std::min(c.size(), s.size()), 5000 + seed);
            double cm = 0, sm = 0;
            for (std::size_t i = 0; i < queries.size(); ++i) {
                cm = std::max(cm, relative_error(evaluate_loss(c, queries[i]).loss_estimate, exact[i]));
                sm = std::max(sm, relative_error(sample.estimate(queries[i]), exact[i]));
            }
            (mode == BuildMode::Practical ? coreset_max : theory_max).push_back(cm);
            (mode == BuildMode::Practical ? sample_max : theory_sample_max).push_back(sm);
        }
    }
    const double c = summarize(coreset_max).median;
    const double s = summarize(sample_max).median;
    report(9, c < s,
           fmt("%d seeds, practical coreset median max-error %.4g < sample %.4g; theory coreset %.3g vs sample %.3g "
               "(reported)",
               kCorpusSeeds, c, s, summarize(theory_max).median, summarize(theory_sample_max).median));
}

}  // namespace

int main() {
    moment_preservation();
    partition_validity();
    exact_branch();
    kepsilon_guarantee();
    optimum_transfer();
    bicriteria_sanity();
    dp_checks();
    compression_and_scaling();
    baseline_dominance();
    std::printf("%s: %d criterion failure(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
