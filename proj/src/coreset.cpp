#include "segcoreset/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "segcoreset/error.hpp"
#include "segcoreset/partition.hpp"

namespace segcoreset {

const char* to_string(BuildMode mode) noexcept {
    return mode == BuildMode::Theory ? "theory" : "practical";
}

BuildMode parse_build_mode(const std::string& text) {
    if (text == "theory") return BuildMode::Theory;
    if (text == "practical") return BuildMode::Practical;
    fail(ErrorKind::Parameter, "mode must be 'theory' or 'practical', got '" + text + "'");
}

void CoresetConfig::validate() const {
    if (k < 1) fail(ErrorKind::Parameter, "k must be at least 1");
    if (!(eps > 0.0 && eps < 0.25)) fail(ErrorKind::Parameter, "eps must lie in (0, 0.25)");
    if (!(delta >= 1.0)) fail(ErrorKind::Parameter, "delta must be at least 1");
    if (gamma_override && !(*gamma_override > 0.0 && *gamma_override < 1.0)) {
        fail(ErrorKind::Parameter, "gamma must lie in (0, 1)");
    }
    bicriteria.validate();
}

double practical_gamma(double eps, int k) {
    return std::min(0.5, 2.0 * eps / std::sqrt(static_cast<double>(k)));
}

Coreset build_coreset(const Signal& signal, const CoresetConfig& cfg, BuildTrace* trace) {
    cfg.validate();
    if (static_cast<std::size_t>(cfg.k) > signal.size()) {
        fail(ErrorKind::Parameter, "k exceeds the number of cells");
    }
    const PrefixStats stats(signal);
    const double eps = cfg.eps / cfg.delta;

    BuildTrace local;
    double sigma = 0.0;
    double gamma = 0.0;
    if (cfg.mode == BuildMode::Theory) {
        const BicriteriaResult bic = bicriteria(signal, cfg.k, cfg.bicriteria);
        local.seed_loss = bic.loss;
        local.alpha = bic.alpha;
        local.seed_blocks = bic.beta_effective;
        local.beta = bic.beta_effective * bic.beta_effective;
        sigma = bic.loss / bic.alpha;
        gamma = cfg.gamma_override.value_or(eps * eps / (static_cast<double>(local.beta) * cfg.k));
    } else {
        const GreedyTreeResult seed = greedy_ktree(stats, cfg.k);
        local.seed_loss = seed.loss;
        local.alpha = 1.0;
        local.seed_blocks = seed.tree.leaf_count();
        local.beta = 1;
        sigma = seed.loss;
        gamma = cfg.gamma_override.value_or(practical_gamma(eps, cfg.k));
    }

    const BalancedPartition part = partition(stats, gamma, sigma);
    local.threshold = part.threshold;

    Coreset out;
    out.rows = signal.rows();
    out.cols = signal.cols();
    out.k = cfg.k;
    out.eps = cfg.eps;
    out.delta = cfg.delta;
    out.gamma = gamma;
    out.sigma = sigma;
    out.mode = cfg.mode;
    out.blocks.resize(part.rects.size());

    const std::size_t n = part.rects.size();
    const unsigned threads = std::min<std::size_t>(std::max(1u, cfg.threads), std::max<std::size_t>(n, 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out.blocks[i] = compress_block(signal, part.rects[i]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < n; i += threads) {
                    out.blocks[i] = compress_block(signal, part.rects[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    if (trace) *trace = local;
    return out;
}

}  // namespace segcoreset
