#include "segcoreset/partition.hpp"

#include <cmath>
#include <limits>

#include "segcoreset/error.hpp"

namespace segcoreset {

namespace {

// Returns false once `out` holds more than `limit` rects.
bool sweep(const PrefixStats& stats, const Rect& view, double sigma, std::size_t limit,
           std::vector<Rect>& out) {
    int c = view.c0;
    while (c < view.c1) {
        const Rect column{view.r0, view.r1, c, c + 1};
        if (stats.opt1_unchecked(column) > sigma) {
            // Row sweep over the single column; single cells always fit.
            int r = view.r0;
            while (r < view.r1) {
                int e = r + 1;
                while (e < view.r1 && stats.opt1_unchecked({r, e + 1, c, c + 1}) <= sigma) ++e;
                out.push_back({r, e, c, c + 1});
                if (out.size() > limit) return false;
                r = e;
            }
            ++c;
            continue;
        }
        int e = c + 1;
        while (e < view.c1 && stats.opt1_unchecked({view.r0, view.r1, c, e + 1}) <= sigma) ++e;
        out.push_back({view.r0, view.r1, c, e});
        if (out.size() > limit) return false;
        c = e;
    }
    return true;
}

}  // namespace

std::vector<Rect> slice_partition(const PrefixStats& stats, const Rect& view, double sigma,
                                  std::size_t limit) {
    if (!(sigma >= 0.0)) fail(ErrorKind::Parameter, "sigma must be nonnegative");
    if (view.empty() || !stats.bounds().contains(view)) {
        fail(ErrorKind::Bounds, "view " + to_string(view) + " outside grid");
    }
    std::vector<Rect> out;
    sweep(stats, view, sigma, limit, out);
    return out;
}

BalancedPartition partition(const PrefixStats& stats, double gamma, double sigma) {
    if (!(gamma > 0.0 && gamma < 1.0)) fail(ErrorKind::Parameter, "gamma must lie in (0, 1)");
    if (!(sigma >= 0.0)) fail(ErrorKind::Parameter, "sigma must be nonnegative");

    BalancedPartition result;
    result.threshold = gamma * gamma * sigma;
    const double cap_real = std::floor(1.0 / gamma);
    const std::size_t cap = cap_real >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2)
                                ? std::numeric_limits<std::size_t>::max() / 2
                                : static_cast<std::size_t>(cap_real);

    const int n = stats.rows();
    const int m = stats.cols();
    const double t = result.threshold;
    std::vector<Rect> current;
    std::vector<Rect> candidate;
    int r = 0;
    while (r < n) {
        current.clear();
        sweep(stats, {r, r + 1, 0, m}, t, std::numeric_limits<std::size_t>::max(), current);
        if (current.size() > cap) {
            result.rects.insert(result.rects.end(), current.begin(), current.end());
            ++r;
            continue;
        }
        int e = r + 1;
        while (e < n) {
            candidate.clear();
            if (!sweep(stats, {r, e + 1, 0, m}, t, cap, candidate)) break;
            current.swap(candidate);
            ++e;
        }
        result.rects.insert(result.rects.end(), current.begin(), current.end());
        r = e;
    }
    return result;
}

}  // namespace segcoreset
