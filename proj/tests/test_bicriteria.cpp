#include <doctest.h>

#include <cmath>

#include "segcoreset/bicriteria.hpp"
#include "segcoreset/error.hpp"
#include "segcoreset/oracle.hpp"
#include "support.hpp"

using namespace segcoreset;
using support::make_signal;

namespace {

void check_result(const Signal& s, const BicriteriaResult& res) {
    std::vector<int> hits(s.size(), 0);
    double loss = 0;
    for (const BicriteriaBlock& b : res.blocks) {
        REQUIRE(!b.cells.empty());
        double mean = 0;
        for (std::size_t i : b.cells) {
            ++hits[i];
            mean += s.labels()[i];
            const int r = static_cast<int>(i / static_cast<std::size_t>(s.cols()));
            const int c = static_cast<int>(i % static_cast<std::size_t>(s.cols()));
            CHECK(b.rect.contains(r, c));
        }
        mean /= static_cast<double>(b.cells.size());
        double ss = 0;
        for (std::size_t i : b.cells) ss += (s.labels()[i] - mean) * (s.labels()[i] - mean);
        CHECK(b.mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(b.opt1 == doctest::Approx(ss).epsilon(1e-9).scale(1.0));
        for (std::size_t i : b.cells) CHECK(res.assignment[i] == b.mean);
        loss += ss;
    }
    for (int h : hits) CHECK(h == 1);
    double direct = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        direct += (res.assignment[i] - s.labels()[i]) * (res.assignment[i] - s.labels()[i]);
    }
    CHECK(res.loss == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
    CHECK(res.loss == doctest::Approx(loss).epsilon(1e-9).scale(1.0));
    CHECK(res.beta_effective == res.blocks.size());
    CHECK(res.alpha >= 1.0);
}

}  // namespace

TEST_CASE("constant signals cost nothing") {
    const Signal s = make_signal(6, 9, std::vector<double>(54, 3.5));
    for (int k : {1, 2, 5}) {
        const BicriteriaResult res = bicriteria(s, k);
        CHECK(res.loss == 0.0);
        check_result(s, res);
    }
}

TEST_CASE("k equal to the cell count gives zero loss") {
    const Signal s = support::uniform_signal(3, 4, 2);
    const BicriteriaResult res = bicriteria(s, 12);
    CHECK(res.loss == 0.0);
    check_result(s, res);
}

TEST_CASE("collected blocks partition the grid and carry their own means") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Signal s = generate_signal(16, 16, 4, 0.5, seed).signal;
        for (int k : {1, 2, 4}) check_result(s, bicriteria(s, k));
    }
    // Wide rows give multi-cell intervals under the default constants.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Signal s = generate_signal(4, 64, 3, 0.3, 50 + seed).signal;
        const BicriteriaResult res = bicriteria(s, 1);
        check_result(s, res);
        bool multi = false;
        for (const auto& b : res.blocks) multi = multi || b.cells.size() > 1;
        CHECK(multi);
    }
}

TEST_CASE("first round cost stays below the optimum on small grids") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Signal s = generate_signal(8, 8, 3, 0.5, 200 + seed).signal;
        for (int k = 1; k <= 3; ++k) {
            const BicriteriaResult res = bicriteria(s, k);
            double first = 0;
            for (const auto& b : res.blocks) {
                if (b.iteration == 0) first += b.opt1;
            }
            const double opt = optimal_ktree(s, k).loss;
            CHECK(first <= opt + 1e-9);
        }
    }
}

TEST_CASE("loss stays within the empirical factor of the optimum") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Signal s = generate_signal(16, 16, 4, 0.5, 300 + seed).signal;
        for (int k : {2, 3}) {
            const double opt = optimal_ktree(s, k).loss;
            const double bound = 4.0 * k * std::log2(256.0) * opt;
            CHECK(bicriteria(s, k).loss <= bound);
        }
    }
}

TEST_CASE("bicriteria is deterministic") {
    const Signal s = generate_signal(12, 20, 5, 1.0, 9).signal;
    const BicriteriaResult a = bicriteria(s, 3);
    const BicriteriaResult b = bicriteria(s, 3);
    CHECK(a.assignment == b.assignment);
    CHECK(a.loss == b.loss);
    REQUIRE(a.blocks.size() == b.blocks.size());
    for (std::size_t i = 0; i < a.blocks.size(); ++i) CHECK(a.blocks[i].cells == b.blocks[i].cells);
}

TEST_CASE("alpha follows the configured formula") {
    BicriteriaConfig cfg;
    CHECK(cfg.alpha(4, 256) == doctest::Approx(32.0));
    cfg.c_alpha = 0.5;
    CHECK(cfg.alpha(4, 256) == doctest::Approx(16.0));
    cfg.alpha_formula = [](int, std::size_t) { return 0.25; };
    CHECK(cfg.alpha(4, 256) == 1.0);
}

TEST_CASE("bicriteria parameter errors") {
    const Signal s = support::uniform_signal(4, 4, 1);
    CHECK_THROWS_AS(bicriteria(s, 0), Error);
    CHECK_THROWS_AS(bicriteria(s, 17), Error);
    BicriteriaConfig bad;
    bad.nu = 50;
    CHECK_THROWS_AS(bicriteria(s, 1, bad), Error);
    bad = {};
    bad.gamma_b = 7.5;
    CHECK_THROWS_AS(bicriteria(s, 1, bad), Error);
}

TEST_CASE("greedy tree") {
    const Signal s = generate_signal(16, 16, 6, 0.5, 4).signal;
    const PrefixStats stats(s);
    GreedyTreeResult one = greedy_ktree(stats, 1);
    CHECK(one.tree.leaf_count() == 1);
    CHECK(one.loss == doctest::Approx(opt1(stats, s.bounds())));

    double prev = one.loss;
    for (int k = 2; k <= 12; ++k) {
        const GreedyTreeResult g = greedy_ktree(stats, k);
        CHECK(g.tree.leaf_count() <= static_cast<std::size_t>(k));
        const KSegmentation seg = ktree_to_segmentation(g.tree, 16, 16);
        CHECK(g.loss == doctest::Approx(exact_loss(stats, seg)).epsilon(1e-9));
        CHECK(g.loss <= prev + 1e-9);
        prev = g.loss;
    }
    for (int k = 1; k <= 4; ++k) {
        CHECK(greedy_ktree(stats, k).loss + 1e-9 >= optimal_ktree(s, k).loss);
    }

    // Two constant halves are found in one split.
    std::vector<double> v(16);
    for (int i = 0; i < 16; ++i) v[static_cast<std::size_t>(i)] = (i % 4) < 2 ? 0.0 : 9.0;
    const GreedyTreeResult h = greedy_ktree(PrefixStats(make_signal(4, 4, v)), 2);
    CHECK(h.loss == 0.0);

    // No split is made once nothing improves.
    const GreedyTreeResult flat = greedy_ktree(PrefixStats(make_signal(3, 3, std::vector<double>(9, 1.0))), 5);
    CHECK(flat.tree.leaf_count() == 1);
}
