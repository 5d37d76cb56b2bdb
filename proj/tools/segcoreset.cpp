// Command-line front end over the segcoreset C API.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "segcoreset/segcoreset.h"

namespace {

struct Failure {
    sc_status status;
};

void check(sc_status s) {
    if (s != SC_OK) throw Failure{s};
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

using SignalPtr = std::unique_ptr<sc_signal, Deleter<sc_signal, sc_signal_free>>;
using CoresetPtr = std::unique_ptr<sc_coreset, Deleter<sc_coreset, sc_coreset_free>>;
using SegPtr = std::unique_ptr<sc_segmentation, Deleter<sc_segmentation, sc_segmentation_free>>;
using TextPtr = std::unique_ptr<char, Deleter<char, sc_string_free>>;

SignalPtr load_signal(const std::string& path, const std::string& format) {
    sc_signal* s = nullptr;
    check(sc_signal_load(path.c_str(), format.empty() ? nullptr : format.c_str(), &s));
    return SignalPtr(s);
}

sc_mode parse_mode(const std::string& text) {
    return text == "theory" ? SC_MODE_THEORY : SC_MODE_PRACTICAL;
}

unsigned env_threads() {
    const char* v = std::getenv("SEG_CORESET_THREADS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    const unsigned long n = std::strtoul(v, &end, 10);
    if (*end != '\0') {
        std::fprintf(stderr, "segcoreset: warning: ignoring SEG_CORESET_THREADS='%s'\n", v);
        return 0;
    }
    return static_cast<unsigned>(n);
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0') {
            std::fprintf(stderr, "segcoreset: parameter error: bad eps value '%s'\n", item.c_str());
            throw Failure{SC_ERR_PARAMETER};
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coresets for piecewise-constant segmentation of 2D signals"};
    app.require_subcommand(1);

    std::string input, format, out, coreset_path, tree_path, mode = "practical", eps_list = "0.2";
    int k = 1, queries = 100, n = 0, m = 0, pieces = 1;
    double eps = 0.2, gamma = 0.0, delta = 1.0, noise = 0.0;
    unsigned long long seed = 0;
    std::size_t max_cells = 4096;
    bool timing = false;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", input, "Signal file (csv or pgm)")->required();
        sub->add_option("--format", format, "csv or pgm; default by suffix")->check(CLI::IsMember({"csv", "pgm"}));
    };

    auto* build = app.add_subcommand("build", "Build a coreset");
    add_input(build);
    build->add_option("--k", k, "Segmentation budget")->required();
    build->add_option("--eps", eps, "Target error in (0, 0.25)")->required();
    build->add_option("--mode", mode, "theory or practical")->check(CLI::IsMember({"theory", "practical"}));
    auto* gamma_opt = build->add_option("--gamma", gamma, "Override the partition gamma");
    build->add_option("--delta", delta, "Error scale; eps is divided by it");
    build->add_option("--seed", seed, "Accepted for uniformity; the build has no random choices");
    build->add_option("--out", out, "Coreset file to write")->required();

    auto* eval = app.add_subcommand("eval", "Estimate a segmentation's loss from a coreset");
    eval->add_option("--coreset", coreset_path, "Coreset file")->required();
    eval->add_option("--tree", tree_path, "Tree or segmentation file")->required();

    auto* loss = app.add_subcommand("loss", "Exact loss of a segmentation on a signal");
    add_input(loss);
    loss->add_option("--tree", tree_path, "Tree or segmentation file")->required();

    auto* dp = app.add_subcommand("dp", "Optimal k-tree by exhaustive search");
    add_input(dp);
    dp->add_option("--k", k, "Leaf budget")->required();
    dp->add_option("--max-cells", max_cells, "Refuse grids larger than this");
    dp->add_option("--out", out, "Also write the tree file here");

    auto* cmp = app.add_subcommand("compare", "Coreset versus uniform sample error table");
    add_input(cmp);
    cmp->add_option("--k", k, "Build budget and largest query tree")->required();
    cmp->add_option("--eps-list", eps_list, "Comma-separated eps values");
    cmp->add_option("--queries", queries, "Random query trees");
    cmp->add_option("--seed", seed, "Query and sample seed");
    cmp->add_option("--mode", mode, "theory or practical")->check(CLI::IsMember({"theory", "practical"}));
    auto* cmp_gamma = cmp->add_option("--gamma", gamma, "Override the partition gamma");
    cmp->add_option("--delta", delta, "Error scale; eps is divided by it");
    cmp->add_flag("--timing", timing, "Add build and query time columns");

    auto* gen = app.add_subcommand("gen", "Piecewise-constant signal plus Gaussian noise");
    gen->add_option("--n", n, "Rows")->required();
    gen->add_option("--m", m, "Columns")->required();
    gen->add_option("--pieces", pieces, "Ground-truth leaves")->required();
    gen->add_option("--noise", noise, "Noise standard deviation")->required();
    gen->add_option("--seed", seed, "Seed");
    gen->add_option("--out", out, "CSV file to write")->required();

    auto* rtree = app.add_subcommand("random-tree", "Random k-tree query file");
    rtree->add_option("--n", n, "Rows")->required();
    rtree->add_option("--m", m, "Columns")->required();
    rtree->add_option("--k", k, "Leaves")->required();
    rtree->add_option("--seed", seed, "Seed");
    rtree->add_option("--out", out, "Segmentation file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "segcoreset: parameter error: %s\n", e.what());
        return SC_ERR_PARAMETER;
    }

    try {
        if (build->parsed()) {
            SignalPtr signal = load_signal(input, format);
            sc_build_options opts;
            sc_build_options_init(&opts);
            opts.k = k;
            opts.eps = eps;
            opts.mode = parse_mode(mode);
            opts.delta = delta;
            opts.has_gamma = gamma_opt->count() > 0;
            opts.gamma = gamma;
            opts.threads = env_threads();
            sc_coreset* raw = nullptr;
            sc_build_info info{};
            const auto t0 = std::chrono::steady_clock::now();
            check(sc_coreset_build(signal.get(), &opts, &raw, &info));
            const auto t1 = std::chrono::steady_clock::now();
            CoresetPtr coreset(raw);
            check(sc_coreset_save(coreset.get(), out.c_str()));
            const double cells = static_cast<double>(sc_signal_rows(signal.get())) * sc_signal_cols(signal.get());
            std::printf("size: %zu\n", info.size);
            std::printf("size_ratio: %.6g\n", static_cast<double>(info.size) / cells);
            std::printf("build_ms: %.3f\n", std::chrono::duration<double, std::milli>(t1 - t0).count());
            std::printf("sigma: %.17g\n", info.sigma);
            std::printf("gamma: %.17g\n", info.gamma);
            std::printf("blocks: %zu\n", info.blocks);
            if (info.sigma == 0.0) {
                std::fprintf(stderr,
                             "segcoreset: warning: sigma is 0; every block is constant and the coreset is "
                             "lossless but not compressed\n");
            }
        } else if (eval->parsed()) {
            sc_coreset* raw = nullptr;
            check(sc_coreset_load(coreset_path.c_str(), &raw));
            CoresetPtr coreset(raw);
            sc_segmentation* sraw = nullptr;
            check(sc_segmentation_load(tree_path.c_str(), sc_coreset_rows(coreset.get()),
                                       sc_coreset_cols(coreset.get()), &sraw));
            SegPtr seg(sraw);
            sc_query_report report{};
            check(sc_coreset_evaluate(coreset.get(), seg.get(), &report));
            std::printf("loss_estimate: %.17g\n", report.loss_estimate);
            std::printf("blocks_intersected: %zu\n", report.blocks_intersected);
            std::printf("blocks_exact: %zu\n", report.blocks_exact);
            if (report.exceeds_k) {
                std::fprintf(stderr, "segcoreset: warning: segmentation has more cells than the coreset's k\n");
            }
        } else if (loss->parsed()) {
            SignalPtr signal = load_signal(input, format);
            sc_segmentation* sraw = nullptr;
            check(sc_segmentation_load(tree_path.c_str(), sc_signal_rows(signal.get()),
                                       sc_signal_cols(signal.get()), &sraw));
            SegPtr seg(sraw);
            double value = 0.0;
            check(sc_exact_loss(signal.get(), seg.get(), &value));
            std::printf("loss: %.17g\n", value);
        } else if (dp->parsed()) {
            SignalPtr signal = load_signal(input, format);
            double value = 0.0;
            char* text = nullptr;
            check(sc_optimal_tree(signal.get(), k, max_cells, &value, &text, nullptr));
            TextPtr tree(text);
            if (!out.empty()) {
                FILE* f = std::fopen(out.c_str(), "wb");
                if (!f || std::fputs(tree.get(), f) < 0) {
                    if (f) std::fclose(f);
                    std::fprintf(stderr, "segcoreset: io error: cannot write '%s'\n", out.c_str());
                    return SC_ERR_IO;
                }
                std::fclose(f);
            }
            std::printf("%s", tree.get());
            std::printf("loss: %.17g\n", value);
        } else if (cmp->parsed()) {
            SignalPtr signal = load_signal(input, format);
            const std::vector<double> list = parse_eps_list(eps_list);
            sc_compare_options opts;
            sc_compare_options_init(&opts);
            opts.k = k;
            opts.eps_list = list.data();
            opts.eps_count = list.size();
            opts.queries = queries;
            opts.seed = seed;
            opts.mode = parse_mode(mode);
            opts.has_gamma = cmp_gamma->count() > 0;
            opts.gamma = gamma;
            opts.delta = delta;
            opts.threads = env_threads();
            opts.timing = timing ? 1 : 0;
            char* text = nullptr;
            check(sc_compare(signal.get(), &opts, &text));
            TextPtr table(text);
            std::printf("%s", table.get());
        } else if (gen->parsed()) {
            sc_signal* raw = nullptr;
            check(sc_signal_generate(n, m, pieces, noise, seed, &raw));
            SignalPtr signal(raw);
            check(sc_signal_save_csv(signal.get(), out.c_str()));
        } else if (rtree->parsed()) {
            sc_segmentation* raw = nullptr;
            check(sc_segmentation_random_tree(n, m, k, seed, &raw));
            SegPtr seg(raw);
            char* text = nullptr;
            check(sc_segmentation_to_json(seg.get(), &text));
            TextPtr doc(text);
            FILE* f = std::fopen(out.c_str(), "wb");
            if (!f || std::fputs(doc.get(), f) < 0) {
                if (f) std::fclose(f);
                std::fprintf(stderr, "segcoreset: io error: cannot write '%s'\n", out.c_str());
                return SC_ERR_IO;
            }
            std::fclose(f);
        }
    } catch (const Failure& f) {
        if (*sc_last_error()) {
            std::fprintf(stderr, "segcoreset: %s error: %s\n", sc_status_name(f.status), sc_last_error());
        }
        return static_cast<int>(f.status);
    }
    return 0;
}
