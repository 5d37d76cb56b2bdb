#include "segcoreset/segcoreset.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "segcoreset/coreset.hpp"
#include "segcoreset/error.hpp"
#include "segcoreset/harness.hpp"
#include "segcoreset/io.hpp"
#include "segcoreset/oracle.hpp"
#include "segcoreset/query.hpp"

using namespace segcoreset;

struct sc_signal {
    Signal value;
};
struct sc_coreset {
    Coreset value;
};
struct sc_segmentation {
    KSegmentation value;
};
struct sc_sample {
    UniformSample value;
};

namespace {

thread_local std::string last_error;

sc_status status_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return SC_ERR_PARSE;
        case ErrorKind::Bounds: return SC_ERR_BOUNDS;
        case ErrorKind::Parameter: return SC_ERR_PARAMETER;
        case ErrorKind::Validation: return SC_ERR_VALIDATION;
        case ErrorKind::Dimension: return SC_ERR_DIMENSION;
        case ErrorKind::SizeGuard: return SC_ERR_SIZE_GUARD;
        case ErrorKind::Io: return SC_ERR_IO;
    }
    return SC_ERR_INTERNAL;
}

template <class F>
sc_status guard(F&& body) {
    try {
        body();
        last_error.clear();
        return SC_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SC_ERR_INTERNAL;
    }
}

void require(const void* p, const char* name) {
    if (!p) fail(ErrorKind::Parameter, std::string(name) + " is null");
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

BuildMode mode_of(sc_mode m) {
    if (m == SC_MODE_THEORY) return BuildMode::Theory;
    if (m == SC_MODE_PRACTICAL) return BuildMode::Practical;
    fail(ErrorKind::Parameter, "unknown build mode");
}

}  // namespace

extern "C" {

const char* sc_status_name(sc_status status) {
    switch (status) {
        case SC_OK: return "ok";
        case SC_ERR_PARSE: return "parse";
        case SC_ERR_BOUNDS: return "bounds";
        case SC_ERR_PARAMETER: return "parameter";
        case SC_ERR_VALIDATION: return "validation";
        case SC_ERR_DIMENSION: return "dimension";
        case SC_ERR_SIZE_GUARD: return "size-guard";
        case SC_ERR_IO: return "io";
        case SC_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* sc_last_error(void) { return last_error.c_str(); }

void sc_string_free(char* s) { std::free(s); }

sc_status sc_signal_create(int rows, int cols, const double* labels, sc_signal** out) {
    return guard([&] {
        require(out, "out");
        if (rows < 1 || cols < 1) fail(ErrorKind::Parameter, "grid dimensions must be positive");
        require(labels, "labels");
        const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
        *out = new sc_signal{Signal(rows, cols, std::vector<double>(labels, labels + n))};
    });
}

sc_status sc_signal_load(const char* path, const char* format, sc_signal** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        const SignalFormat f = format ? parse_signal_format(format) : format_from_path(path);
        *out = new sc_signal{load_signal(path, f)};
    });
}

sc_status sc_signal_generate(int rows, int cols, int pieces, double noise, uint64_t seed, sc_signal** out) {
    return guard([&] {
        require(out, "out");
        *out = new sc_signal{generate_signal(rows, cols, pieces, noise, seed).signal};
    });
}

sc_status sc_signal_save_csv(const sc_signal* signal, const char* path) {
    return guard([&] {
        require(signal, "signal");
        require(path, "path");
        save_csv(signal->value, path);
    });
}

int sc_signal_rows(const sc_signal* signal) { return signal ? signal->value.rows() : 0; }
int sc_signal_cols(const sc_signal* signal) { return signal ? signal->value.cols() : 0; }
void sc_signal_free(sc_signal* signal) { delete signal; }

void sc_build_options_init(sc_build_options* opts) {
    if (!opts) return;
    const CoresetConfig d;
    opts->k = d.k;
    opts->eps = d.eps;
    opts->mode = d.mode == BuildMode::Theory ? SC_MODE_THEORY : SC_MODE_PRACTICAL;
    opts->delta = d.delta;
    opts->has_gamma = 0;
    opts->gamma = 0.0;
    opts->threads = 0;
}

sc_status sc_coreset_build(const sc_signal* signal, const sc_build_options* opts, sc_coreset** out,
                           sc_build_info* info) {
    return guard([&] {
        require(signal, "signal");
        require(opts, "opts");
        require(out, "out");
        CoresetConfig cfg;
        cfg.k = opts->k;
        cfg.eps = opts->eps;
        cfg.mode = mode_of(opts->mode);
        cfg.delta = opts->delta;
        if (opts->has_gamma) cfg.gamma_override = opts->gamma;
        cfg.threads = opts->threads;
        BuildTrace trace;
        Coreset c = build_coreset(signal->value, cfg, &trace);
        if (info) {
            info->sigma = c.sigma;
            info->gamma = c.gamma;
            info->threshold = trace.threshold;
            info->seed_loss = trace.seed_loss;
            info->alpha = trace.alpha;
            info->seed_blocks = trace.seed_blocks;
            info->blocks = c.blocks.size();
            info->size = c.size();
        }
        *out = new sc_coreset{std::move(c)};
    });
}

sc_status sc_coreset_load(const char* path, sc_coreset** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = new sc_coreset{load_coreset(path)};
    });
}

sc_status sc_coreset_save(const sc_coreset* coreset, const char* path) {
    return guard([&] {
        require(coreset, "coreset");
        require(path, "path");
        save_coreset(coreset->value, path);
    });
}

sc_status sc_coreset_to_json(const sc_coreset* coreset, char** out) {
    return guard([&] {
        require(coreset, "coreset");
        require(out, "out");
        *out = copy_string(coreset_to_json(coreset->value));
    });
}

size_t sc_coreset_size(const sc_coreset* coreset) { return coreset ? coreset->value.size() : 0; }
size_t sc_coreset_blocks(const sc_coreset* coreset) { return coreset ? coreset->value.blocks.size() : 0; }
int sc_coreset_rows(const sc_coreset* coreset) { return coreset ? coreset->value.rows : 0; }
int sc_coreset_cols(const sc_coreset* coreset) { return coreset ? coreset->value.cols : 0; }
void sc_coreset_free(sc_coreset* coreset) { delete coreset; }

sc_status sc_segmentation_load(const char* path, int rows, int cols, sc_segmentation** out) {
    return guard([&] {
        require(path, "path");
        require(out, "out");
        *out = new sc_segmentation{load_segmentation(path, rows, cols)};
    });
}

sc_status sc_segmentation_from_json(const char* text, int rows, int cols, sc_segmentation** out) {
    return guard([&] {
        require(text, "text");
        require(out, "out");
        *out = new sc_segmentation{segmentation_from_json(text, rows, cols)};
    });
}

sc_status sc_segmentation_random_tree(int rows, int cols, int k, uint64_t seed, sc_segmentation** out) {
    return guard([&] {
        require(out, "out");
        *out = new sc_segmentation{ktree_to_segmentation(random_ktree(rows, cols, k, seed), rows, cols)};
    });
}

sc_status sc_segmentation_to_json(const sc_segmentation* seg, char** out) {
    return guard([&] {
        require(seg, "seg");
        require(out, "out");
        *out = copy_string(segmentation_to_json(seg->value));
    });
}

size_t sc_segmentation_size(const sc_segmentation* seg) { return seg ? seg->value.size() : 0; }
void sc_segmentation_free(sc_segmentation* seg) { delete seg; }

sc_status sc_coreset_evaluate(const sc_coreset* coreset, const sc_segmentation* seg, sc_query_report* out) {
    return guard([&] {
        require(coreset, "coreset");
        require(seg, "seg");
        require(out, "out");
        const QueryReport r = evaluate_loss(coreset->value, seg->value);
        out->loss_estimate = r.loss_estimate;
        out->blocks_intersected = r.blocks_intersected;
        out->blocks_exact = r.blocks_exact;
        out->exceeds_k = r.exceeds_k ? 1 : 0;
    });
}

sc_status sc_exact_loss(const sc_signal* signal, const sc_segmentation* seg, double* out) {
    return guard([&] {
        require(signal, "signal");
        require(seg, "seg");
        require(out, "out");
        *out = exact_loss(signal->value, seg->value);
    });
}

sc_status sc_optimal_tree(const sc_signal* signal, int k, size_t cell_limit, double* loss, char** tree_json,
                          sc_segmentation** seg) {
    return guard([&] {
        require(signal, "signal");
        const Signal& s = signal->value;
        const OptimalTree best = optimal_ktree(s, k, cell_limit ? cell_limit : kDefaultDpCellLimit);
        KSegmentation segmentation = ktree_to_segmentation(best.tree, s.rows(), s.cols());
        std::string text = tree_json ? tree_to_json(best.tree, s.rows(), s.cols()) : std::string();
        if (loss) *loss = best.loss;
        if (tree_json) *tree_json = copy_string(text);
        if (seg) *seg = new sc_segmentation{std::move(segmentation)};
    });
}

sc_status sc_sample_draw(const sc_signal* signal, size_t tau, uint64_t seed, sc_sample** out) {
    return guard([&] {
        require(signal, "signal");
        require(out, "out");
        *out = new sc_sample{random_sample_estimator(signal->value, tau, seed)};
    });
}

sc_status sc_sample_estimate(const sc_sample* sample, const sc_segmentation* seg, double* out) {
    return guard([&] {
        require(sample, "sample");
        require(seg, "seg");
        require(out, "out");
        *out = sample->value.estimate(seg->value);
    });
}

void sc_sample_free(sc_sample* sample) { delete sample; }

void sc_compare_options_init(sc_compare_options* opts) {
    if (!opts) return;
    const CompareOptions d;
    opts->k = d.k;
    opts->eps_list = nullptr;
    opts->eps_count = 0;
    opts->queries = d.queries;
    opts->seed = d.seed;
    opts->mode = SC_MODE_PRACTICAL;
    opts->has_gamma = 0;
    opts->gamma = 0.0;
    opts->delta = d.delta;
    opts->threads = d.threads;
    opts->timing = 0;
}

sc_status sc_compare(const sc_signal* signal, const sc_compare_options* opts, char** table) {
    return guard([&] {
        require(signal, "signal");
        require(opts, "opts");
        require(table, "table");
        if (opts->eps_count > 0) require(opts->eps_list, "eps_list");
        CompareOptions o;
        o.k = opts->k;
        o.eps_list.assign(opts->eps_list, opts->eps_list + opts->eps_count);
        o.queries = opts->queries;
        o.seed = opts->seed;
        o.mode = mode_of(opts->mode);
        if (opts->has_gamma) o.gamma_override = opts->gamma;
        o.delta = opts->delta;
        o.threads = opts->threads;
        *table = copy_string(format_compare_table(compare(signal->value, o), opts->timing != 0));
    });
}

}  // extern "C"
