#ifndef SEGCORESET_H
#define SEGCORESET_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SEGCORESET_BUILDING)
#    define SC_API __declspec(dllexport)
#  else
#    define SC_API __declspec(dllimport)
#  endif
#else
#  define SC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
    SC_OK = 0,
    SC_ERR_PARSE = 1,
    SC_ERR_BOUNDS = 2,
    SC_ERR_PARAMETER = 3,
    SC_ERR_VALIDATION = 4,
    SC_ERR_DIMENSION = 5,
    SC_ERR_SIZE_GUARD = 6,
    SC_ERR_IO = 7,
    SC_ERR_INTERNAL = 8
} sc_status;

typedef enum sc_mode { SC_MODE_PRACTICAL = 0, SC_MODE_THEORY = 1 } sc_mode;

typedef struct sc_signal sc_signal;
typedef struct sc_coreset sc_coreset;
typedef struct sc_segmentation sc_segmentation;
typedef struct sc_sample sc_sample;

/* Short lowercase name of a status ("parse", "bounds", ...). */
SC_API const char* sc_status_name(sc_status status);

/* Message of the last failing call on this thread; empty after success. */
SC_API const char* sc_last_error(void);

/* Strings returned through char** out-parameters are released here. */
SC_API void sc_string_free(char* s);

/* Signals */
SC_API sc_status sc_signal_create(int rows, int cols, const double* labels, sc_signal** out);
/* format is "csv", "pgm" or NULL to pick by file suffix. */
SC_API sc_status sc_signal_load(const char* path, const char* format, sc_signal** out);
SC_API sc_status sc_signal_generate(int rows, int cols, int pieces, double noise, uint64_t seed,
                                    sc_signal** out);
SC_API sc_status sc_signal_save_csv(const sc_signal* signal, const char* path);
SC_API int sc_signal_rows(const sc_signal* signal);
SC_API int sc_signal_cols(const sc_signal* signal);
SC_API void sc_signal_free(sc_signal* signal);

/* Coresets */
typedef struct sc_build_options {
    int k;
    double eps;
    sc_mode mode;
    double delta;
    int has_gamma; /* nonzero: use gamma instead of the mode default */
    double gamma;
    unsigned threads;
} sc_build_options;

typedef struct sc_build_info {
    double sigma;
    double gamma;
    double threshold;
    double seed_loss;
    double alpha;
    size_t seed_blocks;
    size_t blocks;
    size_t size;
} sc_build_info;

SC_API void sc_build_options_init(sc_build_options* opts);
/* info may be NULL. */
SC_API sc_status sc_coreset_build(const sc_signal* signal, const sc_build_options* opts, sc_coreset** out,
                                  sc_build_info* info);
SC_API sc_status sc_coreset_load(const char* path, sc_coreset** out);
SC_API sc_status sc_coreset_save(const sc_coreset* coreset, const char* path);
SC_API sc_status sc_coreset_to_json(const sc_coreset* coreset, char** out);
SC_API size_t sc_coreset_size(const sc_coreset* coreset);
SC_API size_t sc_coreset_blocks(const sc_coreset* coreset);
SC_API int sc_coreset_rows(const sc_coreset* coreset);
SC_API int sc_coreset_cols(const sc_coreset* coreset);
SC_API void sc_coreset_free(sc_coreset* coreset);

/* Segmentations */
SC_API sc_status sc_segmentation_load(const char* path, int rows, int cols, sc_segmentation** out);
SC_API sc_status sc_segmentation_from_json(const char* text, int rows, int cols, sc_segmentation** out);
SC_API sc_status sc_segmentation_random_tree(int rows, int cols, int k, uint64_t seed, sc_segmentation** out);
SC_API sc_status sc_segmentation_to_json(const sc_segmentation* seg, char** out);
SC_API size_t sc_segmentation_size(const sc_segmentation* seg);
SC_API void sc_segmentation_free(sc_segmentation* seg);

/* Queries */
typedef struct sc_query_report {
    double loss_estimate;
    size_t blocks_intersected;
    size_t blocks_exact;
    int exceeds_k;
} sc_query_report;

SC_API sc_status sc_coreset_evaluate(const sc_coreset* coreset, const sc_segmentation* seg,
                                     sc_query_report* out);
SC_API sc_status sc_exact_loss(const sc_signal* signal, const sc_segmentation* seg, double* out);

/* Exact optimal k-tree. Any of the out-parameters may be NULL. The tree is
   returned as a tree document. */
SC_API sc_status sc_optimal_tree(const sc_signal* signal, int k, size_t cell_limit, double* loss,
                                 char** tree_json, sc_segmentation** seg);

/* Uniform sample baseline */
SC_API sc_status sc_sample_draw(const sc_signal* signal, size_t tau, uint64_t seed, sc_sample** out);
SC_API sc_status sc_sample_estimate(const sc_sample* sample, const sc_segmentation* seg, double* out);
SC_API void sc_sample_free(sc_sample* sample);

/* Experiment harness: one table row per eps. */
typedef struct sc_compare_options {
    int k;
    const double* eps_list;
    size_t eps_count;
    int queries;
    uint64_t seed;
    sc_mode mode;
    int has_gamma;
    double gamma;
    double delta;
    unsigned threads;
    int timing; /* nonzero: add build and query time columns */
} sc_compare_options;

SC_API void sc_compare_options_init(sc_compare_options* opts);
SC_API sc_status sc_compare(const sc_signal* signal, const sc_compare_options* opts, char** table);

#ifdef __cplusplus
}
#endif

#endif
