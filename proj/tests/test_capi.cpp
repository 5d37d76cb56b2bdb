#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "segcoreset/segcoreset.h"

TEST_CASE("build and query through the C API") {
    sc_signal* sig = nullptr;
    REQUIRE(sc_signal_generate(32, 32, 6, 0.5, 4, &sig) == SC_OK);
    CHECK(sc_signal_rows(sig) == 32);
    CHECK(sc_signal_cols(sig) == 32);

    sc_build_options opts;
    sc_build_options_init(&opts);
    CHECK(opts.mode == SC_MODE_PRACTICAL);
    opts.k = 8;
    opts.eps = 0.2;
    sc_coreset* cs = nullptr;
    sc_build_info info{};
    REQUIRE(sc_coreset_build(sig, &opts, &cs, &info) == SC_OK);
    CHECK(info.size == sc_coreset_size(cs));
    CHECK(info.blocks == sc_coreset_blocks(cs));
    CHECK(info.size == 4 * info.blocks);
    CHECK(info.sigma > 0);

    sc_segmentation* seg = nullptr;
    REQUIRE(sc_segmentation_random_tree(32, 32, 1, 3, &seg) == SC_OK);
    sc_query_report report{};
    REQUIRE(sc_coreset_evaluate(cs, seg, &report) == SC_OK);
    double exact = 0;
    REQUIRE(sc_exact_loss(sig, seg, &exact) == SC_OK);
    CHECK(report.loss_estimate == doctest::Approx(exact).epsilon(1e-9));
    CHECK(report.blocks_intersected == 0);
    CHECK(report.exceeds_k == 0);

    char* json = nullptr;
    REQUIRE(sc_coreset_to_json(cs, &json) == SC_OK);
    CHECK(std::strstr(json, "\"version\"") != nullptr);
    sc_string_free(json);

    const auto path = std::filesystem::temp_directory_path() / "segcoreset_capi.json";
    REQUIRE(sc_coreset_save(cs, path.string().c_str()) == SC_OK);
    sc_coreset* back = nullptr;
    REQUIRE(sc_coreset_load(path.string().c_str(), &back) == SC_OK);
    sc_query_report again{};
    REQUIRE(sc_coreset_evaluate(back, seg, &again) == SC_OK);
    CHECK(again.loss_estimate == report.loss_estimate);
    std::filesystem::remove(path);

    sc_sample* sample = nullptr;
    REQUIRE(sc_sample_draw(sig, 1024, 1, &sample) == SC_OK);
    double est = 0;
    REQUIRE(sc_sample_estimate(sample, seg, &est) == SC_OK);
    CHECK(est == doctest::Approx(exact).epsilon(1e-12));

    sc_sample_free(sample);
    sc_coreset_free(back);
    sc_segmentation_free(seg);
    sc_coreset_free(cs);
    sc_signal_free(sig);
}

TEST_CASE("C API errors carry a status and message") {
    sc_signal* sig = nullptr;
    const std::vector<double> v{1, 2, 3, 4};
    REQUIRE(sc_signal_create(2, 2, v.data(), &sig) == SC_OK);
    CHECK(std::string(sc_last_error()).empty());

    sc_build_options opts;
    sc_build_options_init(&opts);
    opts.k = 5;
    sc_coreset* cs = nullptr;
    CHECK(sc_coreset_build(sig, &opts, &cs, nullptr) == SC_ERR_PARAMETER);
    CHECK(cs == nullptr);
    CHECK(std::string(sc_last_error()).find("k") != std::string::npos);
    CHECK(std::string(sc_status_name(SC_ERR_PARAMETER)) == "parameter");

    CHECK(sc_coreset_build(nullptr, &opts, &cs, nullptr) == SC_ERR_PARAMETER);

    sc_signal* missing = nullptr;
    CHECK(sc_signal_load("/nonexistent/x.csv", nullptr, &missing) == SC_ERR_IO);
    CHECK(sc_signal_load("/nonexistent/x.csv", "tiff", &missing) == SC_ERR_PARAMETER);

    sc_segmentation* seg = nullptr;
    CHECK(sc_segmentation_from_json("{\"version\": 1, \"tree\": 3}", 2, 2, &seg) == SC_ERR_PARSE);
    CHECK(sc_segmentation_from_json("{\"version\": 1, \"n\": 3, \"m\": 2, \"tree\": {\"leaf\": {\"label\": 0}}}", 2, 2,
                                    &seg) == SC_ERR_DIMENSION);

    sc_signal* big = nullptr;
    REQUIRE(sc_signal_generate(80, 80, 2, 0.1, 1, &big) == SC_OK);
    double loss = 0;
    CHECK(sc_optimal_tree(big, 2, 0, &loss, nullptr, nullptr) == SC_ERR_SIZE_GUARD);
    sc_signal_free(big);

    char* tree = nullptr;
    REQUIRE(sc_optimal_tree(sig, 2, 0, &loss, &tree, &seg) == SC_OK);
    CHECK(loss == doctest::Approx(1.0));
    CHECK(sc_segmentation_size(seg) == 2);
    sc_string_free(tree);
    sc_segmentation_free(seg);
    sc_signal_free(sig);
}

TEST_CASE("compare table through the C API is reproducible") {
    sc_signal* sig = nullptr;
    REQUIRE(sc_signal_generate(32, 32, 6, 0.5, 2, &sig) == SC_OK);
    const double eps[] = {0.1, 0.2};
    sc_compare_options opts;
    sc_compare_options_init(&opts);
    opts.k = 8;
    opts.eps_list = eps;
    opts.eps_count = 2;
    opts.queries = 20;
    opts.seed = 5;
    char* a = nullptr;
    char* b = nullptr;
    REQUIRE(sc_compare(sig, &opts, &a) == SC_OK);
    REQUIRE(sc_compare(sig, &opts, &b) == SC_OK);
    CHECK(std::string(a) == std::string(b));
    CHECK(std::string(a).find("median_err") != std::string::npos);
    sc_string_free(a);
    sc_string_free(b);
    opts.eps_count = 0;
    CHECK(sc_compare(sig, &opts, &a) == SC_ERR_PARAMETER);
    sc_signal_free(sig);
}
