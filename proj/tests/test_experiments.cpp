#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "genlab/errors.hpp"
#include "genlab/experiments.hpp"

using namespace genlab;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing and validation") {
    CHECK_THROWS_AS(parse_experiment_config("{}"), InvalidInput);  // kind required
    CHECK_THROWS_AS(parse_experiment_config("not json"), InvalidInput);

    const ExperimentConfig cfg =
        parse_experiment_config(R"({"kind":"margin-gap","seed":7,"out_dir":"x"})");
    CHECK(cfg.kind == "margin-gap");
    CHECK(cfg.seed == 7);
    CHECK(cfg.out_dir == "x");
    validate_experiment_config(cfg);

    ExperimentConfig bad = cfg;
    bad.kind = "does-not-exist";
    try {
        validate_experiment_config(bad);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        // the diagnostic lists the accepted kinds
        CHECK(std::string(e.what()).find("norms-vs-m") != std::string::npos);
    }

    CHECK_THROWS_AS(
        parse_experiment_config(R"({"kind":"margin-gap","params":{"m":-5}})"),
        InvalidInput);
    CHECK_THROWS_AS(load_experiment_config("missing_config.json"), InvalidInput);
}

TEST_CASE("config hash is canonical") {
    const ExperimentConfig a =
        parse_experiment_config(R"({"kind":"interp","seed":1,"params":{"m":50}})");
    const ExperimentConfig b =
        parse_experiment_config(R"({"params":{"m":50},"seed":1,"kind":"interp"})");
    CHECK(config_hash(a) == config_hash(b));  // key order must not matter
    const ExperimentConfig c =
        parse_experiment_config(R"({"kind":"interp","seed":2,"params":{"m":50}})");
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("spearman") {
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {9, 7, 5, 3}) == doctest::Approx(-1.0));
    // monotone but nonlinear stays 1
    CHECK(spearman({1, 2, 3, 4}, {1, 8, 27, 64}) == doctest::Approx(1.0));
    // ties share mean ranks
    const double r = spearman({1, 1, 2, 3}, {5, 5, 7, 9});
    CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fitted_slope") {
    CHECK(fitted_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
    CHECK(fitted_slope({0, 1, 2}, {4, 4, 4}) == doctest::Approx(0.0));
}

TEST_CASE("margin-gap run produces artifacts deterministically") {
    ExperimentConfig cfg = parse_experiment_config(R"({
        "kind": "margin-gap",
        "seed": 3,
        "params": {"m_grid": [64, 128], "test_m": 200, "width": 8},
        "train": {"lr": 0.1, "batch_size": 16, "max_epochs": 5}
    })");
    cfg.out_dir = "unit_out_margin";
    const RunResult r1 = run_experiment(cfg);
    CHECK(r1.out_dir == "unit_out_margin");
    const std::string csv1 = slurp(std::filesystem::path(r1.out_dir) / "results.csv");
    const std::string json1 = slurp(std::filesystem::path(r1.out_dir) / "report.json");
    CHECK(csv1.find("#") != std::string::npos);  // trailing metadata comment
    CHECK(json1.find("config_hash") != std::string::npos);

    const RunResult r2 = run_experiment(cfg);
    CHECK(slurp(std::filesystem::path(r2.out_dir) / "results.csv") == csv1);
    CHECK(slurp(std::filesystem::path(r2.out_dir) / "report.json") == json1);

    const std::string summary = summarize_directory(r1.out_dir);
    CHECK(summary.find("margin-gap") != std::string::npos);
    CHECK(summary.find("config_hash") != std::string::npos);

    std::filesystem::remove_all("unit_out_margin");
}

TEST_CASE("interp run evaluates the requested modes") {
    ExperimentConfig cfg = parse_experiment_config(R"({
        "kind": "interp",
        "seed": 5,
        "params": {"m": 64, "steps": 5, "width": 8, "modes": ["diff-init"]},
        "train": {"lr": 0.1, "batch_size": 16, "max_epochs": 5}
    })");
    cfg.out_dir = "unit_out_interp";
    const RunResult r = run_experiment(cfg);
    const std::string csv = slurp(std::filesystem::path(r.out_dir) / "results.csv");
    CHECK(csv.find("diff-init") != std::string::npos);
    // 5 interpolation steps -> 5 data rows (plus header and metadata comment)
    std::size_t rows = 0, pos = 0;
    while ((pos = csv.find("\ndiff-init,", pos)) != std::string::npos) {
        ++rows;
        ++pos;
    }
    CHECK(rows == 5);
    std::filesystem::remove_all("unit_out_interp");
}

TEST_CASE("gde-scatter smoke run passes its deviation assertion") {
    ExperimentConfig cfg = parse_experiment_config(R"({
        "kind": "gde-scatter",
        "seed": 11,
        "params": {"pairs": 3, "m": 64, "test_m": 200, "width": 8},
        "train": {"lr": 0.1, "batch_size": 16, "max_epochs": 8}
    })");
    cfg.out_dir = "unit_out_gde";
    const RunResult r = run_experiment(cfg);
    CHECK(r.assertions_passed);
    CHECK(std::filesystem::exists(std::filesystem::path(r.out_dir) / "results.csv"));
    bool has_svg = false;
    for (const std::string& a : r.artifacts)
        if (a.size() > 4 && a.substr(a.size() - 4) == ".svg") has_svg = true;
    CHECK(has_svg);
    std::filesystem::remove_all("unit_out_gde");
}
