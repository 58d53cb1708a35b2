#include "doctest.h"
#include "oracles.hpp"

#include "rmlm/model.hpp"
#include "rmlm/pipeline.hpp"
#include "rmlm/tail.hpp"
#include "rmlm/validate.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

using namespace rmlm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("rmlm-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path sample_csv(const fs::path& dir, std::size_t n) {
    const auto model = RmlmModel::from_spec(four_node_spec(), 5);
    const fs::path p = dir / "sample.csv";
    write_csv(p, {"w", "x", "y", "z"}, simulate(model, n));
    return p;
}

}  // namespace

TEST_CASE("config grids and checks") {
    PipelineConfig c;
    CHECK(c.grid(50) == std::vector<std::size_t>{50, 52, 54, 56, 58});
    CHECK(c.all_r().size() == 25);
    CHECK(c.all_r().back() == 98);
    CHECK_NOTHROW(c.check(1000));
    CHECK_THROWS_AS(c.check(60), std::invalid_argument);
    PipelineConfig bad = c;
    bad.a = 1.0;
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
    bad = c;
    bad.delta_grid = {-0.1};
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
    bad = c;
    bad.k_bases.clear();
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);

    const auto back = config_from_json(config_to_json(c));
    CHECK(back.k_bases == c.k_bases);
    CHECK(back.delta_grid == c.delta_grid);
    const auto partial = config_from_json(Json{{"epsilon", 0.2}});
    CHECK(partial.epsilon == 0.2);
    CHECK(partial.k_order == 250);
}

TEST_CASE("full run writes a complete, deterministic grid") {
    const fs::path dir = scratch("run");
    PipelineConfig c;
    c.input = sample_csv(dir, 20000);
    c.output_dir = dir / "out1";
    const auto report = run_pipeline(c);

    CHECK(report.names == NameTable{"w", "x", "y", "z"});
    CHECK(report.n == 20000);
    CHECK(report.estimates.size() == 25);
    REQUIRE(report.dags.size() == 4);
    CHECK(report.centroids.size() == 20);
    CHECK(delta_nested(report));

    std::size_t dag_files = 0;
    for (const auto& e : fs::directory_iterator(c.output_dir / "dags")) {
        dag_files += e.path().extension() == ".json" ? 1 : 0;
    }
    CHECK(dag_files == 100);
    for (const char* f : {"order.json", "report.json", "nshd_sums.csv", "stability.json",
                          "stability.csv", "centroid_delta0.json", "centroid_delta0.1.dot"}) {
        CHECK_MESSAGE(fs::exists(c.output_dir / f), f);
    }
    CHECK(fs::exists(c.output_dir / "dags" / "dag_delta0.025_r98.dot"));
    CHECK(!fs::exists(c.output_dir / "FAILED"));

    const Json doc = read_json(c.output_dir / "report.json");
    CHECK(doc.at("artifacts").size() == report.artifacts.size());
    NameTable names;
    dag_from_json(read_json(c.output_dir / "dags" / "dag_delta0_r50.json"), &names);
    CHECK(names == report.names);

    c.output_dir = dir / "out2";
    const auto again = run_pipeline(c);
    for (const auto& rel : report.artifacts) {
        if (rel == "report.json") {
            Json a = read_json(dir / "out1" / rel);
            Json b = read_json(dir / "out2" / rel);
            a["config"].erase("output_dir");
            b["config"].erase("output_dir");
            CHECK(a == b);
            continue;
        }
        CHECK_MESSAGE(slurp(dir / "out1" / rel) == slurp(dir / "out2" / rel), rel.string());
    }
    fs::remove_all(dir);
}

TEST_CASE("large samples recover a valid order and the generating graph") {
    const auto model = RmlmModel::from_spec(four_node_spec(), 11);
    PipelineConfig c;
    c.k_bases = {500};
    c.k_offsets = {0, 100};
    c.k_order = 2000;
    const auto report = analyse(frechet_transform(simulate(model, 200000)), default_names(4), c);
    const auto anc = oracle::ancestry(model.A());
    CHECK(oracle::valid_order(report.order.order, anc));
    const Dag truth = minimum_dag(model.coefficients());
    CHECK(report.dag(0, 500).is_subgraph_of(reachability(model.coefficients())));
    CHECK(truth.is_subgraph_of(report.dag(0, 500)));
}

TEST_CASE("large thresholds give empty graphs") {
    const auto model = RmlmModel::from_spec(four_node_spec(), 12);
    PipelineConfig c;
    c.k_bases = {60};
    c.delta_grid = {0.0, 1.0};
    const auto report = analyse(frechet_transform(simulate(model, 5000)), default_names(4), c);
    for (const auto& g : report.dags[1]) {
        CHECK(g.edge_count() == 0);
    }
    CHECK(delta_nested(report));
}

TEST_CASE("failures are tagged with their stage and leave a marker") {
    const fs::path dir = scratch("fail");
    PipelineConfig c;
    c.input = dir / "missing.csv";
    c.output_dir = dir / "out";
    try {
        run_pipeline(c);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "ingest");
    }
    CHECK(slurp(c.output_dir / "FAILED").rfind("[ingest]", 0) == 0);

    c.input = sample_csv(dir, 40);
    try {
        run_pipeline(c);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "config");
    }

    c.input = sample_csv(dir, 3000);
    run_pipeline(c);
    CHECK(!fs::exists(c.output_dir / "FAILED"));
    fs::remove_all(dir);
}

TEST_CASE("ingest drops the date column and orients losses") {
    const fs::path dir = scratch("ingest");
    write_text(dir / "returns.csv", "Date,Food,Beer\n19890601,0.5,-1.2\n19890602,-0.3,0.0\n");
    PipelineConfig c;
    c.input = dir / "returns.csv";
    c.date_column = true;
    c.negate = true;
    const auto t = ingest(c);
    CHECK(t.names == NameTable{"Food", "Beer"});
    CHECK(t.values == Matrix{{0.0, 1.2}, {0.3, 0.0}});
    c.negate = false;
    CHECK(ingest(c).values == Matrix{{0.5, -1.2}, {-0.3, 0.0}});
    fs::remove_all(dir);
}
