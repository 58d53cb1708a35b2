// rmlm: command line front end for structure learning in max-linear models.

#include "rmlm/coefficients.hpp"
#include "rmlm/io.hpp"
#include "rmlm/metrics.hpp"
#include "rmlm/model.hpp"
#include "rmlm/order.hpp"
#include "rmlm/pipeline.hpp"
#include "rmlm/scaling_source.hpp"
#include "rmlm/tail.hpp"
#include "rmlm/validate.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <random>

namespace fs = std::filesystem;
using namespace rmlm;

namespace {

struct Shared {
    std::string input;
    std::string output_dir = ".";
    std::string config;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    double a = kDefaultScale;
    double epsilon = kDefaultEpsilon;
    double delta = 0.0;
    bool negate = false;
    bool date_column = false;
    bool frechet = false;
    const CLI::App* active = nullptr;

    bool given(const std::string& name) const {
        const CLI::Option* opt = active ? active->get_option_no_throw(name) : nullptr;
        return opt && opt->count() > 0;
    }
};

template <class F>
auto stage(const std::string& name, F&& body) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

void add_data_flags(CLI::App* cmd, Shared& s) {
    cmd->add_option("-i,--input", s.input, "CSV with a header row");
    cmd->add_flag("--negate", s.negate, "use max(-x, 0) of every value");
    cmd->add_flag("--date-column", s.date_column, "ignore the first column");
    cmd->add_flag("--frechet", s.frechet, "input already has Frechet(2) margins");
}

void add_common_flags(CLI::App* cmd, Shared& s) {
    cmd->add_option("-o,--output-dir", s.output_dir, "directory for outputs");
    cmd->add_option("--config", s.config, "JSON pipeline configuration");
    cmd->add_option("--seed", s.seed, "random seed");
}

PipelineConfig effective_config(const Shared& s) {
    PipelineConfig cfg;
    if (!s.config.empty()) {
        cfg = stage("config", [&] { return config_from_json(read_json(s.config), cfg); });
    }
    if (s.given("--input")) cfg.input = s.input;
    if (s.given("--output-dir")) cfg.output_dir = s.output_dir;
    if (s.given("--seed")) cfg.seed = s.seed;
    if (s.given("--k")) cfg.k_order = s.k;
    if (s.given("--a")) cfg.a = s.a;
    if (s.given("--epsilon")) cfg.epsilon = s.epsilon;
    if (s.given("--delta")) cfg.delta_grid = {s.delta};
    cfg.negate = cfg.negate || s.negate;
    cfg.date_column = cfg.date_column || s.date_column;
    if (cfg.output_dir.empty()) cfg.output_dir = ".";
    return cfg;
}

CsvTable load_sample(const PipelineConfig& cfg, bool frechet) {
    if (cfg.input.empty()) {
        throw StageError("ingest", "--input is required");
    }
    auto table = stage("ingest", [&] { return ingest(cfg); });
    if (!frechet) {
        table.values = stage("transform", [&] { return frechet_transform(table.values); });
    }
    return table;
}

fs::path out_dir(const PipelineConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    return cfg.output_dir;
}

int run_transform(const Shared& s) {
    const auto cfg = effective_config(s);
    const auto table = load_sample(cfg, false);
    const auto path = out_dir(cfg) / "frechet.csv";
    stage("write", [&] {
        write_csv(path, table.names, table.values);
        return 0;
    });
    std::cout << path.string() << '\n';
    return 0;
}

int run_order(const Shared& s) {
    const auto cfg = effective_config(s);
    const auto table = load_sample(cfg, s.frechet);
    const auto order = stage("order", [&] {
        cfg.check(table.values.rows());
        EmpiricalScalings source(table.values, cfg.k_order);
        auto result = causal_order(source, cfg.a, cfg.epsilon);
        result.params.k = cfg.k_order;
        return result;
    });
    const auto path = out_dir(cfg) / "order.json";
    stage("write", [&] {
        write_json(path, order_to_json(order, table.names));
        return 0;
    });
    std::cout << path.string() << '\n';
    return 0;
}

int run_estimate(const Shared& s, const std::string& order_path) {
    const auto cfg = effective_config(s);
    const auto table = load_sample(cfg, s.frechet);
    const std::size_t k = cfg.k_order;
    const auto order = stage("order", [&] {
        if (!order_path.empty()) {
            return order_from_json(read_json(order_path), table.names);
        }
        cfg.check(table.values.rows());
        EmpiricalScalings source(table.values, k);
        return causal_order(source, cfg.a, cfg.epsilon);
    });
    PostprocessReport post;
    const auto a = stage("estimate", [&] {
        EmpiricalScalings source(table.values, k);
        const auto sv = build_scaling_vector(source, order);
        return postprocess(recover_squared_linear(sv, build_transform(sv.d)), order, &post);
    });
    const auto path = out_dir(cfg) / ("A_r" + std::to_string(k) + ".json");
    stage("write", [&] {
        write_json(path, matrix_to_json(a, table.names));
        return 0;
    });
    if (post.clamped_entries > 0 || !post.degenerate_rows.empty()) {
        std::cerr << "rmlm: clamped " << post.clamped_entries << " negative entries, "
                  << post.degenerate_rows.size() << " degenerate rows\n";
    }
    std::cout << path.string() << '\n';
    return 0;
}

int run_dag(const Shared& s, const std::string& matrix_path) {
    const auto cfg = effective_config(s);
    NameTable names;
    const auto a = stage("ingest", [&] { return matrix_from_json(read_json(matrix_path), &names); });
    const auto dir = out_dir(cfg);
    for (double delta : cfg.delta_grid) {
        const auto g = stage("dag", [&] { return estimated_dag(a, delta); });
        const std::string stem = "dag_delta" + format_real(delta);
        stage("write", [&] {
            write_json(dir / (stem + ".json"), dag_to_json(g, names));
            write_text(dir / (stem + ".dot"), dag_to_dot(g, names));
            return 0;
        });
        std::cout << (dir / (stem + ".json")).string() << '\n';
    }
    return 0;
}

int run_compare(const std::string& first, const std::string& second) {
    const auto g1 = stage("ingest", [&] { return dag_from_json(read_json(first)); });
    const auto g2 = stage("ingest", [&] { return dag_from_json(read_json(second)); });
    const auto result = stage("compare", [&] {
        return Json{{"shd", shd(g1, g2)},
                    {"nshd", nshd(g1, g2)},
                    {"edges", {g1.edge_count(), g2.edge_count()}}};
    });
    std::cout << result.dump(2) << '\n';
    return 0;
}

int run_stability(const Shared& s, const std::vector<std::string>& files) {
    const auto cfg = effective_config(s);
    NameTable names;
    DagEnsemble ensemble;
    stage("ingest", [&] {
        for (std::size_t m = 0; m < files.size(); ++m) {
            const Json j = read_json(files[m]);
            ensemble.members.push_back({dag_from_json(j, &names), j.value("r", m)});
        }
        return 0;
    });
    const auto score = stage("stability", [&] { return stability(ensemble); });
    const auto c = stage("centroid", [&] { return centroid(ensemble); });
    const auto dir = out_dir(cfg);
    stage("write", [&] {
        Json j = stability_to_json(score, names);
        j["centroid"] = {{"file", files[c.index]}, {"sums", c.sums}};
        write_json(dir / "stability.json", j);
        write_text(dir / "stability.csv", stability_to_csv(score, names));
        return 0;
    });
    std::cout << (dir / "stability.json").string() << '\n';
    return 0;
}

int run_pipeline_cmd(const Shared& s) {
    const auto cfg = effective_config(s);
    if (cfg.input.empty()) {
        throw StageError("ingest", "--input is required");
    }
    const auto report = run_pipeline(cfg);
    const auto& win = report.centroids[report.best];
    std::cout << "order steps: " << report.order.steps.size() << ", selected delta "
              << format_real(cfg.delta_grid[win.delta_index]) << " r " << win.r << '\n'
              << (cfg.output_dir / "report.json").string() << '\n';
    return 0;
}

int run_simulate(const Shared& s, const std::string& model_path, std::size_t d, std::size_t n,
                 double edge_probability) {
    const auto cfg = effective_config(s);
    NameTable names;
    const auto model = stage("model", [&] {
        if (!model_path.empty()) {
            return model_from_json(read_json(model_path), &names);
        }
        std::mt19937_64 rng(cfg.seed);
        RandomModelOptions opt;
        opt.edge_probability = edge_probability;
        names = default_names(d);
        return RmlmModel::from_spec(random_well_ordered_spec(d, rng, opt), cfg.seed);
    });
    const auto x = stage("simulate", [&] { return simulate_max_linear(model.A(), n, cfg.seed); });
    const auto dir = out_dir(cfg);
    stage("write", [&] {
        write_csv(dir / "sample.csv", names, x);
        Json mj = model_to_json(model, names);
        mj["seed"] = cfg.seed;
        write_json(dir / "model.json", mj);
        write_json(dir / "true_dag.json", dag_to_json(minimum_dag(model.coefficients()), names));
        return 0;
    });
    std::cout << (dir / "sample.csv").string() << '\n';
    return 0;
}

int run_validate(const Shared& s, ValidateOptions opt, const std::string& report_path) {
    const auto cfg = effective_config(s);
    opt.seed = cfg.seed;
    opt.a = cfg.a;
    const auto report = validate(opt);
    for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.cases << " cases";
        if (c.failures) {
            std::cout << ", " << c.failures << " failed";
        }
        std::cout << ", worst " << format_real(c.worst) << ")";
        if (!c.detail.empty()) {
            std::cout << ": " << c.detail;
        }
        std::cout << '\n';
    }
    if (!report_path.empty()) {
        stage("write", [&] {
            write_json(report_path, validation_to_json(report));
            return 0;
        });
    }
    return report.passed() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal structure learning for recursive max-linear models"};
    app.require_subcommand(1);
    Shared s;

    auto* transform = app.add_subcommand("transform", "rank transform to Frechet(2) margins");
    add_data_flags(transform, s);
    add_common_flags(transform, s);

    auto* order = app.add_subcommand("order", "estimate a causal order");
    add_data_flags(order, s);
    add_common_flags(order, s);
    order->add_option("-k,--k", s.k, "exceedances");
    order->add_option("-a,--a", s.a, "scaling multiplier (> 1)");
    order->add_option("-e,--epsilon", s.epsilon, "step tolerance");

    std::string order_path;
    auto* estimate = app.add_subcommand("estimate", "estimate the max-linear coefficient matrix");
    add_data_flags(estimate, s);
    add_common_flags(estimate, s);
    estimate->add_option("--order", order_path, "order JSON (estimated when absent)");
    estimate->add_option("-k,--k", s.k, "exceedances")->required();
    estimate->add_option("-a,--a", s.a, "scaling multiplier (> 1)");
    estimate->add_option("-e,--epsilon", s.epsilon, "step tolerance");

    std::string matrix_path;
    auto* dag = app.add_subcommand("dag", "thresholded minimum DAG of a coefficient matrix");
    add_common_flags(dag, s);
    dag->add_option("--matrix", matrix_path, "matrix JSON")->required();
    dag->add_option("-d,--delta", s.delta, "threshold");

    std::string first, second;
    auto* compare = app.add_subcommand("compare", "SHD and nSHD between two DAGs");
    compare->add_option("first", first, "DAG JSON")->required();
    compare->add_option("second", second, "DAG JSON")->required();

    std::vector<std::string> dag_files;
    auto* stab = app.add_subcommand("stability", "edge counts and centroid over DAG files");
    add_common_flags(stab, s);
    stab->add_option("dags", dag_files, "DAG JSON files")->required();

    auto* pipeline = app.add_subcommand("pipeline", "full grid run with centroid selection");
    add_data_flags(pipeline, s);
    add_common_flags(pipeline, s);
    pipeline->add_option("-k,--k", s.k, "exceedances for the order");
    pipeline->add_option("-a,--a", s.a, "scaling multiplier (> 1)");
    pipeline->add_option("-e,--epsilon", s.epsilon, "step tolerance");
    pipeline->add_option("-d,--delta", s.delta, "single threshold");

    std::string model_path;
    std::size_t sim_d = 5;
    std::size_t sim_n = 10000;
    double sim_p = 0.4;
    auto* simulate_cmd = app.add_subcommand("simulate", "draw a sample from a model");
    add_common_flags(simulate_cmd, s);
    simulate_cmd->add_option("--model", model_path, "model JSON (random when absent)");
    simulate_cmd->add_option("--dim", sim_d, "nodes of a random model");
    simulate_cmd->add_option("-n,--n", sim_n, "observations");
    simulate_cmd->add_option("--edge-probability", sim_p, "edge density of a random model");

    ValidateOptions vopt;
    std::string validate_report;
    auto* val = app.add_subcommand("validate", "run the invariant battery");
    add_common_flags(val, s);
    val->add_option("-a,--a", s.a, "scaling multiplier (> 1)");
    val->add_option("--models", vopt.models_per_dim, "random models per dimension");
    val->add_option("--dims", vopt.dims, "model dimensions");
    val->add_option("-n,--n", vopt.mc_n, "Monte-Carlo sample size (0 skips)");
    val->add_option("-k,--k", vopt.mc_k, "Monte-Carlo exceedances");
    val->add_option("--order-seeds", vopt.mc_order_seeds, "Monte-Carlo order repetitions");
    val->add_option("--order-required", vopt.mc_order_required, "valid orders required");
    val->add_option("--report", validate_report, "write the report as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto* cmd : app.get_subcommands()) {
            s.active = cmd;
        }
        if (*transform) return run_transform(s);
        if (*order) return run_order(s);
        if (*estimate) return run_estimate(s, order_path);
        if (*dag) return run_dag(s, matrix_path);
        if (*compare) return run_compare(first, second);
        if (*stab) return run_stability(s, dag_files);
        if (*pipeline) return run_pipeline_cmd(s);
        if (*simulate_cmd) return run_simulate(s, model_path, sim_d, sim_n, sim_p);
        if (*val) return run_validate(s, vopt, validate_report);
    } catch (const StageError& e) {
        std::cerr << "rmlm: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "rmlm: [internal] " << e.what() << '\n';
        return 1;
    }
    return 0;
}
