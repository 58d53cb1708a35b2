#include "rmlm/pipeline.hpp"

#include "rmlm/parallel.hpp"
#include "rmlm/scaling_source.hpp"
#include "rmlm/tail.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace rmlm {

namespace fs = std::filesystem;

std::vector<std::size_t> PipelineConfig::grid(std::size_t base) const {
    std::vector<std::size_t> out;
    out.reserve(k_offsets.size());
    for (std::size_t off : k_offsets) {
        out.push_back(base + off);
    }
    return out;
}

std::vector<std::size_t> PipelineConfig::all_r() const {
    std::vector<std::size_t> out;
    for (std::size_t base : k_bases) {
        for (std::size_t r : grid(base)) {
            out.push_back(r);
        }
    }
    return out;
}

void PipelineConfig::check(std::size_t n) const {
    if (k_bases.empty() || k_offsets.empty() || delta_grid.empty()) {
        throw std::invalid_argument("config: grids must be nonempty");
    }
    if (!(a > 1.0)) {
        throw std::invalid_argument("config: a must exceed 1");
    }
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("config: epsilon must be nonnegative");
    }
    for (double delta : delta_grid) {
        if (!(delta >= 0.0)) {
            throw std::invalid_argument("config: delta values must be nonnegative");
        }
    }
    auto in_range = [n](std::size_t k) { return k >= 1 && (n == 0 || k <= n); };
    if (!in_range(k_order)) {
        throw std::invalid_argument("config: k_order " + std::to_string(k_order) +
                                    " outside [1, n]");
    }
    for (std::size_t r : all_r()) {
        if (!in_range(r)) {
            throw std::invalid_argument("config: exceedance count " + std::to_string(r) +
                                        " outside [1, n]");
        }
    }
}

Json config_to_json(const PipelineConfig& c) {
    return Json{{"input", c.input.string()},
                {"date_column", c.date_column},
                {"negate", c.negate},
                {"k_order", c.k_order},
                {"a", c.a},
                {"epsilon", c.epsilon},
                {"k_bases", c.k_bases},
                {"k_offsets", c.k_offsets},
                {"delta_grid", c.delta_grid},
                {"seed", c.seed},
                {"output_dir", c.output_dir.string()}};
}

PipelineConfig config_from_json(const Json& j, PipelineConfig c) {
    try {
        if (j.contains("input")) c.input = j.at("input").get<std::string>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        c.date_column = j.value("date_column", c.date_column);
        c.negate = j.value("negate", c.negate);
        c.k_order = j.value("k_order", c.k_order);
        c.a = j.value("a", c.a);
        c.epsilon = j.value("epsilon", c.epsilon);
        c.k_bases = j.value("k_bases", c.k_bases);
        c.k_offsets = j.value("k_offsets", c.k_offsets);
        c.delta_grid = j.value("delta_grid", c.delta_grid);
        c.seed = j.value("seed", c.seed);
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return c;
}

StageError::StageError(std::string stage, const std::string& message)
    : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage)) {}

Matrix negate_clamp(const Matrix& x) {
    Matrix out = x;
    for (double& v : out.data()) {
        v = std::max(-v, 0.0);
    }
    return out;
}

CsvTable ingest(const PipelineConfig& config) {
    CsvTable table = read_csv(config.input, config.date_column);
    if (config.negate) {
        table.values = negate_clamp(table.values);
    }
    return table;
}

const Dag& RunReport::dag(std::size_t delta_index, std::size_t r) const {
    const auto it = std::find(r_values.begin(), r_values.end(), r);
    if (it == r_values.end()) {
        throw std::out_of_range("no DAG for r = " + std::to_string(r));
    }
    return dags.at(delta_index).at(static_cast<std::size_t>(it - r_values.begin()));
}

const CentroidCell& RunReport::delta_centroid(std::size_t delta_index) const {
    const CentroidCell* best_cell = nullptr;
    for (const auto& cell : centroids) {
        if (cell.delta_index != delta_index) {
            continue;
        }
        if (!best_cell || cell.sum < best_cell->sum ||
            (cell.sum == best_cell->sum && cell.r < best_cell->r)) {
            best_cell = &cell;
        }
    }
    if (!best_cell) {
        throw std::out_of_range("no centroid for delta index");
    }
    return *best_cell;
}

namespace {

template <class F>
auto staged(const std::string& stage, F&& body) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

std::string delta_tag(double delta) { return format_real(delta); }

std::vector<std::size_t> delta_rank(const std::vector<double>& grid) {
    std::vector<std::size_t> idx(grid.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t x, std::size_t y) { return grid[x] < grid[y]; });
    return idx;
}

}  // namespace

RunReport analyse(const Matrix& sample, NameTable names, const PipelineConfig& config) {
    staged("config", [&] {
        config.check(sample.rows());
        if (names.size() != sample.cols()) {
            throw std::invalid_argument("name table does not match the column count");
        }
        return 0;
    });

    RunReport report;
    report.config = config;
    report.names = std::move(names);
    report.n = sample.rows();
    report.r_values = config.all_r();

    report.order = staged("order", [&] {
        EmpiricalScalings source(sample, config.k_order);
        auto order = causal_order(source, config.a, config.epsilon);
        order.params.k = config.k_order;
        return order;
    });

    staged("estimate", [&] {
        std::vector<std::size_t> unique_r = report.r_values;
        std::sort(unique_r.begin(), unique_r.end());
        unique_r.erase(std::unique(unique_r.begin(), unique_r.end()), unique_r.end());
        std::vector<GridEstimate> fitted(unique_r.size());
        const TransformMatrix t = build_transform(sample.cols());
        parallel_for(unique_r.size(), [&](std::size_t u) {
            EmpiricalScalings source(sample, unique_r[u]);
            const auto s = build_scaling_vector(source, report.order);
            GridEstimate est;
            est.r = unique_r[u];
            est.A = postprocess(recover_squared_linear(s, t), report.order, &est.post);
            fitted[u] = std::move(est);
        });
        for (std::size_t r : report.r_values) {
            const auto it = std::lower_bound(unique_r.begin(), unique_r.end(), r);
            report.estimates.push_back(fitted[static_cast<std::size_t>(it - unique_r.begin())]);
        }
        return 0;
    });

    staged("dag", [&] {
        for (double delta : config.delta_grid) {
            std::vector<Dag> row;
            row.reserve(report.estimates.size());
            for (const auto& est : report.estimates) {
                row.push_back(estimated_dag(est.A, delta));
            }
            report.dags.push_back(std::move(row));
        }
        return 0;
    });

    staged("centroid", [&] {
        const std::size_t width = config.k_offsets.size();
        for (std::size_t di = 0; di < config.delta_grid.size(); ++di) {
            for (std::size_t b = 0; b < config.k_bases.size(); ++b) {
                DagEnsemble ensemble;
                ensemble.delta = config.delta_grid[di];
                for (std::size_t o = 0; o < width; ++o) {
                    ensemble.members.push_back(
                        {report.dags[di][b * width + o], report.r_values[b * width + o]});
                }
                const auto c = centroid(ensemble);
                report.centroids.push_back(
                    {di, config.k_bases[b], c.r, c.sums[c.index], c.sums});
            }
        }
        for (std::size_t c = 1; c < report.centroids.size(); ++c) {
            const auto& cand = report.centroids[c];
            const auto& best = report.centroids[report.best];
            const double dc = config.delta_grid[cand.delta_index];
            const double db = config.delta_grid[best.delta_index];
            if (cand.sum < best.sum ||
                (cand.sum == best.sum && (dc < db || (dc == db && cand.r < best.r)))) {
                report.best = c;
            }
        }
        return 0;
    });

    staged("stability", [&] {
        const auto& win = report.centroids[report.best];
        DagEnsemble ensemble;
        ensemble.delta = config.delta_grid[win.delta_index];
        for (std::size_t r : config.grid(win.base)) {
            ensemble.members.push_back({report.dag(win.delta_index, r), r});
        }
        report.stability = stability(ensemble);
        return 0;
    });
    return report;
}

void write_artifacts(RunReport& report, const fs::path& dir) {
    const auto& cfg = report.config;
    fs::create_directories(dir / "dags");
    fs::create_directories(dir / "matrices");
    report.artifacts.clear();
    auto record = [&](const fs::path& rel) {
        report.artifacts.push_back(rel);
        return dir / rel;
    };

    write_json(record("order.json"), order_to_json(report.order, report.names));

    Json estimates = Json::array();
    for (const auto& est : report.estimates) {
        const fs::path rel = fs::path("matrices") / ("A_r" + std::to_string(est.r) + ".json");
        if (std::find(report.artifacts.begin(), report.artifacts.end(), rel) ==
            report.artifacts.end()) {
            write_json(record(rel), matrix_to_json(est.A, report.names));
        }
        Json post{{"r", est.r},
                  {"file", rel.string()},
                  {"clamped_entries", est.post.clamped_entries},
                  {"degenerate_rows", est.post.degenerate_rows.size()},
                  {"zero_diagonal_rows", est.post.zero_diagonal_rows.size()}};
        estimates.push_back(post);
    }

    Json grid = Json::array();
    for (std::size_t di = 0; di < cfg.delta_grid.size(); ++di) {
        for (std::size_t ri = 0; ri < report.r_values.size(); ++ri) {
            const std::string stem =
                "dag_delta" + delta_tag(cfg.delta_grid[di]) + "_r" +
                std::to_string(report.r_values[ri]);
            const auto& g = report.dags[di][ri];
            const fs::path json_rel = fs::path("dags") / (stem + ".json");
            const fs::path dot_rel = fs::path("dags") / (stem + ".dot");
            write_json(record(json_rel), dag_to_json(g, report.names));
            write_text(record(dot_rel), dag_to_dot(g, report.names));
            grid.push_back({{"delta", cfg.delta_grid[di]},
                            {"r", report.r_values[ri]},
                            {"edges", g.edge_count()},
                            {"json", json_rel.string()},
                            {"dot", dot_rel.string()}});
        }
    }

    std::ostringstream table;
    table << "delta,base,r,sum_nshd,centroid\n";
    Json centroids = Json::array();
    const std::size_t width = cfg.k_offsets.size();
    for (std::size_t c = 0; c < report.centroids.size(); ++c) {
        const auto& cell = report.centroids[c];
        const auto members = cfg.grid(cell.base);
        for (std::size_t o = 0; o < width; ++o) {
            table << format_real(cfg.delta_grid[cell.delta_index]) << ',' << cell.base << ','
                  << members[o] << ',' << format_real(cell.sums[o]) << ','
                  << (members[o] == cell.r ? 1 : 0) << '\n';
        }
        centroids.push_back({{"delta", cfg.delta_grid[cell.delta_index]},
                             {"base", cell.base},
                             {"r", cell.r},
                             {"sum_nshd", cell.sum},
                             {"sums", cell.sums}});
    }
    write_text(record("nshd_sums.csv"), table.str());

    Json per_delta = Json::array();
    for (std::size_t di = 0; di < cfg.delta_grid.size(); ++di) {
        const auto& cell = report.delta_centroid(di);
        const std::string stem = "centroid_delta" + delta_tag(cfg.delta_grid[di]);
        const auto& g = report.dag(di, cell.r);
        write_json(record(stem + ".json"), dag_to_json(g, report.names));
        write_text(record(stem + ".dot"), dag_to_dot(g, report.names));
        per_delta.push_back({{"delta", cfg.delta_grid[di]},
                             {"base", cell.base},
                             {"r", cell.r},
                             {"sum_nshd", cell.sum},
                             {"json", stem + ".json"},
                             {"dot", stem + ".dot"}});
    }

    write_json(record("stability.json"), stability_to_json(report.stability, report.names));
    write_text(record("stability.csv"), stability_to_csv(report.stability, report.names));

    const auto& win = report.centroids[report.best];
    Json doc{{"config", config_to_json(cfg)},
             {"n", report.n},
             {"d", report.d()},
             {"names", report.names},
             {"order", order_to_json(report.order, report.names)},
             {"estimates", estimates},
             {"grid", grid},
             {"centroids", centroids},
             {"delta_centroids", per_delta},
             {"selected",
              {{"delta", cfg.delta_grid[win.delta_index]},
               {"base", win.base},
               {"r", win.r},
               {"sum_nshd", win.sum}}},
             {"stability", "stability.json"}};
    Json files = Json::array();
    for (const auto& p : report.artifacts) {
        files.push_back(p.string());
    }
    files.push_back("report.json");
    doc["artifacts"] = files;
    write_json(dir / "report.json", doc);
    report.artifacts.push_back("report.json");
}

RunReport run_pipeline(const PipelineConfig& config) {
    const fs::path dir = config.output_dir.empty() ? fs::path("rmlm-out") : config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    fs::remove(dir / "FAILED", ec);
    try {
        auto table = staged("ingest", [&] { return ingest(config); });
        auto sample = staged("transform", [&] { return frechet_transform(table.values); });
        RunReport report = analyse(sample, std::move(table.names), config);
        staged("write", [&] {
            write_artifacts(report, dir);
            return 0;
        });
        return report;
    } catch (const StageError& e) {
        write_text(dir / "FAILED", std::string(e.what()) + "\n");
        throw;
    }
}

bool delta_nested(const RunReport& report) {
    const auto rank = delta_rank(report.config.delta_grid);
    for (std::size_t step = 1; step < rank.size(); ++step) {
        const auto& looser = report.dags[rank[step - 1]];
        const auto& tighter = report.dags[rank[step]];
        for (std::size_t ri = 0; ri < tighter.size(); ++ri) {
            if (!tighter[ri].is_subgraph_of(looser[ri])) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace rmlm
