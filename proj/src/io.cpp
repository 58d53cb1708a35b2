#include "rmlm/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rmlm {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\"");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

NameTable names_or_default(const Json& j, std::size_t d) {
    if (!j.contains("names")) {
        return default_names(d);
    }
    auto names = j.at("names").get<NameTable>();
    if (names.size() != d) {
        throw std::invalid_argument("name table length does not match d");
    }
    return names;
}

Matrix square_from_json(const Json& rows, std::size_t d) {
    if (!rows.is_array() || rows.size() != d) {
        throw std::invalid_argument("matrix JSON: expected d rows");
    }
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (!rows[i].is_array() || rows[i].size() != d) {
            throw std::invalid_argument("matrix JSON: row " + std::to_string(i + 1) +
                                        " has the wrong length");
        }
        for (std::size_t k = 0; k < d; ++k) {
            m(i, k) = rows[i][k].get<double>();
        }
    }
    return m;
}

}  // namespace

NameTable default_names(std::size_t d) {
    NameTable names(d);
    for (std::size_t i = 0; i < d; ++i) {
        names[i] = std::to_string(i + 1);
    }
    return names;
}

std::size_t lookup_name(const NameTable& names, const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
        throw std::invalid_argument("unknown node name '" + name + "'");
    }
    return static_cast<std::size_t>(it - names.begin());
}

Json matrix_to_json(const MaxLinearMatrix& a, const NameTable& names) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.size(); ++i) {
        rows.push_back(std::vector<double>(a.A.row(i).begin(), a.A.row(i).end()));
    }
    return Json{{"d", a.size()}, {"names", names}, {"A", rows}, {"standardised", a.standardised}};
}

MaxLinearMatrix matrix_from_json(const Json& j, NameTable* names) {
    try {
        const auto d = j.at("d").get<std::size_t>();
        MaxLinearMatrix out{square_from_json(j.at("A"), d),
                            j.value("standardised", false)};
        if (names) {
            *names = names_or_default(j, d);
        }
        return out;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("matrix JSON: ") + e.what());
    }
}

Json model_to_json(const RmlmModel& model, const NameTable& names) {
    Json j = matrix_to_json(model.coefficients(), names);
    j["alpha"] = model.alpha();
    j["seed"] = model.seed();
    return j;
}

RmlmModel model_from_json(const Json& j, NameTable* names) {
    auto a = matrix_from_json(j, names);
    return RmlmModel(std::move(a), j.value("alpha", 2.0), j.value("seed", std::uint64_t{0}));
}

Json dag_to_json(const Dag& dag, const NameTable& names) {
    Json edges = Json::array();
    for (const auto& e : dag.edges()) {
        edges.push_back({e.from + 1, e.to + 1});
    }
    return Json{{"d", dag.size()}, {"names", names}, {"edges", edges}};
}

Dag dag_from_json(const Json& j, NameTable* names) {
    try {
        const auto d = j.at("d").get<std::size_t>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            const auto from = e.at(0).get<std::size_t>();
            const auto to = e.at(1).get<std::size_t>();
            if (from < 1 || to < 1 || from > d || to > d) {
                throw std::invalid_argument("dag JSON: edge label out of range");
            }
            edges.push_back({from - 1, to - 1});
        }
        if (names) {
            *names = names_or_default(j, d);
        }
        return Dag(d, std::move(edges));
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("dag JSON: ") + e.what());
    }
}

std::string dag_to_dot(const Dag& dag, const NameTable& names) {
    std::ostringstream os;
    os << "digraph D {\n";
    for (std::size_t v = 0; v < dag.size(); ++v) {
        os << "  \"" << names[v] << "\";\n";
    }
    for (const auto& e : dag.edges()) {
        os << "  \"" << names[e.from] << "\" -> \"" << names[e.to] << "\";\n";
    }
    os << "}\n";
    return os.str();
}

Json order_to_json(const OrderResult& order, const NameTable& names) {
    Json steps = Json::array();
    for (const auto& step : order.steps) {
        Json group = Json::array();
        for (std::size_t v : step) {
            group.push_back(names[v]);
        }
        steps.push_back(group);
    }
    Json seq = Json::array();
    for (std::size_t v : order.order) {
        seq.push_back(names[v]);
    }
    return Json{{"steps", steps},
                {"order", seq},
                {"a", order.params.a},
                {"epsilon", order.params.epsilon},
                {"k", order.params.k}};
}

OrderResult order_from_json(const Json& j, const NameTable& names) {
    try {
        OrderResult out;
        for (const auto& step : j.at("steps")) {
            std::vector<std::size_t> group;
            for (const auto& name : step) {
                group.push_back(lookup_name(names, name.get<std::string>()));
            }
            out.steps.push_back(std::move(group));
        }
        for (const auto& name : j.at("order")) {
            out.order.push_back(lookup_name(names, name.get<std::string>()));
        }
        out.params = {j.value("a", kDefaultScale), j.value("epsilon", kDefaultEpsilon),
                      j.value("k", std::size_t{0})};
        std::vector<std::size_t> check = out.order;
        std::sort(check.begin(), check.end());
        for (std::size_t v = 0; v < check.size(); ++v) {
            if (check[v] != v) {
                throw std::invalid_argument("order JSON: order is not a permutation");
            }
        }
        if (check.size() != names.size()) {
            throw std::invalid_argument("order JSON: order does not cover every node");
        }
        return out;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("order JSON: ") + e.what());
    }
}

Json stability_to_json(const StabilityScore& score, const NameTable& names) {
    Json edges = Json::array();
    for (const auto& ec : score.edges()) {
        edges.push_back(
            {{"from", names[ec.edge.from]}, {"to", names[ec.edge.to]}, {"count", ec.count}});
    }
    Json buckets = Json::array();
    const auto grouped = score.buckets();
    for (std::size_t c = 0; c < grouped.size(); ++c) {
        Json bucket = Json::array();
        for (const auto& e : grouped[c]) {
            bucket.push_back({names[e.from], names[e.to]});
        }
        buckets.push_back({{"count", c + 1}, {"edges", bucket}});
    }
    return Json{{"members", score.members}, {"edges", edges}, {"buckets", buckets}};
}

std::string stability_to_csv(const StabilityScore& score, const NameTable& names) {
    std::ostringstream os;
    os << "from,to,count\n";
    for (const auto& ec : score.edges()) {
        os << names[ec.edge.from] << ',' << names[ec.edge.to] << ',' << ec.count << '\n';
    }
    return os.str();
}

CsvTable read_csv(std::istream& in, bool date_column) {
    std::string line;
    std::size_t line_no = 0;
    CsvTable table;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            break;
        }
    }
    auto header = split_line(line);
    if (date_column && !header.empty()) {
        header.erase(header.begin());
    }
    if (header.size() < 2) {
        throw std::runtime_error("csv: need at least 2 value columns, found " +
                                 std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c].empty()) {
            header[c] = std::to_string(c + 1);
        }
    }
    table.names = header;
    const std::size_t cols = header.size();
    std::vector<double> data;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (date_column && !cells.empty()) {
            cells.erase(cells.begin());
        }
        if (cells.size() != cols) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(cols) + " values, found " +
                                     std::to_string(cells.size()));
        }
        for (const auto& cell : cells) {
            double v = 0.0;
            const char* end = cell.data() + cell.size();
            auto [ptr, ec] = std::from_chars(cell.data(), end, v);
            if (ec != std::errc() || ptr != end || cell.empty()) {
                throw std::runtime_error("csv line " + std::to_string(line_no) +
                                         ": non-numeric cell '" + cell + "'");
            }
            data.push_back(v);
        }
        ++rows;
    }
    table.values = Matrix(rows, cols);
    std::copy(data.begin(), data.end(), table.values.data().begin());
    return table;
}

CsvTable read_csv(const std::filesystem::path& path, bool date_column) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_csv(in, date_column);
}

void write_csv(std::ostream& out, const NameTable& names, const Matrix& values) {
    for (std::size_t c = 0; c < names.size(); ++c) {
        out << (c ? "," : "") << names[c];
    }
    out << '\n';
    for (std::size_t r = 0; r < values.rows(); ++r) {
        const auto row = values.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_real(row[c]);
        }
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const NameTable& names, const Matrix& values) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_csv(out, names, values);
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace rmlm
