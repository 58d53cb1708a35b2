#pragma once

// External formats. Nodes are 1-based in every file; names come from a name table.
//
//   matrix : {"d": int, "names": [string], "A": [[real]], "standardised": bool}
//   model  : matrix fields plus {"alpha": 2, "seed": int}
//   dag    : {"d": int, "names": [string], "edges": [[j, i]]}   (edge j -> i)
//   order  : {"steps": [[name]], "order": [name], "a": real, "epsilon": real, "k": int}
//   csv    : header row of names, one observation per line

#include "rmlm/matrix.hpp"
#include "rmlm/metrics.hpp"
#include "rmlm/model.hpp"
#include "rmlm/order.hpp"
#include "rmlm/tropical.hpp"

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rmlm {

using Json = nlohmann::json;
using NameTable = std::vector<std::string>;

/// "1", "2", ..., "d".
NameTable default_names(std::size_t d);

/// Index of `name` in the table; throws std::invalid_argument if absent.
std::size_t lookup_name(const NameTable& names, const std::string& name);

Json matrix_to_json(const MaxLinearMatrix& a, const NameTable& names);
/// Throws std::invalid_argument on malformed input.
MaxLinearMatrix matrix_from_json(const Json& j, NameTable* names = nullptr);

Json model_to_json(const RmlmModel& model, const NameTable& names);
RmlmModel model_from_json(const Json& j, NameTable* names = nullptr);

Json dag_to_json(const Dag& dag, const NameTable& names);
Dag dag_from_json(const Json& j, NameTable* names = nullptr);

/// digraph with one "from" -> "to" line per edge, labelled by name.
std::string dag_to_dot(const Dag& dag, const NameTable& names);

Json order_to_json(const OrderResult& order, const NameTable& names);
OrderResult order_from_json(const Json& j, const NameTable& names);

Json stability_to_json(const StabilityScore& score, const NameTable& names);
/// from,to,count lines, most stable first.
std::string stability_to_csv(const StabilityScore& score, const NameTable& names);

struct CsvTable {
    NameTable names;
    Matrix values;
};

/// Parses a header row plus numeric rows. With `date_column` the first column
/// of every line is ignored. Throws std::runtime_error on ragged rows,
/// non-numeric cells, or fewer than 2 value columns.
CsvTable read_csv(std::istream& in, bool date_column = false);
CsvTable read_csv(const std::filesystem::path& path, bool date_column = false);

void write_csv(std::ostream& out, const NameTable& names, const Matrix& values);
void write_csv(const std::filesystem::path& path, const NameTable& names, const Matrix& values);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip decimal form, locale independent.
std::string format_real(double v);

}  // namespace rmlm
