#pragma once

// Domain and skeleton files, and tabular output in CSV or JSON.
//
// Domain files hold {"X": D, "Y": D} with D = {"intervals": [[lo, hi], ...]}
// or {"points": [p, ...]}. Numbers are written with 17 significant digits
// so that every finite double survives a round trip; infinities and NaN
// appear as inf, -inf and nan.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zolo/domains.hpp"
#include "zolo/skeleton.hpp"

namespace zolo {

using Json = nlohmann::ordered_json;

/// Throws ValidationError on malformed input.
Domain domain_from_json(const Json& j);
Json domain_to_json(const Domain& d);

/// Reads {"X": ..., "Y": ...} from a file. Throws ValidationError when the
/// file cannot be read or parsed.
std::pair<Domain, Domain> load_domain_pair(const std::string& path);

Json skeleton_to_json(const SkeletonDecomposition& dec);
/// Rebuilds the decomposition from its nodes and form; stored weights are
/// recomputed and must agree with the file to 1e-12 relative.
SkeletonDecomposition skeleton_from_json(const Json& j);

/// Shortest decimal form that parses back to the same double ("%.17g"
/// trimmed), or inf / -inf / nan.
std::string format_double(double v);
/// Inverse of format_double; throws ValidationError on trailing garbage.
double parse_double(const std::string& s);

/// Rows of typed cells. Cells are JSON values: numbers, booleans, strings,
/// arrays of numbers (joined with ';' in CSV) or objects (compact JSON in
/// CSV).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void add_row(std::vector<Json> row);
};

enum class OutputFormat { Csv, Json };

OutputFormat output_format_from_string(const std::string& s);

/// Metadata lines are written as "# key: value" before the CSV header, or
/// as a "meta" object in JSON. An empty list writes none.
void write_table(std::ostream& os, const Table& t, OutputFormat fmt,
                 const std::vector<std::pair<std::string, std::string>>& meta = {});

/// Header and string cells of a CSV written by write_table; '#' lines are
/// skipped and quoted fields are unquoted.
struct CsvData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

CsvData read_csv(std::istream& is);

}  // namespace zolo
