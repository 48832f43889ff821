#include "zolo/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "zolo/errors.hpp"

namespace zolo {

namespace {

double number_from(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(v.get<std::string>());
  throw ValidationError("expected a number, got " + v.dump());
}

Json number_to(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json weights_to_json(const std::vector<ScaledProduct>& w) {
  Json a = Json::array();
  for (const auto& p : w) a.push_back({{"mantissa", number_to(p.mantissa)}, {"exponent", p.exponent}});
  return a;
}

std::vector<double> numbers_from(const Json& a, const char* what) {
  if (!a.is_array()) throw ValidationError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& v : a) out.push_back(number_from(v));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string cell_text(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += v[i].is_number_float() ? format_double(v[i].get<double>()) : cell_text(v[i]);
    }
    return s;
  }
  return v.dump();
}

// JSON has no infinities; they travel as strings.
Json json_safe(const Json& v) {
  if (v.is_number_float() && !std::isfinite(v.get<double>())) return format_double(v.get<double>());
  if (v.is_array() || v.is_object()) {
    Json out = v;
    for (auto& e : out) e = json_safe(e);
    return out;
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Domain domain_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("domain must be a JSON object");
  const bool has_i = j.contains("intervals"), has_p = j.contains("points");
  if (has_i == has_p) throw ValidationError("domain needs exactly one of \"intervals\" or \"points\"");
  if (has_p) return Domain::points(numbers_from(j.at("points"), "points"));
  std::vector<Interval> pieces;
  const auto& a = j.at("intervals");
  if (!a.is_array()) throw ValidationError("intervals must be an array");
  for (const auto& iv : a) {
    if (!iv.is_array() || iv.size() != 2) throw ValidationError("each interval must be [lo, hi]");
    pieces.push_back({number_from(iv[0]), number_from(iv[1])});
  }
  return Domain::intervals(std::move(pieces));
}

Json domain_to_json(const Domain& d) {
  Json j;
  if (d.kind() == Domain::Kind::PointSet) {
    Json a = Json::array();
    for (double p : d.point_values()) a.push_back(number_to(p));
    j["points"] = a;
  } else {
    Json a = Json::array();
    for (const auto& p : d.pieces()) a.push_back(Json::array({number_to(p.lo), number_to(p.hi)}));
    j["intervals"] = a;
  }
  return j;
}

std::pair<Domain, Domain> load_domain_pair(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open domain file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("domain file " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("X") || !j.contains("Y"))
    throw ValidationError("domain file " + path + " needs \"X\" and \"Y\"");
  return {domain_from_json(j.at("X")), domain_from_json(j.at("Y"))};
}

Json skeleton_to_json(const SkeletonDecomposition& dec) {
  Json j;
  j["form"] = to_string(dec.form);
  j["r"] = dec.r;
  Json xs = Json::array(), ys = Json::array();
  for (double v : dec.x_nodes) xs.push_back(number_to(v));
  for (double v : dec.y_nodes) ys.push_back(number_to(v));
  j["x_nodes"] = xs;
  j["y_nodes"] = ys;
  j["u_weights"] = weights_to_json(dec.u_weights);
  j["v_weights"] = weights_to_json(dec.v_weights);
  return j;
}

SkeletonDecomposition skeleton_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("skeleton must be a JSON object");
  try {
    const auto form = skeleton_form_from_string(j.at("form").get<std::string>());
    auto dec = make_skeleton(numbers_from(j.at("x_nodes"), "x_nodes"), numbers_from(j.at("y_nodes"), "y_nodes"), form);
    if (j.contains("r") && j.at("r").get<int>() != dec.r) throw ValidationError("skeleton rank disagrees with its nodes");
    for (const char* key : {"u_weights", "v_weights"}) {
      if (!j.contains(key)) continue;
      const auto& stored = j.at(key);
      const auto& mine = std::string(key) == "u_weights" ? dec.u_weights : dec.v_weights;
      if (stored.size() != mine.size()) throw ValidationError(std::string(key) + " has the wrong length");
      for (std::size_t i = 0; i < mine.size(); ++i) {
        ScaledProduct w;
        w.mantissa = number_from(stored[i].at("mantissa"));
        w.exponent = stored[i].at("exponent").get<long>();
        if (w.sign() != mine[i].sign() || std::abs(w.log_abs() - mine[i].log_abs()) > 1e-12 * std::max(1.0, std::abs(w.log_abs())))
          throw ValidationError(std::string(key) + " disagree with the nodes");
      }
    }
    return dec;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("skeleton: ") + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

void Table::add_row(std::vector<Json> row) {
  if (row.size() != columns.size()) throw ValidationError("table row has the wrong number of cells");
  rows.push_back(std::move(row));
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ValidationError("unknown format '" + s + "' (csv or json)");
}

void write_table(std::ostream& os, const Table& t, OutputFormat fmt,
                 const std::vector<std::pair<std::string, std::string>>& meta) {
  if (fmt == OutputFormat::Csv) {
    for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
      os << '\n';
    }
    return;
  }
  Json j;
  if (!meta.empty()) {
    Json m = Json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    j["meta"] = m;
  }
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json o = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = json_safe(row[i]);
    rows.push_back(o);
  }
  j["rows"] = rows;
  os << j.dump(2) << '\n';
}

std::size_t CsvData::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ValidationError("no column named " + name);
}

CsvData read_csv(std::istream& is) {
  CsvData d;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_csv_line(line);
    if (header) {
      d.columns = std::move(fields);
      header = false;
    } else {
      if (fields.size() != d.columns.size()) throw ValidationError("CSV row has the wrong number of fields");
      d.rows.push_back(std::move(fields));
    }
  }
  return d;
}

}  // namespace zolo
