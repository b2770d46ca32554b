#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "metrobound/error.hpp"

namespace metrobound::cli {

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool Params::has(const std::string& key) const { return doc_.contains(key) && !doc_[key].is_null(); }

const json& Params::at(const std::string& key) const {
  if (!has(key)) fail(ErrorKind::InvalidInput, "missing parameter '" + key + "'");
  return doc_[key];
}

double Params::number(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number()) fail(ErrorKind::InvalidInput, "parameter '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(ErrorKind::InvalidInput, "parameter '" + key + "' must be finite");
  return d;
}

double Params::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int Params::integer(const std::string& key) const {
  const double d = number(key);
  if (d != std::floor(d) || std::abs(d) > 1e9) {
    fail(ErrorKind::InvalidInput, "parameter '" + key + "' must be an integer");
  }
  return static_cast<int>(d);
}

int Params::integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

std::string Params::text(const std::string& key) const {
  const json& v = at(key);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string Params::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

bool Params::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const json& v = doc_[key];
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number()) return v.get<double>() != 0.0;
  fail(ErrorKind::InvalidInput, "parameter '" + key + "' must be a boolean");
}

std::vector<double> Params::numbers(const std::string& key) const {
  const json& v = at(key);
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  if (!v.is_array()) fail(ErrorKind::InvalidInput, "parameter '" + key + "' must be a list of numbers");
  for (const json& e : v) {
    if (!e.is_number()) fail(ErrorKind::InvalidInput, "parameter '" + key + "' must be a list of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

json parse_scalar(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return text;
  return v;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot read input file " + path);
  json v = json::parse(in, nullptr, false);
  if (v.is_discarded() || !v.is_object()) fail(ErrorKind::InvalidInput, "input file " + path + " is not a JSON object");
  return v;
}

void Table::add(std::vector<json> row) {
  if (row.size() != columns.size()) fail(ErrorKind::InvalidInput, "row width does not match the columns of " + title);
  rows.push_back(std::move(row));
}

namespace {

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number()) return fmt12(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += cell(v[i]);
    }
    return s;
  }
  return cell(json(v.dump()));
}

}  // namespace

std::string to_csv(const Table& t) {
  std::ostringstream os;
  os << "# " << t.title << "\n# columns:";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? ", " : " ") << t.columns[i].name << " [" << (t.columns[i].unit.empty() ? "-" : t.columns[i].unit)
       << "]";
  }
  os << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i].name;
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << "\n";
  }
  return os.str();
}

Table record_table(const std::string& title, const json& record) {
  Table t;
  t.title = title;
  std::vector<json> row;
  for (auto it = record.begin(); it != record.end(); ++it) {
    t.columns.push_back({it.key(), ""});
    row.push_back(it.value());
  }
  t.add(std::move(row));
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::InvalidInput, "failed writing " + path);
}

void emit(const std::string& title, const json& result, const std::string& format, const std::string& output) {
  std::string text;
  if (format == "json") {
    text = result.dump(2) + "\n";
  } else if (format == "csv") {
    text = to_csv(record_table(title, result));
  } else {
    fail(ErrorKind::InvalidInput, "unknown format " + format);
  }
  if (output.empty() || output == "-") {
    std::cout << text << std::flush;
  } else {
    write_text(output, text);
  }
}

Axis parse_axis(const std::string& s) {
  if (s == "x" || s == "X" || s == "Jx") return Axis::X;
  if (s == "y" || s == "Y" || s == "Jy") return Axis::Y;
  if (s == "z" || s == "Z" || s == "Jz") return Axis::Z;
  fail(ErrorKind::InvalidInput, "unknown axis " + s);
}

Basis::Kind parse_basis(const std::string& s) {
  if (s == "symmetric") return Basis::Kind::Symmetric;
  if (s == "full") return Basis::Kind::Full;
  fail(ErrorKind::InvalidInput, "unknown basis " + s);
}

}  // namespace metrobound::cli
