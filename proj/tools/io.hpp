#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "metrobound/spin_algebra.hpp"

namespace metrobound::cli {

using json = nlohmann::json;

struct RunContext {
  std::uint64_t seed = 0;
  int threads = 1;
};

// Rounds to 12 significant digits so that JSON output carries exactly what CSV output prints.
double round12(double v);
json num(double v);
std::string fmt12(double v);

// Key/value view of a job's JSON document with typed, validated lookups.
class Params {
 public:
  explicit Params(json doc) : doc_(std::move(doc)) {}

  const json& doc() const { return doc_; }
  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::string text(const std::string& key) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  const json& at(const std::string& key) const;

 private:
  json doc_;
};

// Parses a command-line value as JSON where possible, otherwise as a string.
json parse_scalar(const std::string& text);
json read_json_file(const std::string& path);

struct Column {
  std::string name;
  std::string unit;
};

struct Table {
  std::string title;
  std::vector<Column> columns;
  std::vector<std::vector<json>> rows;

  void add(std::vector<json> row);
};

// CSV with a commented header naming columns and units.
std::string to_csv(const Table& t);
// Single-row table built from a flat JSON object.
Table record_table(const std::string& title, const json& record);

void write_text(const std::string& path, const std::string& text);
// Prints `result` as JSON or CSV to `output`, or to stdout when `output` is empty.
void emit(const std::string& title, const json& result, const std::string& format, const std::string& output);

Axis parse_axis(const std::string& s);
Basis::Kind parse_basis(const std::string& s);

}  // namespace metrobound::cli
