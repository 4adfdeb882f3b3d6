#pragma once

#include <map>
#include <string>
#include <vector>

#include "screwkit/io.hpp"

namespace screwkit {

/// Copy of j with every floating-point number rounded to 9 significant
/// digits; non-finite numbers become the strings "inf", "-inf" and "nan".
Json canonical_json(const Json& j);

/// Sorted keys, 2-space indent, trailing newline.
std::string render_json(const Json& j);
/// One compact canonical object per line.
std::string render_jsonl(const std::vector<Json>& records);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Left-aligned, space padded columns.
std::string render_table(const Table& table);

/// Formats a number with 9 significant digits.
std::string format_number(double v);

struct Report {
  std::string command;
  Json results = Json::object();
  Table summary;
};

/// report.json and summary.txt.
std::map<std::string, std::string> report_files(const Report& report);

/// Writes every file below out_dir. Throws kIo when a file cannot be written.
void write_files(const std::string& out_dir, const std::map<std::string, std::string>& files);

void emit_report(const Report& report, const std::string& out_dir);

}  // namespace screwkit
