#include "screwkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "screwkit/error.hpp"

namespace screwkit {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

Json canonical_json(const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      Json out = Json::object();
      for (const auto& item : j.items()) out[item.key()] = canonical_json(item.value());
      return out;
    }
    case Json::value_t::array: {
      Json out = Json::array();
      for (const auto& v : j) out.push_back(canonical_json(v));
      return out;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) return "nan";
      if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
      const double rounded = std::strtod(format_number(v).c_str(), nullptr);
      return rounded == 0.0 ? 0.0 : rounded;
    }
    default:
      return j;
  }
}

std::string render_json(const Json& j) { return canonical_json(j).dump(2) + "\n"; }

std::string render_jsonl(const std::vector<Json>& records) {
  std::string out;
  for (const auto& r : records) out += canonical_json(r).dump() + "\n";
  return out;
}

std::string render_table(const Table& table) {
  std::vector<std::size_t> width(table.header.size(), 0);
  const auto widen = [&](const std::vector<std::string>& row) {
    if (row.size() > width.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  };
  widen(table.header);
  for (const auto& r : table.rows) widen(r);
  const auto line = [&](const std::vector<std::string>& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size()) out += std::string(width[i] - row[i].size() + 2, ' ');
    }
    return out + "\n";
  };
  std::string out = line(table.header);
  std::size_t total = 0;
  for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i + 1 < width.size() ? 2 : 0);
  out += std::string(total, '-') + "\n";
  for (const auto& r : table.rows) out += line(r);
  return out;
}

std::map<std::string, std::string> report_files(const Report& report) {
  Json j{{"command", report.command}, {"results", report.results}};
  Json rows = Json::array();
  for (const auto& r : report.summary.rows) rows.push_back(r);
  j["summary"] = {{"header", report.summary.header}, {"rows", rows}};
  return {{"report.json", render_json(j)}, {"summary.txt", render_table(report.summary)}};
}

void write_files(const std::string& out_dir, const std::map<std::string, std::string>& files) {
  for (const auto& [name, content] : files) {
    write_text_file((std::filesystem::path(out_dir) / name).string(), content);
  }
}

void emit_report(const Report& report, const std::string& out_dir) { write_files(out_dir, report_files(report)); }

}  // namespace screwkit
