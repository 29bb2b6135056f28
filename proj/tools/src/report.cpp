#include <algorithm>
#include <charconv>
#include <string>

#include "json.hpp"

#include "preciseum_demo/demo.hpp"

namespace preciseum::demo {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void add_column(std::vector<std::string>& columns, const std::string& key) {
  if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
}

}  // namespace

const std::string& ReportRow::text_at(const std::string& key) const {
  for (const auto& [k, v] : text) {
    if (k == key) return v;
  }
  throw std::out_of_range("no text cell '" + key + "' in row " + label);
}

double ReportRow::number_at(const std::string& key) const {
  for (const auto& [k, v] : numbers) {
    if (k == key) return v;
  }
  throw std::out_of_range("no number cell '" + key + "' in row " + label);
}

const ReportRow& DemoReport::row(const std::string& label) const {
  for (const auto& r : rows) {
    if (r.label == label) return r;
  }
  throw std::out_of_range("no row '" + label + "' in report " + demo);
}

std::string to_table(const DemoReport& report) {
  std::vector<std::string> columns{"label"};
  for (const auto& r : report.rows) {
    for (const auto& cell : r.text) add_column(columns, cell.first);
    for (const auto& cell : r.numbers) add_column(columns, cell.first);
  }
  std::vector<std::vector<std::string>> grid{columns};
  for (const auto& r : report.rows) {
    std::vector<std::string> line(columns.size());
    line[0] = r.label;
    for (std::size_t c = 1; c < columns.size(); ++c) {
      for (const auto& [k, v] : r.text) {
        if (k == columns[c]) line[c] = v;
      }
      for (const auto& [k, v] : r.numbers) {
        if (k == columns[c]) line[c] = shortest(v);
      }
    }
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(columns.size(), 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::string out = "# " + report.demo + "\n";
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      text += line[c];
      if (c + 1 < line.size()) text.append(width[c] - line[c].size() + 2, ' ');
    }
    out += text + "\n";
  }
  return out;
}

namespace {

nlohmann::ordered_json report_doc(const DemoReport& report) {
  nlohmann::ordered_json doc;
  doc["demo"] = report.demo;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["label"] = r.label;
    row["text"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.text) row["text"][k] = v;
    row["numbers"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.numbers) row["numbers"][k] = v;
    doc["rows"].push_back(std::move(row));
  }
  return doc;
}

}  // namespace

std::string to_json(const DemoReport& report) { return report_doc(report).dump(2) + "\n"; }

std::string to_json(const std::vector<DemoReport>& reports) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) doc.push_back(report_doc(r));
  return doc.dump(2) + "\n";
}

}  // namespace preciseum::demo
