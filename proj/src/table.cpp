#include "memtwin/table.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "memtwin/format.hpp"

namespace memtwin {

namespace {

std::string cell_text(const Cell& c) {
  if (const double* num = std::get_if<double>(&c)) return fmt_double(*num);
  return std::get<std::string>(c);
}

Cell cell_from_text(const std::string& s) {
  if (s == "inf" || s == "-inf" || s == "nan") return Cell{parse_double(s)};
  try {
    return Cell{parse_double(s)};
  } catch (const std::invalid_argument&) {
    return Cell{s};
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const double* num = std::get_if<double>(&c)) {
    if (!std::isfinite(*num)) return fmt_double(*num);
    return *num;
  }
  const std::string& s = std::get<std::string>(c);
  if (s == "true") return true;
  if (s == "false") return false;
  return s;
}

}  // namespace

std::string to_csv(const ExperimentTable& table) {
  std::string out;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("row width does not match column count");
    }
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  for (const auto& [key, value] : table.footer) {
    out += "# " + key + " = " + cell_text(value) + "\n";
  }
  return out;
}

ExperimentTable from_csv(const std::string& text) {
  ExperimentTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const std::string body = line.substr(2);
      const auto eq = body.find(" = ");
      if (eq == std::string::npos) {
        throw std::invalid_argument("malformed footer line: " + line);
      }
      table.footer.emplace_back(body.substr(0, eq),
                                cell_from_text(body.substr(eq + 3)));
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      table.columns.assign(cells.begin(), cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw std::invalid_argument("row width does not match header: " + line);
    }
    std::vector<Cell> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(cell_from_text(c));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::invalid_argument("CSV input has no header row");
  return table;
}

std::string to_json(const ExperimentTable& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("row width does not match column count");
    }
    nlohmann::ordered_json obj;
    for (size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  if (!table.footer.empty()) {
    nlohmann::ordered_json obj;
    for (const auto& [key, value] : table.footer) obj[key] = cell_json(value);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string to_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["subcommand"] = manifest.subcommand;
  nlohmann::ordered_json cfg;
  for (const auto& [key, value] : manifest.config) cfg[key] = value;
  j["config"] = std::move(cfg);
  j["tool_version"] = manifest.tool_version;
  j["output_paths"] = manifest.output_paths;
  return j.dump(2) + "\n";
}

}  // namespace memtwin
