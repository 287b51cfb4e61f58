#pragma once
// Tabular experiment output: CSV and JSON emission with deterministic float
// formatting, plus the run manifest written next to every data file.

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace memtwin {

// A cell is either a number (formatted as shortest round-trip decimal) or
// verbatim text (used for booleans and labels).
using Cell = std::variant<double, std::string>;

struct ExperimentTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;  // each row matches columns in length
  std::vector<std::pair<std::string, Cell>> footer;  // summary values
};

// Header line, one line per row, then "# key = value" footer lines.
std::string to_csv(const ExperimentTable& table);

// Inverse of to_csv for tables we produced; numeric-looking cells parse back
// to numbers so that to_csv(from_csv(s)) == s.
ExperimentTable from_csv(const std::string& text);

// Array of one flat object per row; the footer (when present) is appended as
// a final object.  Non-finite numbers are emitted as the strings "inf"/"nan".
std::string to_json(const ExperimentTable& table);

struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> config;  // resolved settings
  std::string tool_version;
  std::vector<std::string> output_paths;
};

std::string to_json(const RunManifest& manifest);

}  // namespace memtwin
