#include "istbench/table.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

#include "istbench/errors.hpp"

namespace istbench {
namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string cell_to_csv(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return "";
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return csv_escape(std::get<std::string>(cell));
}

nlohmann::json cell_to_json(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell)) return nullptr;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  return std::get<std::string>(cell);
}

void check_table(const Table& table) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw ValidationError("table row length does not match the column count");
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw ValidationError("table row length does not match the column count");
  rows.push_back(std::move(row));
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void write_csv(std::ostream& out, const Table& table, const Provenance& provenance) {
  check_table(table);
  for (const auto& [key, value] : provenance.fields.items()) {
    out << "# " << key << ": ";
    if (value.is_string())
      out << value.get<std::string>();
    else
      out << value.dump();
    out << "\n";
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ",";
    out << csv_escape(table.columns[c]);
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << cell_to_csv(row[c]);
    }
    out << "\n";
  }
}

void write_json(std::ostream& out, const Table& table, const Provenance& provenance) {
  check_table(table);
  nlohmann::json doc;
  doc["provenance"] = provenance.fields;
  auto& rows = doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json entry = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c)
      entry[table.columns[c]] = cell_to_json(row[c]);
    rows.push_back(std::move(entry));
  }
  out << doc.dump(2) << "\n";
}

void emit_table(const Table& table, const Provenance& provenance, OutputFormat format,
                const std::string& path) {
  const auto write = [&](std::ostream& out) {
    if (format == OutputFormat::kCsv)
      write_csv(out, table, provenance);
    else
      write_json(out, table, provenance);
    if (!out) throw IoError("failed while writing results");
  };
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open output file: " + path);
  write(file);
  file.close();
  if (!file) throw IoError("failed to finish writing: " + path);
}

}  // namespace istbench
