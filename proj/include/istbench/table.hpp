#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace istbench {

// One result table plus the provenance needed to regenerate it. Output is
// deterministic: doubles are printed with "%.12g", JSON objects serialize
// with sorted keys, and no timestamps or environment details are recorded,
// so identical configs and seeds yield byte-identical files.

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;  // each row matches columns in length

  void add_row(std::vector<Cell> row);
};

// Serialized into the output: the echoed config, seed, version, experiment
// name, and any experiment-specific annotations (detector labelings,
// distinguishability reports, ...).
struct Provenance {
  nlohmann::json fields = nlohmann::json::object();
};

enum class OutputFormat { kCsv, kJson };

std::string format_double(double value);  // shortest %.12g form

// CSV: "# key: value" provenance header lines, then a column-name row, then
// data rows. Empty cells stay empty.
void write_csv(std::ostream& out, const Table& table, const Provenance& provenance);

// JSON: {"provenance": {...}, "rows": [{column: value, ...}, ...]}.
void write_json(std::ostream& out, const Table& table, const Provenance& provenance);

// Writes to `path`, or to stdout when `path` is empty. Filesystem failures
// raise IoError.
void emit_table(const Table& table, const Provenance& provenance, OutputFormat format,
                const std::string& path);

}  // namespace istbench
