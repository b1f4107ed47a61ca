#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "istbench/table.hpp"

namespace istbench {

// Parsed experiment configuration. The JSON layout is
//
//   {
//     "experiment": "certify",
//     "seed": 7,
//     "runs": 10000,
//     "format": "csv",
//     "out": "certify.csv",
//     "certify": { ...experiment-specific block... }
//   }
//
// Exactly one experiment block may be present and its key must match
// "experiment". Unknown keys anywhere are errors that name the offending
// field. Every field except "experiment" has a default.
struct ExperimentConfig {
  std::string experiment;
  nlohmann::json block = nlohmann::json::object();
  std::uint64_t seed = 1;
  std::int64_t runs = -1;  // -1: use the experiment's default
  OutputFormat format = OutputFormat::kCsv;
  std::string out_path;  // empty: stdout

  // The config as canonical JSON (defaults filled in), echoed into output
  // provenance and usable as a config file itself.
  nlohmann::json canonical() const;
};

const std::vector<std::string>& known_experiments();

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path);

// Helper shared by the experiment parsers: rejects keys of `block` outside
// `allowed`, naming the field and context in the ConfigError.
void require_known_keys(const nlohmann::json& block,
                        std::initializer_list<const char*> allowed,
                        const std::string& context);

}  // namespace istbench
