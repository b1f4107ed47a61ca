#include "istbench/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "istbench/errors.hpp"

namespace istbench {

const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> names = {"wstate",  "certify", "return-prob",
                                                 "spdc",    "bmv",     "sweep"};
  return names;
}

void require_known_keys(const nlohmann::json& block,
                        std::initializer_list<const char*> allowed,
                        const std::string& context) {
  if (!block.is_object()) throw ConfigError(context + " must be a JSON object");
  for (const auto& [key, value] : block.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* name) { return key == name; }))
      throw ConfigError("unknown field \"" + key + "\" in " + context);
  }
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig config;
  const auto& names = known_experiments();

  if (!doc.contains("experiment") || !doc["experiment"].is_string())
    throw ConfigError("config needs a string field \"experiment\"");
  config.experiment = doc["experiment"].get<std::string>();
  if (std::find(names.begin(), names.end(), config.experiment) == names.end())
    throw ConfigError("unknown experiment \"" + config.experiment + "\"");

  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") continue;
    if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer())
        throw ConfigError("field \"seed\" must be a nonnegative integer");
      const auto seed = value.get<std::int64_t>();
      if (seed < 0) throw ConfigError("field \"seed\" must be a nonnegative integer");
      config.seed = static_cast<std::uint64_t>(seed);
    } else if (key == "runs") {
      if (!value.is_number_integer() && !value.is_number_unsigned())
        throw ConfigError("field \"runs\" must be an integer");
      config.runs = value.get<std::int64_t>();
      if (config.runs < 0) throw ConfigError("field \"runs\" must be nonnegative");
    } else if (key == "format") {
      const std::string format = value.is_string() ? value.get<std::string>() : "";
      if (format == "csv")
        config.format = OutputFormat::kCsv;
      else if (format == "json")
        config.format = OutputFormat::kJson;
      else
        throw ConfigError("field \"format\" must be \"csv\" or \"json\"");
    } else if (key == "out") {
      if (!value.is_string()) throw ConfigError("field \"out\" must be a string path");
      config.out_path = value.get<std::string>();
    } else if (key == config.experiment) {
      if (!value.is_object())
        throw ConfigError("experiment block \"" + key + "\" must be a JSON object");
      config.block = value;
    } else if (std::find(names.begin(), names.end(), key) != names.end()) {
      throw ConfigError("experiment block \"" + key + "\" does not match experiment \"" +
                        config.experiment + "\"");
    } else {
      throw ConfigError("unknown field \"" + key + "\" in config");
    }
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  if (file.bad()) throw IoError("cannot read config file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config JSON parse failure in " + path + ": " + e.what());
  }
  return parse_config(doc);
}

nlohmann::json ExperimentConfig::canonical() const {
  nlohmann::json doc;
  doc["experiment"] = experiment;
  doc["seed"] = seed;
  if (runs >= 0) doc["runs"] = runs;
  doc["format"] = format == OutputFormat::kCsv ? "csv" : "json";
  if (!out_path.empty()) doc["out"] = out_path;
  if (!block.empty()) doc[experiment] = block;
  return doc;
}

}  // namespace istbench
