#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "istbench/config.hpp"
#include "istbench/errors.hpp"
#include "istbench/experiments.hpp"
#include "istbench/optics.hpp"
#include "istbench/version.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::int64_t seed = -1;
  std::string dump_network_path;
};

void add_common_options(CLI::App* cmd, CommonOptions& options, bool network_backed) {
  cmd->add_option("--config", options.config_path, "JSON config file");
  cmd->add_option("--seed", options.seed, "Master seed (overrides the config)");
  cmd->add_option("--out", options.out_path,
                  "Output path (overrides the config; default stdout)");
  cmd->add_option("--format", options.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  if (network_backed)
    cmd->add_option("--dump-network", options.dump_network_path,
                    "Also write the element list of the network as JSON");
}

istbench::ExperimentConfig build_config(const std::string& experiment,
                                        const CommonOptions& options) {
  istbench::ExperimentConfig config;
  if (!options.config_path.empty()) {
    config = istbench::load_config_file(options.config_path);
    if (config.experiment != experiment)
      throw istbench::ConfigError("config is for experiment \"" + config.experiment +
                                  "\" but the \"" + experiment +
                                  "\" subcommand was invoked");
  } else {
    config.experiment = experiment;
  }
  if (options.seed >= 0) config.seed = static_cast<std::uint64_t>(options.seed);
  if (!options.out_path.empty()) config.out_path = options.out_path;
  if (options.format == "csv") config.format = istbench::OutputFormat::kCsv;
  if (options.format == "json") config.format = istbench::OutputFormat::kJson;
  return config;
}

void dump_network(const istbench::ExperimentConfig& config, const std::string& path) {
  // The network-backed experiments all build the splitter cascade; certify
  // additionally uses the recombiner, which is emitted alongside.
  const auto iterations = static_cast<int>(
      config.block.contains("iterations") ? config.block["iterations"].get<std::int64_t>()
                                          : (config.experiment == "certify" ? 2 : 3));
  nlohmann::json doc;
  auto cascade = istbench::build_w_network(iterations);
  if (config.block.contains("loss_per_element"))
    cascade.loss_per_element = config.block["loss_per_element"].get<double>();
  doc["cascade"] = nlohmann::json::parse(istbench::network_to_json(cascade));
  if (config.experiment == "certify") {
    auto recombiner = istbench::build_certification_network(iterations);
    recombiner.loss_per_element = cascade.loss_per_element;
    doc["recombiner"] = nlohmann::json::parse(istbench::network_to_json(recombiner));
  }
  std::ofstream file(istbench::resolve_out_path(path), std::ios::binary);
  if (!file) throw istbench::IoError("cannot open network dump file: " + path);
  file << doc.dump(2) << "\n";
  if (!file) throw istbench::IoError("failed to write network dump: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"istbench: numerical testbench separating finite-state-space "
               "predictions from standard quantum mechanics"};
  app.set_version_flag("--version", istbench::kVersion);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool network_backed;
  };
  const Sub subs[] = {
      {"wstate", "Build the splitter cascade and report state quality", true},
      {"certify", "Recombine the cascade output onto pattern detectors", true},
      {"return-prob", "Mirror return test with a midpoint channel", true},
      {"spdc", "Two-aperture correlation of the double superposition", false},
      {"bmv", "Gravitational entanglement witness", false},
      {"sweep", "Parameter sweeps (survival, bmv-tau, return-gamma)", false},
  };

  CommonOptions options[std::size(subs)];
  for (std::size_t i = 0; i < std::size(subs); ++i)
    add_common_options(app.add_subcommand(subs[i].name, subs[i].help), options[i],
                       subs[i].network_backed);

  CLI11_PARSE(app, argc, argv);

  std::string experiment;
  CommonOptions selected;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    if (app.get_subcommand(subs[i].name)->parsed()) {
      experiment = subs[i].name;
      selected = options[i];
      break;
    }
  }

  try {
    const auto config = build_config(experiment, selected);
    const auto result = istbench::run_experiment(config);
    istbench::write_result(result, config);
    if (!selected.dump_network_path.empty()) dump_network(config, selected.dump_network_path);
  } catch (const istbench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const istbench::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const istbench::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
