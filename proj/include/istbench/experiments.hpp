#pragma once

#include <string>

#include "istbench/config.hpp"
#include "istbench/table.hpp"

namespace istbench {

struct ExperimentResult {
  Table table;
  Provenance provenance;
};

// Dispatches on config.experiment:
//
//   wstate       build the splitter cascade, report state quality figures
//   certify      recombine and report the detector distribution (optionally
//                sampled counts, optionally next to the finite-N prediction)
//   return-prob  mirror return test for a list of midpoint channels
//   spdc         two-aperture correlation score of the double superposition
//   bmv          gravitational witness per hypothesis, analytic and sampled
//   sweep        parameter sweeps (survival, bmv-tau, return-gamma)
//
// Config errors raise ConfigError; physical-validity failures raise
// ValidationError. Results are pure functions of the config (seed included).
ExperimentResult run_experiment(const ExperimentConfig& config);

// Applies the ISTBENCH_OUT_DIR override (replaces the directory part of a
// non-empty out path) and emits the table in the configured format.
void write_result(const ExperimentResult& result, const ExperimentConfig& config);

// The effective output path after the environment override; empty for stdout.
std::string resolve_out_path(const std::string& out_path);

}  // namespace istbench
