#include "istbench/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "istbench/bmv.hpp"
#include "istbench/errors.hpp"
#include "istbench/ist.hpp"
#include "istbench/optics.hpp"
#include "istbench/rng.hpp"
#include "istbench/spdc.hpp"
#include "istbench/stats.hpp"
#include "istbench/version.hpp"

namespace istbench {
namespace {

constexpr int kMaxDenseIterations = 12;  // 2^12 = PhotonDensity::kMaxDenseModes

double get_double(const nlohmann::json& block, const char* key, double fallback) {
  if (!block.contains(key)) return fallback;
  if (!block[key].is_number())
    throw ConfigError(std::string("field \"") + key + "\" must be a number");
  return block[key].get<double>();
}

std::int64_t get_int(const nlohmann::json& block, const char* key, std::int64_t fallback) {
  if (!block.contains(key)) return fallback;
  if (!block[key].is_number_integer() && !block[key].is_number_unsigned())
    throw ConfigError(std::string("field \"") + key + "\" must be an integer");
  return block[key].get<std::int64_t>();
}

std::string get_string(const nlohmann::json& block, const char* key,
                       const std::string& fallback) {
  if (!block.contains(key)) return fallback;
  if (!block[key].is_string())
    throw ConfigError(std::string("field \"") + key + "\" must be a string");
  return block[key].get<std::string>();
}

bool get_bool(const nlohmann::json& block, const char* key, bool fallback) {
  if (!block.contains(key)) return fallback;
  if (!block[key].is_boolean())
    throw ConfigError(std::string("field \"") + key + "\" must be a boolean");
  return block[key].get<bool>();
}

double get_confidence(const nlohmann::json& block) {
  const double confidence = get_double(block, "confidence", 0.95);
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ConfigError("field \"confidence\" must lie strictly inside (0, 1)");
  return confidence;
}

IstParams parse_ist_block(const nlohmann::json& block, const std::string& context) {
  require_known_keys(block, {"log2_N", "model", "gamma"}, context);
  if (!block.contains("log2_N"))
    throw ConfigError(context + " needs a field \"log2_N\"");
  const double log2_n = get_double(block, "log2_N", 0.0);
  const std::string model = get_string(block, "model", "hard-cutoff");
  try {
    if (model == "hard-cutoff") {
      if (block.contains("gamma"))
        throw ConfigError("field \"gamma\" only applies to the \"partial\" model");
      return IstParams::hard_cutoff(log2_n);
    }
    if (model == "partial") {
      if (!block.contains("gamma"))
        throw ConfigError(context + " with model \"partial\" needs a field \"gamma\"");
      return IstParams::partial(log2_n, get_double(block, "gamma", 0.0));
    }
  } catch (const ValidationError& e) {
    throw ConfigError(context + ": " + e.what());
  }
  throw ConfigError("field \"model\" must be \"hard-cutoff\" or \"partial\"");
}

nlohmann::json ist_to_json(const IstParams& params) {
  nlohmann::json doc;
  doc["log2_N"] = params.log2_N;
  doc["model"] =
      params.model == DecoherenceModel::kHardCutoff ? "hard-cutoff" : "partial";
  if (params.model == DecoherenceModel::kPartial) doc["gamma"] = params.gamma;
  return doc;
}

int get_iterations(const nlohmann::json& block, int fallback, int limit) {
  const auto iterations = get_int(block, "iterations", fallback);
  if (iterations < 1 || iterations > limit)
    throw ConfigError("field \"iterations\" must lie in [1, " + std::to_string(limit) +
                      "]");
  return static_cast<int>(iterations);
}

double get_loss(const nlohmann::json& block) {
  const double loss = get_double(block, "loss_per_element", 0.0);
  if (!(loss >= 0.0 && loss < 1.0))
    throw ConfigError("field \"loss_per_element\" must lie in [0, 1)");
  return loss;
}

Provenance base_provenance(const ExperimentConfig& config) {
  Provenance provenance;
  provenance.fields["version"] = kVersion;
  provenance.fields["experiment"] = config.experiment;
  provenance.fields["seed"] = config.seed;
  provenance.fields["config"] = config.canonical();
  return provenance;
}

nlohmann::json report_to_json(const DistinguishabilityReport& report) {
  nlohmann::json doc;
  doc["hypothesis_a"] = report.hypothesis_a;
  doc["hypothesis_b"] = report.hypothesis_b;
  doc["indistinguishable"] = report.indistinguishable;
  doc["confidence"] = report.confidence;
  if (report.indistinguishable) return doc;
  doc["runs_required"] = report.runs_required;
  if (std::isinf(report.chernoff_information))
    doc["chernoff_information"] = "infinite";
  else
    doc["chernoff_information"] = report.chernoff_information;
  return doc;
}

std::int64_t effective_runs(const ExperimentConfig& config, std::int64_t fallback) {
  return config.runs >= 0 ? config.runs : fallback;
}

// ---------------------------------------------------------------- wstate --

ExperimentResult run_wstate(const ExperimentConfig& config) {
  require_known_keys(config.block, {"iterations", "loss_per_element", "ist"},
                     "wstate block");
  const int iterations = get_iterations(config.block, 3, kMaxDenseIterations);
  const double loss = get_loss(config.block);
  std::optional<IstParams> ist;
  if (config.block.contains("ist"))
    ist = parse_ist_block(config.block["ist"], "wstate ist block");

  OpticalNetwork network = build_w_network(iterations);
  network.loss_per_element = loss;
  const PhotonDensity rho = run_network(network, 0, ist);
  const int modes = network.mode_count;
  const PurePathState target = PurePathState::w_state(modes);

  ExperimentResult result;
  result.table.columns = {"iterations",     "modes",
                          "loss_per_element", "fidelity",
                          "photon_survival",  "survival_analytic",
                          "no_click_probability", "purity"};
  result.table.add_row({static_cast<std::int64_t>(iterations),
                        static_cast<std::int64_t>(modes), loss,
                        fidelity_with_pure(rho, target), rho.photon_trace(),
                        survival_probability(loss, modes, false),
                        rho.vacuum_population(), purity(rho)});
  result.provenance = base_provenance(config);
  if (ist) result.provenance.fields["ist"] = ist_to_json(*ist);
  return result;
}

// --------------------------------------------------------------- certify --

ExperimentResult run_certify(const ExperimentConfig& config) {
  require_known_keys(config.block,
                     {"iterations", "loss_per_element", "ist", "confidence"},
                     "certify block");
  const int iterations = get_iterations(config.block, 2, kMaxDenseIterations);
  const double loss = get_loss(config.block);
  const double confidence = get_confidence(config.block);
  std::optional<IstParams> ist;
  if (config.block.contains("ist"))
    ist = parse_ist_block(config.block["ist"], "certify ist block");
  const std::int64_t runs = effective_runs(config, 10000);

  OpticalNetwork generation = build_w_network(iterations);
  generation.loss_per_element = loss;
  OpticalNetwork recombination = build_certification_network(iterations);
  recombination.loss_per_element = loss;
  const int modes = generation.mode_count;

  const PhotonDensity generated = run_network(generation, 0);
  const Eigen::VectorXd distribution =
      click_distribution(apply_network(recombination, generated));

  std::optional<Eigen::VectorXd> distribution_ist;
  if (ist) {
    const PhotonDensity decohered = ist_decoherence(generated, *ist, modes);
    distribution_ist = click_distribution(apply_network(recombination, decohered));
  }

  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> counts_ist;
  if (runs > 0) {
    Rng rng = Rng::for_stream(config.seed, 0);
    counts = sample_multinomial(rng, runs, distribution);
    if (distribution_ist) {
      Rng rng_ist = Rng::for_stream(config.seed, 1);
      counts_ist = sample_multinomial(rng_ist, runs, *distribution_ist);
    }
  }

  ExperimentResult result;
  result.table.columns = {"detector", "label", "probability"};
  if (runs > 0) {
    result.table.columns.insert(result.table.columns.end(), {"counts", "rate", "rate_stderr"});
  }
  if (distribution_ist) {
    result.table.columns.push_back("probability_ist");
    if (runs > 0)
      result.table.columns.insert(result.table.columns.end(),
                                  {"counts_ist", "rate_ist", "rate_stderr_ist"});
  }

  const auto rate_stderr = [&](double rate) {
    return std::sqrt(std::max(rate * (1.0 - rate), 0.0) / static_cast<double>(runs));
  };
  for (int d = 0; d <= modes; ++d) {
    std::vector<Cell> row;
    row.emplace_back(static_cast<std::int64_t>(d));
    row.emplace_back(d < modes ? "D" + std::to_string(d) : std::string("no-click"));
    row.emplace_back(distribution(d));
    if (runs > 0) {
      const double rate = static_cast<double>(counts[d]) / static_cast<double>(runs);
      row.emplace_back(counts[d]);
      row.emplace_back(rate);
      row.emplace_back(rate_stderr(rate));
    }
    if (distribution_ist) {
      row.emplace_back((*distribution_ist)(d));
      if (runs > 0) {
        const double rate =
            static_cast<double>(counts_ist[d]) / static_cast<double>(runs);
        row.emplace_back(counts_ist[d]);
        row.emplace_back(rate);
        row.emplace_back(rate_stderr(rate));
      }
    }
    result.table.add_row(std::move(row));
  }

  result.provenance = base_provenance(config);
  result.provenance.fields["detector_labeling"] =
      "detector j fires with certainty for the sign-pattern state with parity row j "
      "(row 0 is the all-plus state prepared by the cascade)";
  if (ist) {
    result.provenance.fields["ist"] = ist_to_json(*ist);
    result.provenance.fields["distinguishability"] =
        report_to_json(distinguish(distribution, *distribution_ist, confidence,
                                   "standard", "finite-state"));
  }
  return result;
}

// ----------------------------------------------------------- return-prob --

ExperimentResult run_return_prob(const ExperimentConfig& config) {
  require_known_keys(config.block, {"iterations", "channels", "ist", "confidence"},
                     "return-prob block");
  const int iterations = get_iterations(config.block, 3, kMaxCascadeIterations);
  const double confidence = get_confidence(config.block);
  std::optional<IstParams> ist;
  if (config.block.contains("ist"))
    ist = parse_ist_block(config.block["ist"], "return-prob ist block");
  const std::int64_t runs = effective_runs(config, 0);

  std::vector<std::string> channel_names = {"identity", "full-dephase"};
  if (config.block.contains("channels")) {
    if (!config.block["channels"].is_array())
      throw ConfigError("field \"channels\" must be an array of channel names");
    channel_names.clear();
    for (const auto& item : config.block["channels"]) {
      if (!item.is_string())
        throw ConfigError("field \"channels\" must contain only strings");
      channel_names.push_back(item.get<std::string>());
    }
    if (channel_names.empty()) throw ConfigError("field \"channels\" must not be empty");
  }

  const OpticalNetwork network = build_w_network(iterations);
  const int modes = network.mode_count;

  std::vector<MidpointChannel> channels;
  std::vector<double> retentions;
  for (const auto& name : channel_names) {
    if (name == "identity") {
      channels.push_back(MidpointChannel::identity());
      retentions.push_back(1.0);
    } else if (name == "full-dephase") {
      channels.push_back(MidpointChannel::full_dephase());
      retentions.push_back(0.0);
    } else if (name == "ist") {
      if (!ist)
        throw ConfigError("channel \"ist\" needs an \"ist\" block with model parameters");
      channels.push_back(MidpointChannel::ist_decoherence(*ist));
      retentions.push_back(coherence_retention(*ist, modes));
    } else {
      throw ConfigError("unknown channel \"" + name +
                        "\" (expected \"identity\", \"full-dephase\", or \"ist\")");
    }
  }

  ExperimentResult result;
  result.table.columns = {"channel", "iterations", "modes", "coherence_retention",
                          "return_probability"};
  if (runs > 0)
    result.table.columns.insert(result.table.columns.end(),
                                {"returns", "estimate", "estimate_stderr"});

  std::vector<Eigen::VectorXd> outcome_dists;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const double probability = return_probability(network, 0, channels[i]);
    Eigen::VectorXd outcomes(2);
    outcomes << probability, 1.0 - probability;
    outcome_dists.push_back(outcomes);

    std::vector<Cell> row;
    row.emplace_back(channel_names[i]);
    row.emplace_back(static_cast<std::int64_t>(iterations));
    row.emplace_back(static_cast<std::int64_t>(modes));
    row.emplace_back(retentions[i]);
    row.emplace_back(probability);
    if (runs > 0) {
      Rng rng = Rng::for_stream(config.seed, i);
      const std::int64_t hits = rng.binomial(runs, probability);
      const double estimate = static_cast<double>(hits) / static_cast<double>(runs);
      row.emplace_back(hits);
      row.emplace_back(estimate);
      row.emplace_back(std::sqrt(std::max(estimate * (1.0 - estimate), 0.0) /
                                 static_cast<double>(runs)));
    }
    result.table.add_row(std::move(row));
  }

  result.provenance = base_provenance(config);
  if (ist) result.provenance.fields["ist"] = ist_to_json(*ist);
  if (channels.size() >= 2) {
    auto reports = nlohmann::json::array();
    for (std::size_t i = 0; i < channels.size(); ++i)
      for (std::size_t j = i + 1; j < channels.size(); ++j)
        reports.push_back(report_to_json(distinguish(outcome_dists[i], outcome_dists[j],
                                                     confidence, channel_names[i],
                                                     channel_names[j])));
    result.provenance.fields["distinguishability"] = reports;
  }
  return result;
}

// ------------------------------------------------------------------ spdc --

ExperimentResult run_spdc(const ExperimentConfig& config) {
  require_known_keys(config.block,
                     {"sectors", "phase_model", "rounds", "draws", "emit_joint"},
                     "spdc block");
  const auto sectors = get_int(config.block, "sectors", 8);
  if (sectors < 2 || sectors > 4096 || (sectors & (sectors - 1)) != 0)
    throw ConfigError("field \"sectors\" must be a power of two in [2, 4096]");
  const std::string phase_model = get_string(config.block, "phase_model", "shared");
  if (phase_model != "shared" && phase_model != "independent")
    throw ConfigError("field \"phase_model\" must be \"shared\" or \"independent\"");
  const int full_rounds = static_cast<int>(std::log2(static_cast<double>(sectors)) + 0.5);
  const auto rounds = get_int(config.block, "rounds", full_rounds);
  if (rounds < 0 || rounds > full_rounds)
    throw ConfigError("field \"rounds\" must lie in [0, log2(sectors)]");
  const auto draws = get_int(config.block, "draws", 100);
  if (draws < 1) throw ConfigError("field \"draws\" must be >= 1");
  const bool emit_joint = get_bool(config.block, "emit_joint", false);

  const auto make_state = [&](std::uint64_t phase_seed) {
    return phase_model == "shared"
               ? make_double_w(static_cast<int>(sectors), phase_seed)
               : make_double_w_independent(static_cast<int>(sectors), phase_seed);
  };

  ExperimentResult result;
  result.provenance = base_provenance(config);

  if (emit_joint) {
    const auto combined =
        combine_apertures(make_state(derive_stream(config.seed, 0)), static_cast<int>(rounds));
    result.table.columns = {"upper_detector", "lower_detector", "probability"};
    for (std::int64_t u = 0; u < sectors; ++u)
      for (std::int64_t l = 0; l < sectors; ++l)
        result.table.add_row({u, l, combined.joint_distribution(u, l)});
    result.provenance.fields["correlation_score"] =
        correlation_score(combined.joint_distribution);
    return result;
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  double lowest = std::numeric_limits<double>::infinity();
  double highest = -std::numeric_limits<double>::infinity();
  for (std::int64_t d = 0; d < draws; ++d) {
    const auto combined =
        combine_apertures(make_state(derive_stream(config.seed, static_cast<std::uint64_t>(d))),
                          static_cast<int>(rounds));
    const double score = correlation_score(combined.joint_distribution);
    sum += score;
    sum_sq += score * score;
    lowest = std::min(lowest, score);
    highest = std::max(highest, score);
  }
  const double mean = sum / static_cast<double>(draws);
  double score_stderr = 0.0;
  if (draws > 1) {
    const double variance =
        std::max(sum_sq - static_cast<double>(draws) * mean * mean, 0.0) /
        static_cast<double>(draws - 1);
    score_stderr = std::sqrt(variance / static_cast<double>(draws));
  }

  result.table.columns = {"sectors",    "phase_model", "rounds",   "draws",
                          "score_mean", "score_stderr", "score_min", "score_max"};
  result.table.add_row({sectors, phase_model, rounds, draws, mean, score_stderr, lowest,
                        highest});
  result.provenance.fields["chance_level"] = 1.0 / static_cast<double>(sectors);
  return result;
}

// ------------------------------------------------------------------- bmv --

GravityHypothesis hypothesis_from_name(const std::string& name) {
  if (name == "coherent") return GravityHypothesis::kCoherent;
  if (name == "decoherent-no-collapse") return GravityHypothesis::kDecoherentNoCollapse;
  if (name == "decoherent-collapse") return GravityHypothesis::kDecoherentCollapse;
  throw ConfigError("unknown hypothesis \"" + name +
                    "\" (expected \"coherent\", \"decoherent-no-collapse\", "
                    "\"decoherent-collapse\", or \"all\")");
}

BmvParams parse_bmv_params(const nlohmann::json& block) {
  BmvParams params;
  params.mass1_kg = get_double(block, "mass1_kg", params.mass1_kg);
  params.mass2_kg = get_double(block, "mass2_kg", params.mass2_kg);
  params.separation_m = get_double(block, "separation_m", params.separation_m);
  params.arm_offset_m = get_double(block, "arm_offset_m", params.arm_offset_m);
  params.tau_s = get_double(block, "tau_s", params.tau_s);
  try {
    params.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("bmv parameters: ") + e.what());
  }
  return params;
}

ExperimentResult run_bmv(const ExperimentConfig& config) {
  require_known_keys(config.block,
                     {"hypothesis", "mass1_kg", "mass2_kg", "separation_m", "arm_offset_m",
                      "tau_s", "confidence"},
                     "bmv block");
  const BmvParams params = parse_bmv_params(config.block);
  const double confidence = get_confidence(config.block);
  const std::string hypothesis_name = get_string(config.block, "hypothesis", "all");
  const std::int64_t runs = effective_runs(config, 0);

  std::vector<std::string> names;
  if (hypothesis_name == "all")
    names = {"coherent", "decoherent-no-collapse", "decoherent-collapse"};
  else
    names = {hypothesis_name};

  const BmvPhases phases = bmv_phases(params);

  ExperimentResult result;
  result.table.columns = {"hypothesis", "tau_s",  "delta_phi_lr", "delta_phi_rl",
                          "corr_xz",    "corr_yz", "witness",     "entangled"};
  if (runs > 0)
    result.table.columns.insert(result.table.columns.end(),
                                {"runs_per_setting", "witness_sampled", "witness_stderr"});

  std::vector<SpinDensity> states;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const GravityHypothesis hypothesis = hypothesis_from_name(names[i]);
    const SpinDensity rho = evolve_bmv(params, hypothesis);
    states.push_back(rho);
    const double witness = entanglement_witness(rho);
    std::vector<Cell> row;
    row.emplace_back(names[i]);
    row.emplace_back(params.tau_s);
    row.emplace_back(phases.delta_phi_lr);
    row.emplace_back(phases.delta_phi_rl);
    row.emplace_back(pauli_correlator(rho, PauliAxis::kX, PauliAxis::kZ));
    row.emplace_back(pauli_correlator(rho, PauliAxis::kY, PauliAxis::kZ));
    row.emplace_back(witness);
    row.emplace_back(static_cast<std::int64_t>(witness > 1.0 ? 1 : 0));
    if (runs > 0) {
      const WitnessEstimate estimate =
          sample_witness(rho, runs, derive_stream(config.seed, i));
      row.emplace_back(estimate.runs_per_setting);
      row.emplace_back(estimate.witness);
      row.emplace_back(estimate.witness_stderr);
    }
    result.table.add_row(std::move(row));
  }

  result.provenance = base_provenance(config);
  result.provenance.fields["phi"] = phases.phi;

  if (states.size() >= 2) {
    // Per-run outcome distribution: a fair coin picks the (x,z) or (y,z)
    // setting, then the four outcome cells of that correlator.
    const auto outcome_distribution = [](const SpinDensity& rho) {
      Eigen::VectorXd dist(8);
      dist.head(4) = 0.5 * correlator_cells(rho, PauliAxis::kX, PauliAxis::kZ);
      dist.tail(4) = 0.5 * correlator_cells(rho, PauliAxis::kY, PauliAxis::kZ);
      return dist;
    };
    auto reports = nlohmann::json::array();
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = i + 1; j < states.size(); ++j)
        reports.push_back(report_to_json(
            distinguish(outcome_distribution(states[i]), outcome_distribution(states[j]),
                        confidence, names[i], names[j])));
    result.provenance.fields["distinguishability"] = reports;
  }
  return result;
}

// ----------------------------------------------------------------- sweep --

ExperimentResult run_sweep(const ExperimentConfig& config) {
  const std::string kind = get_string(config.block, "kind", "survival");

  ExperimentResult result;
  result.provenance = base_provenance(config);
  result.provenance.fields["sweep_kind"] = kind;

  if (kind == "survival") {
    require_known_keys(config.block,
                       {"kind", "loss_per_element", "log2_m_min", "log2_m_max"},
                       "sweep block (survival)");
    const double loss = get_loss(config.block);
    const auto lo = get_int(config.block, "log2_m_min", 1);
    const auto hi = get_int(config.block, "log2_m_max", 20);
    if (lo < 0 || hi < lo || hi > 62)
      throw ConfigError("fields \"log2_m_min\"/\"log2_m_max\" must satisfy 0 <= min <= max <= 62");
    result.table.columns = {"modes", "iterations", "survival", "survival_certify",
                            "min_log2_N"};
    for (std::int64_t i = lo; i <= hi; ++i) {
      const std::int64_t modes = std::int64_t{1} << i;
      result.table.add_row({modes, i, survival_probability(loss, modes, false),
                            survival_probability(loss, modes, true),
                            min_log2_n_for_qubits(modes)});
    }
    return result;
  }

  if (kind == "bmv-tau") {
    require_known_keys(config.block,
                       {"kind", "mass1_kg", "mass2_kg", "separation_m", "arm_offset_m",
                        "tau_min_s", "tau_max_s", "steps"},
                       "sweep block (bmv-tau)");
    BmvParams params = parse_bmv_params(config.block);
    const double tau_min = get_double(config.block, "tau_min_s", 0.0);
    const double tau_max = get_double(config.block, "tau_max_s", 6e-5);
    const auto steps = get_int(config.block, "steps", 201);
    if (!(tau_min >= 0.0) || !(tau_max > tau_min))
      throw ConfigError("fields \"tau_min_s\"/\"tau_max_s\" must satisfy 0 <= min < max");
    if (steps < 2 || steps > 1000000)
      throw ConfigError("field \"steps\" must lie in [2, 1000000]");
    result.table.columns = {"tau_s", "delta_phi_lr", "delta_phi_rl", "witness_coherent",
                            "witness_decoherent_no_collapse", "witness_decoherent_collapse"};
    for (std::int64_t s = 0; s < steps; ++s) {
      params.tau_s = tau_min + (tau_max - tau_min) * static_cast<double>(s) /
                                   static_cast<double>(steps - 1);
      const BmvPhases phases = bmv_phases(params);
      result.table.add_row(
          {params.tau_s, phases.delta_phi_lr, phases.delta_phi_rl,
           entanglement_witness(evolve_bmv(params, GravityHypothesis::kCoherent)),
           entanglement_witness(evolve_bmv(params, GravityHypothesis::kDecoherentNoCollapse)),
           entanglement_witness(evolve_bmv(params, GravityHypothesis::kDecoherentCollapse))});
    }
    return result;
  }

  if (kind == "return-gamma") {
    require_known_keys(config.block,
                       {"kind", "iterations", "log2_N", "gamma_min", "gamma_max", "steps"},
                       "sweep block (return-gamma)");
    const int iterations = get_iterations(config.block, 3, kMaxCascadeIterations);
    const double log2_n = get_double(config.block, "log2_N", 4.0);
    const double gamma_min = get_double(config.block, "gamma_min", 0.0);
    const double gamma_max = get_double(config.block, "gamma_max", 1.0);
    const auto steps = get_int(config.block, "steps", 101);
    if (!(gamma_min >= 0.0) || !(gamma_max <= 1.0) || !(gamma_min < gamma_max))
      throw ConfigError("fields \"gamma_min\"/\"gamma_max\" must satisfy 0 <= min < max <= 1");
    if (steps < 2 || steps > 1000000)
      throw ConfigError("field \"steps\" must lie in [2, 1000000]");
    const OpticalNetwork network = build_w_network(iterations);
    result.table.columns = {"gamma", "coherence_retention", "return_probability"};
    for (std::int64_t s = 0; s < steps; ++s) {
      const double gamma = gamma_min + (gamma_max - gamma_min) * static_cast<double>(s) /
                                           static_cast<double>(steps - 1);
      const IstParams params = IstParams::partial(log2_n, gamma);
      result.table.add_row({gamma, coherence_retention(params, network.mode_count),
                            return_probability(network, 0,
                                               MidpointChannel::ist_decoherence(params))});
    }
    return result;
  }

  throw ConfigError("unknown sweep kind \"" + kind +
                    "\" (expected \"survival\", \"bmv-tau\", or \"return-gamma\")");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.experiment == "wstate") return run_wstate(config);
  if (config.experiment == "certify") return run_certify(config);
  if (config.experiment == "return-prob") return run_return_prob(config);
  if (config.experiment == "spdc") return run_spdc(config);
  if (config.experiment == "bmv") return run_bmv(config);
  if (config.experiment == "sweep") return run_sweep(config);
  throw ConfigError("unknown experiment \"" + config.experiment + "\"");
}

std::string resolve_out_path(const std::string& out_path) {
  if (out_path.empty()) return out_path;
  const char* dir = std::getenv("ISTBENCH_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return out_path;
  const std::filesystem::path base(dir);
  return (base / std::filesystem::path(out_path).filename()).string();
}

void write_result(const ExperimentResult& result, const ExperimentConfig& config) {
  emit_table(result.table, result.provenance, config.format,
             resolve_out_path(config.out_path));
}

}  // namespace istbench
