#include <optional>
#include <sstream>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "istbench/bmv.hpp"
#include "istbench/config.hpp"
#include "istbench/errors.hpp"
#include "istbench/experiments.hpp"
#include "istbench/ist.hpp"
#include "istbench/optics.hpp"
#include "istbench/spdc.hpp"
#include "istbench/states.hpp"
#include "istbench/stats.hpp"
#include "istbench/table.hpp"
#include "istbench/version.hpp"

namespace py = pybind11;
using namespace istbench;

namespace {

MidpointChannel channel_from_name(const std::string& name,
                                  const std::optional<IstParams>& ist) {
  if (name == "identity") return MidpointChannel::identity();
  if (name == "full-dephase") return MidpointChannel::full_dephase();
  if (name == "ist") {
    if (!ist) throw ValidationError("channel \"ist\" needs model parameters");
    return MidpointChannel::ist_decoherence(*ist);
  }
  throw ValidationError("unknown channel \"" + name + "\"");
}

std::string run_rendered(const std::string& config_text, OutputFormat format) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(config_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const auto result = run_experiment(parse_config(doc));
  std::ostringstream out;
  if (format == OutputFormat::kCsv)
    write_csv(out, result.table, result.provenance);
  else
    write_json(out, result.table, result.provenance);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_istbench, m) {
  m.doc() = "Single-photon network simulator and gravitational-witness testbench";
  m.attr("__version__") = kVersion;

  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  // ---------------------------------------------------------------- states
  py::class_<PurePathState>(m, "PurePathState")
      .def(py::init<Vector>(), py::arg("amplitudes"))
      .def_static("basis", &PurePathState::basis, py::arg("mode_count"), py::arg("mode"))
      .def_static("vacuum", &PurePathState::vacuum, py::arg("mode_count"))
      .def_static("w_state", &PurePathState::w_state, py::arg("mode_count"))
      .def_static("walsh_w_state", &PurePathState::walsh_w_state, py::arg("mode_count"),
                  py::arg("walsh_row"))
      .def_property_readonly("mode_count", &PurePathState::mode_count)
      .def_property_readonly("amplitudes",
                             [](const PurePathState& s) { return Vector(s.amplitudes()); });

  py::class_<PhotonDensity>(m, "PhotonDensity")
      .def(py::init<Matrix>(), py::arg("matrix"))
      .def_property_readonly("mode_count", &PhotonDensity::mode_count)
      .def_property_readonly("matrix",
                             [](const PhotonDensity& rho) { return Matrix(rho.matrix()); })
      .def("photon_trace", &PhotonDensity::photon_trace)
      .def("vacuum_population", &PhotonDensity::vacuum_population)
      .def("min_eigenvalue", &PhotonDensity::min_eigenvalue);

  py::class_<SpinDensity>(m, "SpinDensity")
      .def(py::init<Eigen::Matrix4cd>(), py::arg("matrix"))
      .def_static("from_pure", &SpinDensity::from_pure, py::arg("amplitudes"))
      .def_property_readonly(
          "matrix", [](const SpinDensity& rho) { return Eigen::Matrix4cd(rho.matrix()); });

  m.def("density_from_pure", &density_from_pure, py::arg("state"));
  m.def("apply_unitary", &apply_unitary, py::arg("rho"), py::arg("photon_unitary"));
  m.def("purity", py::overload_cast<const PhotonDensity&>(&purity), py::arg("rho"));
  m.def("spin_purity", py::overload_cast<const SpinDensity&>(&purity), py::arg("rho"));
  m.def("fidelity_with_pure", &fidelity_with_pure, py::arg("rho"), py::arg("target"));

  // ------------------------------------------------------------------- ist
  py::enum_<DecoherenceModel>(m, "DecoherenceModel")
      .value("hard_cutoff", DecoherenceModel::kHardCutoff)
      .value("partial", DecoherenceModel::kPartial);

  py::class_<IstParams>(m, "IstParams")
      .def_static("hard_cutoff", &IstParams::hard_cutoff, py::arg("log2_n"))
      .def_static("partial", &IstParams::partial, py::arg("log2_n"), py::arg("gamma"))
      .def_readonly("log2_N", &IstParams::log2_N)
      .def_readonly("model", &IstParams::model)
      .def_readonly("gamma", &IstParams::gamma);

  m.def("max_entangled_qubits", &max_entangled_qubits, py::arg("params"));
  m.def("max_iterations", &max_iterations, py::arg("params"));
  m.def("min_log2_n_for_qubits", &min_log2_n_for_qubits, py::arg("qubits"));
  m.def("survival_probability", &survival_probability, py::arg("loss_per_element"),
        py::arg("modes"), py::arg("certify") = false);
  m.def("coherence_retention", &coherence_retention, py::arg("params"),
        py::arg("entangled_width"));
  m.def(
      "ist_decoherence",
      [](const PhotonDensity& rho, const IstParams& params, int width) {
        return ist_decoherence(rho, params, width);
      },
      py::arg("rho"), py::arg("params"), py::arg("entangled_width"));
  m.def(
      "discretize_bloch",
      [](double theta, double phi, const IstParams& params) {
        const auto snapped = discretize_bloch(theta, phi, params);
        return py::make_tuple(snapped.theta, snapped.phi, snapped.snapped);
      },
      py::arg("theta"), py::arg("phi"), py::arg("params"),
      "Returns (theta, phi, snapped) on the model's angular grid");

  // ---------------------------------------------------------------- optics
  py::enum_<BeamsplitterConvention>(m, "BeamsplitterConvention")
      .value("real_hadamard", BeamsplitterConvention::kRealHadamard)
      .value("symmetric_phase", BeamsplitterConvention::kSymmetricPhase);

  py::class_<BeamsplitterElement>(m, "BeamsplitterElement")
      .def(py::init([](int mode_a, int mode_b, double reflectivity,
                       BeamsplitterConvention convention) {
             return BeamsplitterElement{mode_a, mode_b, reflectivity, convention};
           }),
           py::arg("mode_a"), py::arg("mode_b"), py::arg("reflectivity") = 0.5,
           py::arg("convention") = BeamsplitterConvention::kRealHadamard)
      .def_readwrite("mode_a", &BeamsplitterElement::mode_a)
      .def_readwrite("mode_b", &BeamsplitterElement::mode_b)
      .def_readwrite("reflectivity", &BeamsplitterElement::reflectivity)
      .def_readwrite("convention", &BeamsplitterElement::convention)
      .def("coupling", &BeamsplitterElement::coupling);

  py::class_<OpticalNetwork>(m, "OpticalNetwork")
      .def(py::init<>())
      .def_readwrite("mode_count", &OpticalNetwork::mode_count)
      .def_readwrite("loss_per_element", &OpticalNetwork::loss_per_element)
      .def_readwrite("elements", &OpticalNetwork::elements)
      .def("validate", &OpticalNetwork::validate)
      .def("to_json", [](const OpticalNetwork& n) { return network_to_json(n); })
      .def_static("from_json", &network_from_json, py::arg("text"));

  m.def("build_w_network", &build_w_network, py::arg("iterations"));
  m.def("build_certification_network", &build_certification_network, py::arg("iterations"));

  py::class_<PurePathTrace>(m, "PurePathTrace")
      .def_readonly("photon_amplitudes", &PurePathTrace::photon_amplitudes)
      .def_readonly("vacuum_population", &PurePathTrace::vacuum_population);

  m.def("propagate_pure", &propagate_pure, py::arg("network"), py::arg("input_mode"));
  m.def("run_network", &run_network, py::arg("network"), py::arg("input_mode"),
        py::arg("ist") = std::nullopt);
  m.def("apply_network", &apply_network, py::arg("network"), py::arg("rho"));
  m.def(
      "return_probability",
      [](const OpticalNetwork& network, int input_mode, const std::string& channel,
         const std::optional<IstParams>& ist) {
        return return_probability(network, input_mode, channel_from_name(channel, ist));
      },
      py::arg("network"), py::arg("input_mode"), py::arg("channel") = "identity",
      py::arg("ist") = std::nullopt,
      "Channel is one of \"identity\", \"full-dephase\", \"ist\"");
  m.def("certification_transform", &certification_transform, py::arg("mode_count"));
  m.def("detector_distribution", &detector_distribution, py::arg("rho"), py::arg("transform"));
  m.def("click_distribution", &click_distribution, py::arg("rho"));

  // ------------------------------------------------------------------ spdc
  py::class_<DoubleWState>(m, "DoubleWState")
      .def_readonly("sector_count", &DoubleWState::sector_count)
      .def_readonly("joint_amplitudes", &DoubleWState::joint_amplitudes)
      .def_readonly("pair_phases", &DoubleWState::pair_phases)
      .def_readonly("phase_seed", &DoubleWState::phase_seed)
      .def_property_readonly("phase_model", [](const DoubleWState& s) {
        return s.phase_model == PhaseModel::kSharedPair ? "shared" : "independent";
      });

  m.def("make_double_w", &make_double_w, py::arg("sector_count"), py::arg("phase_seed"));
  m.def("make_double_w_independent", &make_double_w_independent, py::arg("sector_count"),
        py::arg("phase_seed"));
  m.def(
      "combine_apertures",
      [](const DoubleWState& state, int rounds) {
        auto combined = combine_apertures(state, rounds);
        return py::make_tuple(combined.state, combined.joint_distribution);
      },
      py::arg("state"), py::arg("rounds"),
      "Returns (state_after_combiners, joint_click_distribution)");
  m.def("correlation_score", &correlation_score, py::arg("joint_distribution"));

  // ------------------------------------------------------------------- bmv
  py::class_<BmvParams>(m, "BmvParams")
      .def(py::init<>())
      .def_readwrite("mass1_kg", &BmvParams::mass1_kg)
      .def_readwrite("mass2_kg", &BmvParams::mass2_kg)
      .def_readwrite("separation_m", &BmvParams::separation_m)
      .def_readwrite("arm_offset_m", &BmvParams::arm_offset_m)
      .def_readwrite("tau_s", &BmvParams::tau_s)
      .def("validate", &BmvParams::validate);

  py::class_<BmvPhases>(m, "BmvPhases")
      .def_readonly("phi", &BmvPhases::phi)
      .def_readonly("phi_lr", &BmvPhases::phi_lr)
      .def_readonly("phi_rl", &BmvPhases::phi_rl)
      .def_readonly("delta_phi_lr", &BmvPhases::delta_phi_lr)
      .def_readonly("delta_phi_rl", &BmvPhases::delta_phi_rl);

  m.def("bmv_phases", &bmv_phases, py::arg("params"));

  py::enum_<GravityHypothesis>(m, "GravityHypothesis")
      .value("coherent", GravityHypothesis::kCoherent)
      .value("decoherent_no_collapse", GravityHypothesis::kDecoherentNoCollapse)
      .value("decoherent_collapse", GravityHypothesis::kDecoherentCollapse);

  py::enum_<PauliAxis>(m, "PauliAxis")
      .value("x", PauliAxis::kX)
      .value("y", PauliAxis::kY)
      .value("z", PauliAxis::kZ);

  m.def("evolve_bmv", &evolve_bmv, py::arg("params"), py::arg("hypothesis"));
  m.def("pauli_correlator", &pauli_correlator, py::arg("rho"), py::arg("first"),
        py::arg("second"));
  m.def("correlator_cells", &correlator_cells, py::arg("rho"), py::arg("first"),
        py::arg("second"));
  m.def("entanglement_witness", &entanglement_witness, py::arg("rho"));

  py::class_<WitnessEstimate>(m, "WitnessEstimate")
      .def_readonly("witness", &WitnessEstimate::witness)
      .def_readonly("witness_stderr", &WitnessEstimate::witness_stderr)
      .def_readonly("corr_xz", &WitnessEstimate::corr_xz)
      .def_readonly("corr_xz_stderr", &WitnessEstimate::corr_xz_stderr)
      .def_readonly("corr_yz", &WitnessEstimate::corr_yz)
      .def_readonly("corr_yz_stderr", &WitnessEstimate::corr_yz_stderr)
      .def_readonly("runs_per_setting", &WitnessEstimate::runs_per_setting);

  m.def("sample_witness", &sample_witness, py::arg("rho"), py::arg("runs_per_setting"),
        py::arg("seed"));

  // ----------------------------------------------------------------- stats
  py::class_<DistinguishabilityReport>(m, "DistinguishabilityReport")
      .def_readonly("hypothesis_a", &DistinguishabilityReport::hypothesis_a)
      .def_readonly("hypothesis_b", &DistinguishabilityReport::hypothesis_b)
      .def_readonly("indistinguishable", &DistinguishabilityReport::indistinguishable)
      .def_readonly("runs_required", &DistinguishabilityReport::runs_required)
      .def_readonly("confidence", &DistinguishabilityReport::confidence)
      .def_readonly("chernoff_information", &DistinguishabilityReport::chernoff_information);

  m.def("distinguish", &distinguish, py::arg("dist_a"), py::arg("dist_b"),
        py::arg("confidence") = 0.95, py::arg("label_a") = "A", py::arg("label_b") = "B");

  // --------------------------------------------------------------- harness
  m.def(
      "run_experiment_json",
      [](const std::string& config_json) { return run_rendered(config_json, OutputFormat::kJson); },
      py::arg("config_json"),
      "Run an experiment from a JSON config string; returns the JSON result document");
  m.def(
      "run_experiment_csv",
      [](const std::string& config_json) { return run_rendered(config_json, OutputFormat::kCsv); },
      py::arg("config_json"),
      "Run an experiment from a JSON config string; returns the CSV result document");
}
