#include "istbench/optics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include <json.hpp>

#include "istbench/errors.hpp"
#include "istbench/tolerances.hpp"

namespace istbench {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_iterations(int iterations) {
  if (iterations < 0 || iterations > kMaxCascadeIterations)
    throw ValidationError("iteration depth must lie in [0, " +
                          std::to_string(kMaxCascadeIterations) + "]");
}

// In-place two-mode unitary on a dense density matrix: rows then columns.
void apply_element_dense(Matrix& m, const BeamsplitterElement& e) {
  const Eigen::Matrix2cd b = e.coupling();
  const Eigen::RowVectorXcd row_a = m.row(e.mode_a);
  const Eigen::RowVectorXcd row_b = m.row(e.mode_b);
  m.row(e.mode_a) = b(0, 0) * row_a + b(0, 1) * row_b;
  m.row(e.mode_b) = b(1, 0) * row_a + b(1, 1) * row_b;
  const Vector col_a = m.col(e.mode_a);
  const Vector col_b = m.col(e.mode_b);
  m.col(e.mode_a) = std::conj(b(0, 0)) * col_a + std::conj(b(0, 1)) * col_b;
  m.col(e.mode_b) = std::conj(b(1, 0)) * col_a + std::conj(b(1, 1)) * col_b;
}

// Amplitude damping with probability p on one mode; the lost population
// lands on the vacuum diagonal. Kraus pair {K0 = diag(..sqrt(1-p)..),
// K1 = sqrt(p)|vac><mode|} collapsed into the direct update.
void apply_loss_dense(Matrix& m, int mode, double p, int vacuum) {
  const double keep = std::sqrt(1.0 - p);
  const double leaked = p * m(mode, mode).real();
  m.row(mode) *= keep;
  m.col(mode) *= keep;
  m(vacuum, vacuum) += leaked;
}

void evolve_dense(Matrix& m, const OpticalNetwork& network) {
  const int vacuum = network.mode_count;
  const bool lossy = network.loss_per_element > 0.0;
  for (const auto& e : network.elements) {
    apply_element_dense(m, e);
    if (lossy) {
      apply_loss_dense(m, e.mode_a, network.loss_per_element, vacuum);
      apply_loss_dense(m, e.mode_b, network.loss_per_element, vacuum);
    }
  }
}

void check_input_mode(const OpticalNetwork& network, int input_mode) {
  if (input_mode < 0 || input_mode >= network.mode_count)
    throw DimensionError("input mode out of range");
}

void check_dense_size(const OpticalNetwork& network) {
  if (network.mode_count > PhotonDensity::kMaxDenseModes)
    throw DimensionError(
        "network exceeds the dense-matrix mode limit; use propagate_pure or "
        "return_probability for large cascades");
}

// Sum of |a_k|^4 with Neumaier compensation; at 2^20 modes the naive sum
// loses more digits than the 1e-10 contract allows.
double sum_fourth_powers(const Vector& amplitudes) {
  double sum = 0.0;
  double compensation = 0.0;
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
    const double a2 = std::norm(amplitudes(i));
    const double term = a2 * a2;
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      compensation += (sum - t) + term;
    else
      compensation += (term - t) + sum;
    sum = t;
  }
  return sum + compensation;
}

}  // namespace

Eigen::Matrix2cd BeamsplitterElement::coupling() const {
  const double t = std::sqrt(1.0 - reflectivity);
  const double r = std::sqrt(reflectivity);
  Eigen::Matrix2cd b;
  if (convention == BeamsplitterConvention::kRealHadamard)
    b << t, r, r, -t;
  else
    b << t, Complex(0.0, r), Complex(0.0, r), t;
  return b;
}

void OpticalNetwork::validate() const {
  if (mode_count < 1) throw ValidationError("network needs at least one mode");
  if (!(loss_per_element >= 0.0 && loss_per_element < 1.0))
    throw ValidationError("loss_per_element must lie in [0, 1)");
  for (const auto& e : elements) {
    if (e.mode_a < 0 || e.mode_a >= mode_count || e.mode_b < 0 || e.mode_b >= mode_count)
      throw ValidationError("element mode index out of range");
    if (e.mode_a == e.mode_b) throw ValidationError("element couples a mode to itself");
    if (!(e.reflectivity >= 0.0 && e.reflectivity <= 1.0))
      throw ValidationError("element reflectivity must lie in [0, 1]");
  }
}

std::string network_to_json(const OpticalNetwork& network) {
  nlohmann::json doc;
  doc["mode_count"] = network.mode_count;
  doc["loss_per_element"] = network.loss_per_element;
  auto& elements = doc["elements"] = nlohmann::json::array();
  for (const auto& e : network.elements) {
    elements.push_back({{"mode_a", e.mode_a},
                        {"mode_b", e.mode_b},
                        {"reflectivity", e.reflectivity},
                        {"convention", e.convention == BeamsplitterConvention::kRealHadamard
                                           ? "real-hadamard"
                                           : "symmetric-phase"}});
  }
  return doc.dump(2);
}

OpticalNetwork network_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("network JSON parse failure: ") + e.what());
  }
  OpticalNetwork network;
  network.mode_count = doc.at("mode_count").get<int>();
  network.loss_per_element = doc.value("loss_per_element", 0.0);
  for (const auto& item : doc.value("elements", nlohmann::json::array())) {
    BeamsplitterElement e;
    e.mode_a = item.at("mode_a").get<int>();
    e.mode_b = item.at("mode_b").get<int>();
    e.reflectivity = item.value("reflectivity", 0.5);
    const std::string convention = item.value("convention", "real-hadamard");
    if (convention == "real-hadamard")
      e.convention = BeamsplitterConvention::kRealHadamard;
    else if (convention == "symmetric-phase")
      e.convention = BeamsplitterConvention::kSymmetricPhase;
    else
      throw ValidationError("unknown beamsplitter convention: " + convention);
    network.elements.push_back(e);
  }
  network.validate();
  return network;
}

OpticalNetwork build_w_network(int iterations) {
  check_iterations(iterations);
  OpticalNetwork network;
  network.mode_count = 1 << iterations;
  network.elements.reserve((std::size_t{1} << iterations) - 1);
  for (int stage = 1; stage <= iterations; ++stage) {
    const int step = 1 << (iterations - stage);
    for (int m = 0; m < network.mode_count; m += 2 * step)
      network.elements.push_back({m, m + step});
  }
  return network;
}

OpticalNetwork build_certification_network(int iterations) {
  check_iterations(iterations);
  OpticalNetwork network;
  network.mode_count = 1 << iterations;
  network.elements.reserve(static_cast<std::size_t>(iterations) << (iterations > 0 ? iterations - 1 : 0));
  for (int bit = 0; bit < iterations; ++bit) {
    const int step = 1 << bit;
    for (int k = 0; k < network.mode_count; ++k)
      if (!(k & step)) network.elements.push_back({k, k | step});
  }
  return network;
}

PurePathTrace propagate_pure(const OpticalNetwork& network, int input_mode) {
  network.validate();
  check_input_mode(network, input_mode);
  PurePathTrace trace;
  trace.photon_amplitudes = Vector::Zero(network.mode_count);
  trace.photon_amplitudes(input_mode) = 1.0;
  const double p = network.loss_per_element;
  const double keep = std::sqrt(1.0 - p);
  for (const auto& e : network.elements) {
    const Eigen::Matrix2cd b = e.coupling();
    const Complex a = trace.photon_amplitudes(e.mode_a);
    const Complex c = trace.photon_amplitudes(e.mode_b);
    Complex out_a = b(0, 0) * a + b(0, 1) * c;
    Complex out_b = b(1, 0) * a + b(1, 1) * c;
    if (p > 0.0) {
      trace.vacuum_population += p * (std::norm(out_a) + std::norm(out_b));
      out_a *= keep;
      out_b *= keep;
    }
    trace.photon_amplitudes(e.mode_a) = out_a;
    trace.photon_amplitudes(e.mode_b) = out_b;
  }
  return trace;
}

PhotonDensity run_network(const OpticalNetwork& network, int input_mode,
                          const std::optional<IstParams>& ist) {
  network.validate();
  check_input_mode(network, input_mode);
  check_dense_size(network);
  Matrix m = Matrix::Zero(network.mode_count + 1, network.mode_count + 1);
  m(input_mode, input_mode) = 1.0;
  evolve_dense(m, network);
  auto rho = PhotonDensity::from_evolved(std::move(m));
  if (ist) return ist_decoherence(rho, *ist, network.mode_count);
  return rho;
}

PhotonDensity apply_network(const OpticalNetwork& network, const PhotonDensity& rho) {
  network.validate();
  check_dense_size(network);
  if (rho.mode_count() != network.mode_count)
    throw DimensionError("state and network mode counts differ");
  Matrix m = rho.matrix();
  evolve_dense(m, network);
  return PhotonDensity::from_evolved(std::move(m));
}

double return_probability(const OpticalNetwork& network, int input_mode,
                          const MidpointChannel& channel) {
  network.validate();
  check_input_mode(network, input_mode);

  double retention = 1.0;
  switch (channel.kind) {
    case MidpointChannel::Kind::kIdentity:
      retention = 1.0;
      break;
    case MidpointChannel::Kind::kFullDephase:
      retention = 0.0;
      break;
    case MidpointChannel::Kind::kIstDecoherence:
      if (!channel.ist) throw ValidationError("midpoint channel is missing model parameters");
      retention = coherence_retention(*channel.ist, network.mode_count);
      break;
  }

  // Forward pass: psi = U |in>, computed on a lossless copy of the network.
  OpticalNetwork lossless = network;
  lossless.loss_per_element = 0.0;
  const Vector psi = propagate_pure(lossless, input_mode).photon_amplitudes;

  // Coherent part: |<in| U* U |in>|^2 via the reverse pass.
  Vector phi = psi;
  for (auto it = lossless.elements.rbegin(); it != lossless.elements.rend(); ++it) {
    const Eigen::Matrix2cd b = it->coupling().adjoint();
    const Complex a = phi(it->mode_a);
    const Complex c = phi(it->mode_b);
    phi(it->mode_a) = b(0, 0) * a + b(0, 1) * c;
    phi(it->mode_b) = b(1, 0) * a + b(1, 1) * c;
  }
  const double coherent = std::norm(phi(input_mode));

  if (retention == 1.0) return std::clamp(coherent, 0.0, 1.0);
  const double dephased = sum_fourth_powers(psi);
  return std::clamp(retention * coherent + (1.0 - retention) * dephased, 0.0, 1.0);
}

Matrix certification_transform(int mode_count) {
  if (!is_power_of_two(mode_count) || mode_count > kMaxTransformModes)
    throw DimensionError("transform needs a power-of-two mode count <= " +
                         std::to_string(kMaxTransformModes));
  const double scale = 1.0 / std::sqrt(static_cast<double>(mode_count));
  Matrix transform(mode_count, mode_count);
  for (int j = 0; j < mode_count; ++j)
    for (int k = 0; k < mode_count; ++k) {
      const int parity = std::popcount(static_cast<unsigned>(j & k)) & 1;
      transform(j, k) = parity ? -scale : scale;
    }
  return transform;
}

Eigen::VectorXd detector_distribution(const PhotonDensity& rho, const Matrix& transform) {
  const int modes = rho.mode_count();
  if (transform.rows() != modes || transform.cols() != modes)
    throw DimensionError("transform dimension does not match the photon sector");
  // Only the diagonal of T rho T* is needed:
  // d_j = sum_k (T rho)_jk conj(T_jk).
  const Matrix image = transform * rho.matrix().topLeftCorner(modes, modes);
  Eigen::VectorXd distribution(modes + 1);
  distribution.head(modes) =
      image.cwiseProduct(transform.conjugate()).rowwise().sum().real();
  distribution(modes) = rho.vacuum_population();
  const double low = distribution.minCoeff();
  if (low < -tol::kChannel)
    throw ValidationError("detector distribution has a negative probability");
  distribution = distribution.cwiseMax(0.0);
  if (std::abs(distribution.sum() - 1.0) > tol::kChannel)
    throw ValidationError("detector distribution does not sum to 1");
  return distribution;
}

Eigen::VectorXd click_distribution(const PhotonDensity& rho) {
  Eigen::VectorXd distribution = rho.matrix().diagonal().real();
  const double low = distribution.minCoeff();
  if (low < -tol::kChannel)
    throw ValidationError("click distribution has a negative probability");
  distribution = distribution.cwiseMax(0.0);
  if (std::abs(distribution.sum() - 1.0) > tol::kChannel)
    throw ValidationError("click distribution does not sum to 1");
  return distribution;
}

}  // namespace istbench
