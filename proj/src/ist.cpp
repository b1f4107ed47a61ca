#include "istbench/ist.hpp"

#include <cmath>
#include <numbers>

#include "istbench/errors.hpp"

namespace istbench {
namespace {

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(std::int64_t n) {
  int bits = 0;
  while ((std::int64_t{1} << bits) < n) ++bits;
  return bits;
}

}  // namespace

IstParams IstParams::hard_cutoff(double log2_n) {
  IstParams p;
  p.log2_N = log2_n;
  p.model = DecoherenceModel::kHardCutoff;
  p.validate();
  return p;
}

IstParams IstParams::partial(double log2_n, double gamma) {
  IstParams p;
  p.log2_N = log2_n;
  p.model = DecoherenceModel::kPartial;
  p.gamma = gamma;
  p.validate();
  return p;
}

void IstParams::validate() const {
  if (!(log2_N > 0.0)) throw ValidationError("log2_N must be positive");
  if (model == DecoherenceModel::kPartial && !(gamma >= 0.0 && gamma <= 1.0))
    throw ValidationError("gamma must lie in [0, 1]");
}

int max_entangled_qubits(const IstParams& params) {
  params.validate();
  return static_cast<int>(std::floor(params.log2_N));
}

int max_iterations(const IstParams& params) {
  params.validate();
  if (params.log2_N < 1.0)
    throw ValidationError("max_iterations needs log2_N >= 1");
  return static_cast<int>(std::floor(std::log2(params.log2_N)));
}

double min_log2_n_for_qubits(std::int64_t qubits) {
  if (qubits < 1) throw ValidationError("qubit count must be >= 1");
  return static_cast<double>(qubits);
}

double survival_probability(double loss_per_element, std::int64_t modes, bool certify) {
  if (!(loss_per_element >= 0.0 && loss_per_element < 1.0))
    throw ValidationError("loss_per_element must lie in [0, 1)");
  if (!is_power_of_two(modes))
    throw ValidationError("mode count must be a power of two");
  const int depth = log2_exact(modes) * (certify ? 2 : 1);
  double survival = 1.0;
  for (int i = 0; i < depth; ++i) survival *= 1.0 - loss_per_element;
  return survival;
}

double coherence_retention(const IstParams& params, int entangled_width) {
  params.validate();
  if (entangled_width < 1) throw ValidationError("entangled width must be >= 1");
  if (entangled_width <= max_entangled_qubits(params)) return 1.0;
  if (params.model == DecoherenceModel::kHardCutoff) return 0.0;
  // Each doubling beyond the supported cascade depth multiplies the
  // coherences by gamma; fractional widths interpolate through log2.
  const int supported =
      params.log2_N >= 1.0 ? max_iterations(params) : 0;
  const double excess =
      std::max(std::log2(static_cast<double>(entangled_width)) - supported, 0.0);
  return std::pow(params.gamma, excess);
}

PhotonDensity ist_decoherence(const PhotonDensity& rho, const IstParams& params,
                              int entangled_width) {
  const double retention = coherence_retention(params, entangled_width);
  if (retention == 1.0) return rho;
  // Scale every off-diagonal (vacuum coherences included) so the map is a
  // convex mix of the identity and full dephasing in the mode basis.
  Matrix out = retention * rho.matrix();
  out.diagonal() = rho.matrix().diagonal();
  return PhotonDensity::from_evolved(std::move(out));
}

SnappedAngles discretize_bloch(double theta, double phi, const IstParams& params) {
  params.validate();
  SnappedAngles result;
  // Grid spacing 2*pi/N = 2*pi/2^log2_N. Beyond log2_N = 52 the spacing is
  // below the resolution of double near 2*pi, so snapping is a no-op.
  if (params.log2_N > 52.0) {
    result.theta = theta;
    result.phi = phi;
    result.snapped = false;
    return result;
  }
  const double step = 2.0 * std::numbers::pi / std::exp2(params.log2_N);
  result.theta = std::round(theta / step) * step;
  result.phi = std::round(phi / step) * step;
  result.snapped = true;
  return result;
}

}  // namespace istbench
