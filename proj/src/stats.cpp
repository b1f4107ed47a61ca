#include "istbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "istbench/errors.hpp"

namespace istbench {
namespace {

void check_distribution(const Eigen::VectorXd& dist, const char* name) {
  if (dist.size() < 1) throw ValidationError(std::string(name) + ": empty distribution");
  if (dist.minCoeff() < -1e-12)
    throw ValidationError(std::string(name) + ": negative probability");
  if (std::abs(dist.sum() - 1.0) > 1e-9)
    throw ValidationError(std::string(name) + ": probabilities do not sum to 1");
}

// ln sum_i a_i^s b_i^(1-s) over the common support. Log-convex in s, so a
// ternary search finds the minimum.
double log_chernoff_sum(const std::vector<double>& log_a, const std::vector<double>& log_b,
                        double s) {
  double max_term = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_a.size(); ++i)
    max_term = std::max(max_term, s * log_a[i] + (1.0 - s) * log_b[i]);
  if (!std::isfinite(max_term)) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < log_a.size(); ++i)
    sum += std::exp(s * log_a[i] + (1.0 - s) * log_b[i] - max_term);
  return max_term + std::log(sum);
}

double chernoff_information_oneway(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  std::vector<double> log_a;
  std::vector<double> log_b;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) > 0.0 && b(i) > 0.0) {
      log_a.push_back(std::log(a(i)));
      log_b.push_back(std::log(b(i)));
    }
  }
  if (log_a.empty()) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (log_chernoff_sum(log_a, log_b, m1) < log_chernoff_sum(log_a, log_b, m2))
      hi = m2;
    else
      lo = m1;
  }
  const double mid = 0.5 * (lo + hi);
  const double value = -log_chernoff_sum(log_a, log_b, mid);
  return std::max(value, 0.0);
}

}  // namespace

DistinguishabilityReport distinguish(const Eigen::VectorXd& dist_a,
                                     const Eigen::VectorXd& dist_b, double confidence,
                                     const std::string& label_a, const std::string& label_b) {
  check_distribution(dist_a, "distribution A");
  check_distribution(dist_b, "distribution B");
  if (dist_a.size() != dist_b.size())
    throw DimensionError("distributions have different outcome counts");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw ValidationError("confidence must lie strictly inside (0, 1)");

  DistinguishabilityReport report;
  report.hypothesis_a = label_a;
  report.hypothesis_b = label_b;
  report.confidence = confidence;

  // Averaging the two search directions keeps the result exactly symmetric
  // under swapping the hypotheses.
  const double forward = chernoff_information_oneway(dist_a, dist_b);
  const double backward = chernoff_information_oneway(dist_b, dist_a);
  const double info = std::isfinite(forward) && std::isfinite(backward)
                          ? 0.5 * (forward + backward)
                          : std::numeric_limits<double>::infinity();

  if (info < 1e-12) {
    report.indistinguishable = true;
    report.chernoff_information = 0.0;
    return report;
  }
  report.chernoff_information = info;
  if (std::isinf(info)) {
    report.runs_required = 1;
    return report;
  }
  const double runs = std::ceil(-std::log1p(-confidence) / info);
  report.runs_required = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(runs));
  return report;
}

}  // namespace istbench
