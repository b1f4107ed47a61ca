#include <cmath>
#include <vector>

#include <doctest.h>

#include "istbench/errors.hpp"
#include "istbench/optics.hpp"
#include "istbench/tolerances.hpp"
#include "support.hpp"

using namespace istbench;

TEST_SUITE_BEGIN("optics");

TEST_CASE("beamsplitter couplings are unitary in both conventions") {
  BeamsplitterElement e{0, 1, 0.5, BeamsplitterConvention::kRealHadamard};
  const double c = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(e.coupling()(0, 0) - c) < tol::kPureIdentity);
  CHECK(std::abs(e.coupling()(0, 1) - c) < tol::kPureIdentity);
  CHECK(std::abs(e.coupling()(1, 0) - c) < tol::kPureIdentity);
  CHECK(std::abs(e.coupling()(1, 1) + c) < tol::kPureIdentity);

  for (double r : {0.0, 0.1, 0.25, 0.5, 0.73, 1.0})
    for (auto convention :
         {BeamsplitterConvention::kRealHadamard, BeamsplitterConvention::kSymmetricPhase}) {
      const Eigen::Matrix2cd b = BeamsplitterElement{0, 1, r, convention}.coupling();
      CHECK((b.adjoint() * b - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <
            tol::kPureIdentity);
    }
}

TEST_CASE("network validation catches malformed element lists") {
  OpticalNetwork n;
  n.mode_count = 4;
  n.elements = {{0, 1}};
  CHECK_NOTHROW(n.validate());
  n.elements = {{0, 4}};
  CHECK_THROWS_AS(n.validate(), ValidationError);
  n.elements = {{2, 2}};
  CHECK_THROWS_AS(n.validate(), ValidationError);
  n.elements = {{0, 1, 1.4}};
  CHECK_THROWS_AS(n.validate(), ValidationError);
  n.elements.clear();
  n.loss_per_element = 1.0;
  CHECK_THROWS_AS(n.validate(), ValidationError);
  n.loss_per_element = 0.0;
  n.mode_count = 0;
  CHECK_THROWS_AS(n.validate(), ValidationError);
}

TEST_CASE("cascade builder: element count, order, and uniform path depth") {
  const auto n = build_w_network(3);
  CHECK(n.mode_count == 8);
  REQUIRE(n.elements.size() == 7);
  const std::vector<std::pair<int, int>> expected = {
      {0, 4}, {0, 2}, {4, 6}, {0, 1}, {2, 3}, {4, 5}, {6, 7}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(n.elements[i].mode_a == expected[i].first);
    CHECK(n.elements[i].mode_b == expected[i].second);
  }

  CHECK(build_w_network(0).elements.empty());
  CHECK(build_w_network(12).elements.size() == 4095);
  CHECK_THROWS_AS(build_w_network(25), ValidationError);
  CHECK_THROWS_AS(build_w_network(-1), ValidationError);
}

TEST_CASE("both builders give every photon path the same element depth") {
  for (int iterations : {1, 2, 3, 5}) {
    for (bool certification : {false, true}) {
      const auto n = certification ? build_certification_network(iterations)
                                   : build_w_network(iterations);
      // Elements must pair modes at equal depth and advance both; the
      // cascade only ever occupies the modes it has split into, which the
      // depth array tracks with -1 for "not yet reached".
      std::vector<int> depth(n.mode_count, certification ? 0 : -1);
      if (!certification) depth[0] = 0;
      for (const auto& e : n.elements) {
        const int da = depth[e.mode_a];
        const int db = depth[e.mode_b];
        if (!certification) {
          CHECK(db == -1);
          depth[e.mode_b] = da + 1;
          depth[e.mode_a] = da + 1;
        } else {
          CHECK(da == db);
          depth[e.mode_a] = da + 1;
          depth[e.mode_b] = db + 1;
        }
      }
      for (int m = 0; m < n.mode_count; ++m) CHECK(depth[m] == iterations);
    }
  }
}

TEST_CASE("cascade output is the uniform superposition, exactly") {
  for (int iterations : {1, 2, 3, 6}) {
    const int modes = 1 << iterations;
    const auto trace = propagate_pure(build_w_network(iterations), 0);
    const double expected = 1.0 / std::sqrt(static_cast<double>(modes));
    for (int k = 0; k < modes; ++k)
      CHECK(std::abs(trace.photon_amplitudes(k) - expected) < tol::kPureIdentity);
    CHECK(trace.vacuum_population == 0.0);

    const auto rho = run_network(build_w_network(iterations), 0);
    CHECK(fidelity_with_pure(rho, PurePathState::w_state(modes)) >= 1.0 - tol::kChannel);
    CHECK(std::abs(purity(rho) - 1.0) < tol::kChannel);
  }
}

TEST_CASE("per-element loss damps every path by the element depth") {
  const double p = 0.013;
  for (int iterations : {1, 3, 5}) {
    auto network = build_w_network(iterations);
    network.loss_per_element = p;
    const auto trace = propagate_pure(network, 0);
    double expected = 1.0;
    for (int k = 0; k < iterations; ++k) expected *= 1.0 - p;
    CHECK(std::abs(trace.photon_amplitudes.squaredNorm() - expected) < tol::kPureIdentity);
    CHECK(std::abs(trace.vacuum_population - (1.0 - expected)) < tol::kPureIdentity);

    const auto rho = run_network(network, 0);
    CHECK(std::abs(rho.photon_trace() - expected) < tol::kChannel);
    CHECK(std::abs(rho.vacuum_population() - (1.0 - expected)) < tol::kChannel);
  }
}

TEST_CASE("dense evolution equals the naive full-matrix oracle") {
  for (int iterations : {1, 2, 3}) {
    for (double p : {0.0, 0.013}) {
      auto network = build_w_network(iterations);
      network.loss_per_element = p;
      const auto fast = run_network(network, 0);
      const Matrix reference = test::naive_run_network(network, 0);
      CHECK((fast.matrix() - reference).cwiseAbs().maxCoeff() < tol::kPureIdentity);
    }
  }
}

TEST_CASE("input mode and size guards") {
  const auto network = build_w_network(2);
  CHECK_THROWS_AS(run_network(network, 4, std::nullopt), DimensionError);
  CHECK_THROWS_AS(run_network(network, -1, std::nullopt), DimensionError);
  CHECK_THROWS_AS(propagate_pure(network, 7), DimensionError);
  CHECK_THROWS_AS(run_network(build_w_network(13), 0, std::nullopt), DimensionError);
  CHECK_THROWS_AS(
      apply_network(build_w_network(3), density_from_pure(PurePathState::w_state(4))),
      DimensionError);
}

TEST_CASE("return probability: coherent mirror vs full dephasing") {
  for (int iterations = 1; iterations <= 12; ++iterations) {
    const auto network = build_w_network(iterations);
    const double coherent = return_probability(network, 0, MidpointChannel::identity());
    const double dephased = return_probability(network, 0, MidpointChannel::full_dephase());
    CHECK(std::abs(coherent - 1.0) < tol::kPureIdentity);
    CHECK(std::abs(dephased - std::exp2(-iterations)) < tol::kPureIdentity);
  }
  // Deep cascades stay within the channel tolerance.
  for (int iterations : {16, 20}) {
    const auto network = build_w_network(iterations);
    CHECK(std::abs(return_probability(network, 0, MidpointChannel::identity()) - 1.0) <
          tol::kChannel);
    CHECK(std::abs(return_probability(network, 0, MidpointChannel::full_dephase()) -
                   std::exp2(-iterations)) < tol::kChannel);
  }
}

TEST_CASE("return probability with the finite-state channel, by hand") {
  // Partial model, log2_N = 4, gamma = 0.6, depth 3: width 8 is one doubling
  // past the supported depth of 2, so retention is 0.6 and
  // R = 0.6 * 1 + 0.4 * (1/8).
  const auto network = build_w_network(3);
  const auto channel = MidpointChannel::ist_decoherence(IstParams::partial(4.0, 0.6));
  CHECK(std::abs(return_probability(network, 0, channel) - 0.65) < tol::kPureIdentity);

  const auto hard = MidpointChannel::ist_decoherence(IstParams::hard_cutoff(4.0));
  CHECK(std::abs(return_probability(network, 0, hard) - 0.125) < tol::kPureIdentity);
  const auto roomy = MidpointChannel::ist_decoherence(IstParams::hard_cutoff(8.0));
  CHECK(std::abs(return_probability(network, 0, roomy) - 1.0) < tol::kPureIdentity);

  MidpointChannel broken;
  broken.kind = MidpointChannel::Kind::kIstDecoherence;
  CHECK_THROWS_AS(return_probability(network, 0, broken), ValidationError);
}

TEST_CASE("return probability equals the literal density-matrix formula") {
  for (int iterations : {1, 2, 4, 6}) {
    const auto network = build_w_network(iterations);
    for (double retention : {1.0, 0.0, 0.37, 0.8}) {
      MidpointChannel channel;
      if (retention == 1.0)
        channel = MidpointChannel::identity();
      else if (retention == 0.0)
        channel = MidpointChannel::full_dephase();
      else
        // partial with log2_N = 1: budget 1, depth = iterations doublings,
        // retention gamma^iterations; invert for the gamma giving `retention`.
        channel = MidpointChannel::ist_decoherence(
            IstParams::partial(1.0, std::pow(retention, 1.0 / iterations)));
      const double expected = test::naive_return_probability(network, 0, retention);
      CHECK(std::abs(return_probability(network, 0, channel) - expected) <
            tol::kPureIdentity);
    }
  }
}

TEST_CASE("return probability is exact for the symmetric-phase convention too") {
  auto network = build_w_network(4);
  for (auto& e : network.elements)
    e.convention = BeamsplitterConvention::kSymmetricPhase;
  CHECK(std::abs(return_probability(network, 0, MidpointChannel::identity()) - 1.0) <
        tol::kPureIdentity);
  const double expected =
      test::naive_return_probability(network, 0, 0.0);
  CHECK(std::abs(return_probability(network, 0, MidpointChannel::full_dephase()) - expected) <
        tol::kPureIdentity);
}

TEST_CASE("pattern transform: explicit 4-mode rows, unitarity, involution") {
  const Matrix t4 = certification_transform(4);
  const double expected[4][4] = {{0.5, 0.5, 0.5, 0.5},
                                 {0.5, -0.5, 0.5, -0.5},
                                 {0.5, 0.5, -0.5, -0.5},
                                 {0.5, -0.5, -0.5, 0.5}};
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(t4(j, k) - expected[j][k]) < tol::kPureIdentity);

  const Matrix t16 = certification_transform(16);
  CHECK((t16.adjoint() * t16 - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() <
        tol::kPureIdentity);
  CHECK((t16 * t16 - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < tol::kPureIdentity);

  CHECK_THROWS_AS(certification_transform(6), DimensionError);
  CHECK_THROWS_AS(certification_transform(2048), DimensionError);
}

TEST_CASE("the element-level recombiner realizes the pattern transform") {
  for (int iterations : {1, 2, 3, 4}) {
    const int modes = 1 << iterations;
    const auto network = build_certification_network(iterations);
    CHECK(static_cast<int>(network.elements.size()) == iterations * modes / 2);
    const Matrix u = test::naive_network_unitary(network);
    CHECK((u - certification_transform(modes)).cwiseAbs().maxCoeff() < tol::kPureIdentity);
  }
}

TEST_CASE("detector distribution selects the matching pattern state") {
  const Matrix t8 = certification_transform(8);
  const auto rho = density_from_pure(PurePathState::walsh_w_state(8, 5));
  const Eigen::VectorXd dist = detector_distribution(rho, t8);
  for (int d = 0; d < 8; ++d)
    CHECK(std::abs(dist(d) - (d == 5 ? 1.0 : 0.0)) < tol::kPureIdentity);
  CHECK(dist(8) == 0.0);

  // Uniform photon mixture: no pattern, uniform clicks.
  Matrix mixed = Matrix::Zero(9, 9);
  for (int i = 0; i < 8; ++i) mixed(i, i) = 1.0 / 8.0;
  const Eigen::VectorXd flat = detector_distribution(PhotonDensity(mixed), t8);
  for (int d = 0; d < 8; ++d) CHECK(std::abs(flat(d) - 0.125) < tol::kPureIdentity);

  CHECK_THROWS_AS(detector_distribution(rho, certification_transform(4)), DimensionError);
}

TEST_CASE("generation plus recombination routes to detector 0, damped by depth") {
  for (int iterations : {2, 3}) {
    for (double p : {0.0, 0.001}) {
      auto generation = build_w_network(iterations);
      generation.loss_per_element = p;
      auto recombination = build_certification_network(iterations);
      recombination.loss_per_element = p;
      const auto rho = apply_network(recombination, run_network(generation, 0));
      const Eigen::VectorXd dist = click_distribution(rho);
      double expected = 1.0;
      for (int k = 0; k < 2 * iterations; ++k) expected *= 1.0 - p;
      CHECK(std::abs(dist(0) - expected) < tol::kChannel);
      for (int d = 1; d < (1 << iterations); ++d) CHECK(dist(d) < tol::kPureIdentity);
      CHECK(std::abs(dist(1 << iterations) - (1.0 - expected)) < tol::kChannel);
    }
  }
}

TEST_CASE("vacuum input clicks nowhere") {
  const auto rho = density_from_pure(PurePathState::vacuum(4));
  const Eigen::VectorXd dist = detector_distribution(rho, certification_transform(4));
  for (int d = 0; d < 4; ++d) CHECK(dist(d) == 0.0);
  CHECK(dist(4) == 1.0);
}

TEST_CASE("network serialization round-trips") {
  auto network = build_w_network(3);
  network.loss_per_element = 0.002;
  network.elements[2].convention = BeamsplitterConvention::kSymmetricPhase;
  network.elements[2].reflectivity = 0.4;
  const auto restored = network_from_json(network_to_json(network));
  CHECK(restored.mode_count == network.mode_count);
  CHECK(restored.loss_per_element == network.loss_per_element);
  REQUIRE(restored.elements.size() == network.elements.size());
  for (std::size_t i = 0; i < network.elements.size(); ++i) {
    CHECK(restored.elements[i].mode_a == network.elements[i].mode_a);
    CHECK(restored.elements[i].mode_b == network.elements[i].mode_b);
    CHECK(restored.elements[i].reflectivity == network.elements[i].reflectivity);
    CHECK(restored.elements[i].convention == network.elements[i].convention);
  }
  CHECK_THROWS_AS(network_from_json("{not json"), ValidationError);
  CHECK_THROWS_AS(network_from_json(R"({"mode_count": 2, "elements": [
    {"mode_a": 0, "mode_b": 1, "convention": "bogus"}]})"),
                  ValidationError);
}

TEST_SUITE_END();
