#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fewphoton/elements.hpp"
#include "fewphoton/fock.hpp"
#include "fewphoton/formulas.hpp"
#include "fewphoton/stations.hpp"

using namespace fewphoton;

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

OccupationVector occ_at(std::initializer_list<std::pair<int, int>> photons) {
  OccupationVector occ;
  for (const auto& [mode, n] : photons) occ.set(mode, n);
  return occ;
}

const BellOutcome* find_pattern(const std::vector<BellOutcome>& outcomes,
                                const std::string& digits) {
  for (const auto& outcome : outcomes) {
    if (outcome.pattern.digits(4) == digits) return &outcome;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("input preparation places the photon per coefficient") {
  auto registry = make_registry();
  auto zero = prepare_input(InputStateSpec::from_angles(0.0, 0.0), registry);
  CHECK(std::abs(zero.amplitude(occ_at({{1, 1}})) - cplx(1.0, 0.0)) < 1e-15);

  auto one = prepare_input(InputStateSpec::from_angles(kPi / 2.0, 0.0), registry);
  CHECK(std::abs(one.amplitude(occ_at({{0, 1}})) - cplx(1.0, 0.0)) < 1e-15);

  auto tilted = prepare_input(InputStateSpec::from_angles(kPi / 3.0, 0.7), registry);
  CHECK(std::abs(tilted.amplitude(occ_at({{1, 1}})) - cplx(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(tilted.amplitude(occ_at({{0, 1}})) -
                 std::sin(kPi / 3.0) * std::polar(1.0, 0.7)) < 1e-12);

  InputStateSpec bad;
  bad.c1 = 1.0;
  bad.c2 = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  NoiseProfile bad_noise;
  bad_noise.kappa = 0.0;
  CHECK_THROWS_AS(bad_noise.validate(), std::invalid_argument);
}

TEST_CASE("ideal channel equals the entangled target up to a global phase") {
  auto registry = make_registry();
  NoiseProfile ideal;
  auto channel = build_quantum_channel(ideal, registry);
  auto target = ideal_channel_target(registry);

  CHECK(overlap_up_to_global_phase(channel, target) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(registry->size() == 6);  // no environment modes in the lossless limit

  // The simulator's own phase convention: -(|1,0,0,1> + |0,1,1,0>)/sqrt(2).
  CHECK(std::abs(channel.amplitude(occ_at({{2, 1}, {5, 1}})) - cplx(-kInvSqrt2, 0.0)) <
        1e-12);
  CHECK(std::abs(channel.amplitude(occ_at({{3, 1}, {4, 1}})) - cplx(-kInvSqrt2, 0.0)) <
        1e-12);
}

TEST_CASE("simulated channel fidelity matches the closed form") {
  for (auto [kappa, eta] : std::vector<std::pair<double, double>>{
           {1.0, 1.0}, {0.98, 0.98}, {0.9, 0.95}, {0.99, 0.9}}) {
    NoiseProfile noise;
    noise.kappa = kappa;
    noise.eta = eta;
    const double sim = simulated_channel_fidelity(noise);
    const double closed = channel_fidelity(kappa, eta);
    CHECK(std::abs(sim - closed) < 1e-10);
  }
  NoiseProfile headline;
  headline.kappa = 0.98;
  headline.eta = 0.98;
  const double value = simulated_channel_fidelity(headline);
  CHECK(value > 0.915);
  CHECK(value < 0.925);
}

TEST_CASE("lossy channel one-photon-per-pair branches match the closed forms") {
  NoiseProfile noise;
  noise.kappa = 0.98;
  noise.eta = 0.98;
  auto registry = make_registry();
  auto channel = build_quantum_channel(noise, registry);

  const auto model = channel_two_photon_amplitudes(noise.kappa, noise.eta);
  const auto printed = channel_two_photon_amplitudes_tabulated(noise.kappa, noise.eta);
  const std::vector<int> system_pair = {2, 3, 4, 5};

  for (const auto& [pattern, amp] : model) {
    OccupationVector occ;
    for (int i = 0; i < 4; ++i) occ.set(system_pair[i], pattern[i] - '0');
    const cplx sim = channel.amplitude(occ);
    INFO("pattern ", pattern);
    CHECK(std::abs(sim - amp) < 1e-12);

    // The hand-tabulated frame differs only by per-mode phases:
    // printed = sim * (-1)^{n4} * i^{n5} * (-i)^{n6}.
    const int n4 = pattern[1] - '0';
    const int n5 = pattern[2] - '0';
    const int n6 = pattern[3] - '0';
    cplx frame = std::pow(cplx(-1.0, 0.0), n4) * std::pow(cplx(0.0, 1.0), n5) *
                 std::pow(cplx(0.0, -1.0), n6);
    CHECK(std::abs(printed.at(pattern) - sim * frame) < 1e-12);
    CHECK(std::abs(std::abs(printed.at(pattern)) - std::abs(sim)) < 1e-12);
  }
}

TEST_CASE("ideal protocol: four equiprobable patterns, perfect correction") {
  const std::map<std::string, BellLabel> table = {
      {"0110", BellLabel::PsiPlus},
      {"1010", BellLabel::PsiMinus},
      {"1001", BellLabel::PhiPlus},
      {"0101", BellLabel::PhiMinus},
  };
  NoiseProfile ideal;

  for (auto [gamma, lambda] : std::vector<std::pair<double, double>>{
           {0.3 * kPi, 0.7 * kPi}, {0.25 * kPi, 0.0}, {0.8 * kPi, 1.9 * kPi}}) {
    const auto spec = InputStateSpec::from_angles(gamma, lambda);
    const auto outcomes = run_protocol(spec, ideal);
    REQUIRE(outcomes.size() == 4);

    for (const auto& outcome : outcomes) {
      const std::string digits = outcome.pattern.digits(4);
      REQUIRE(table.count(digits) == 1);
      CHECK(outcome.classification == table.at(digits));
      CHECK(std::abs(outcome.probability - 0.25) < 1e-12);

      const auto corrected = bob_correct(outcome, ideal);
      const auto rho = partial_trace(corrected, {4, 5});
      const auto target = ideal_teleport_target(spec, corrected.registry());
      CHECK(std::abs(fidelity(rho, target) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("pattern classification accepts exactly one photon per detector pair") {
  CHECK(classify_pattern(occ_at({{1, 1}, {2, 1}})) == BellLabel::PsiPlus);
  CHECK(classify_pattern(occ_at({{0, 1}, {2, 1}})) == BellLabel::PsiMinus);
  CHECK(classify_pattern(occ_at({{0, 1}, {3, 1}})) == BellLabel::PhiPlus);
  CHECK(classify_pattern(occ_at({{1, 1}, {3, 1}})) == BellLabel::PhiMinus);
  CHECK(classify_pattern(occ_at({{0, 2}})) == BellLabel::Rejected);
  CHECK(classify_pattern(occ_at({{0, 1}})) == BellLabel::Rejected);
  CHECK(classify_pattern(OccupationVector()) == BellLabel::Rejected);
  CHECK(classify_pattern(occ_at({{0, 1}, {1, 1}})) == BellLabel::Rejected);
}

TEST_CASE("lossy 0110 conditional equals the closed-form branch vector") {
  NoiseProfile noise;
  noise.kappa = 0.98;
  noise.eta = 0.98;

  const auto spec = InputStateSpec::from_angles(kPi / 4.0, 0.0);
  const auto outcomes = run_protocol(spec, noise);
  const auto* hit = find_pattern(outcomes, "0110");
  REQUIRE(hit != nullptr);
  CHECK(hit->classification == BellLabel::PsiPlus);

  const auto k = teleport_coefficients(spec.c1, spec.c2, noise.kappa, noise.eta);
  const double n = normalization(k, noise.kappa, noise.eta);
  CHECK(std::abs(hit->probability - 1.0 / (n * n)) < 1e-12);

  const auto registry = hit->conditional_state.registry();
  const int e25 = registry->find_environment_mode("BS2", "5");
  const int e35 = registry->find_environment_mode("BS3", "5");
  const int k5 = registry->find_environment_mode("KM1", "5");
  const int e36 = registry->find_environment_mode("BS3", "6");
  REQUIRE(e25 >= 0);
  REQUIRE(e35 >= 0);
  REQUIRE(k5 >= 0);
  REQUIRE(e36 >= 0);

  const double rt_gamma = std::sqrt(1.0 - noise.kappa);
  const double rt_lambda = std::sqrt(1.0 - noise.eta);
  FockStateVector expected(registry);
  // Detected photons stay pinned at modes 2 and 3; the third photon sits on
  // mode 5, mode 6, or one of the four reachable environment modes.
  expected.add(occ_at({{1, 1}, {2, 1}, {5, 1}}), k.a);
  expected.add(occ_at({{1, 1}, {2, 1}, {4, 1}}), k.b);
  expected.add(occ_at({{1, 1}, {2, 1}, {e25, 1}}), rt_gamma * k.c);
  expected.add(occ_at({{1, 1}, {2, 1}, {e35, 1}}), rt_gamma * k.d);
  expected.add(occ_at({{1, 1}, {2, 1}, {k5, 1}}), rt_lambda * k.e);
  expected.add(occ_at({{1, 1}, {2, 1}, {e36, 1}}), rt_gamma * k.f);
  expected.normalize();

  CHECK(hit->conditional_state.terms().size() == expected.terms().size());
  CHECK(overlap_up_to_global_phase(hit->conditional_state, expected) ==
        doctest::Approx(1.0).epsilon(1e-10));

  // Componentwise: one global phase connects simulation and closed form.
  const cplx phase = hit->conditional_state.amplitude(occ_at({{1, 1}, {2, 1}, {5, 1}})) /
                     expected.amplitude(occ_at({{1, 1}, {2, 1}, {5, 1}}));
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-10);
  for (const auto& [occ, amp] : expected.terms()) {
    CHECK(std::abs(hit->conditional_state.amplitude(occ) - amp * phase) < 1e-10);
  }

  // Reduced state on Bob's modes: unit trace, positive, closed-form fidelity.
  const auto rho = partial_trace(hit->conditional_state, {4, 5});
  CHECK(std::abs(rho.trace_real() - 1.0) < 1e-12);
  CHECK(rho.hermiticity_defect() < 1e-12);
  CHECK(rho.min_eigenvalue() > -1e-12);
  const auto target = ideal_teleport_target(spec, registry);
  CHECK(std::abs(fidelity(rho, target) -
                 teleport_fidelity(spec.c1, spec.c2, noise.kappa, noise.eta)) < 1e-10);
}

TEST_CASE("detection probability scales with detector efficiency squared") {
  const auto spec = InputStateSpec::from_angles(kPi / 4.0, 0.0);
  const auto k = teleport_coefficients(spec.c1, spec.c2, 0.98, 0.98);
  const double n = normalization(k, 0.98, 0.98);

  NoiseProfile noise;
  noise.kappa = 0.98;
  noise.eta = 0.98;
  noise.epsilon = 0.7;
  const auto outcomes = run_protocol(spec, noise);
  const auto* hit = find_pattern(outcomes, "0110");
  REQUIRE(hit != nullptr);
  CHECK(std::abs(hit->probability - 0.49 / (n * n)) < 1e-12);
  CHECK(std::abs(hit->probability -
                 detection_probability_0110(spec.c1, spec.c2, 0.98, 0.98, 0.7)) < 1e-12);
  CHECK(hit->probability == doctest::Approx(0.11).epsilon(0.05));

  // Same conditional state as with perfect detectors: efficiency only
  // rescales the acceptance probability of this pattern.
  NoiseProfile perfect = noise;
  perfect.epsilon = 1.0;
  const auto reference = run_protocol(spec, perfect);
  const auto* ref_hit = find_pattern(reference, "0110");
  REQUIRE(ref_hit != nullptr);
  const auto rho_a = partial_trace(hit->conditional_state, {4, 5});
  const auto rho_b = partial_trace(ref_hit->conditional_state, {4, 5});
  const auto target = ideal_teleport_target(spec, make_registry());
  CHECK(std::abs(fidelity(rho_a, target) - fidelity(rho_b, target)) < 1e-12);
}

TEST_CASE("bell inputs: ideal permutation and lossy leakage amplitudes") {
  const std::map<BellLabel, std::string> table = {
      {BellLabel::PsiPlus, "0110"},
      {BellLabel::PsiMinus, "1010"},
      {BellLabel::PhiPlus, "1001"},
      {BellLabel::PhiMinus, "0101"},
  };

  NoiseProfile ideal;
  for (const auto& [label, digits] : table) {
    auto registry = make_registry();
    auto state = alice_premeasure(bell_input(label, registry), ideal);
    const auto outcomes = measure_modes(state, {0, 1, 2, 3});
    // Imperfect cancellation of sin(pi) leaves ~1e-33 probability dust on
    // other patterns; the permutation holds with everything else at that floor.
    bool found = false;
    double dust = 0.0;
    for (const auto& outcome : outcomes) {
      if (outcome.pattern.digits(4) == digits) {
        found = true;
        CHECK(std::abs(outcome.probability - 1.0) < 1e-12);
        CHECK(classify_pattern(outcome.pattern) == label);
      } else {
        dust = std::max(dust, outcome.probability);
      }
    }
    CHECK(found);
    CHECK(dust < 1e-24);
  }

  NoiseProfile noise;
  noise.kappa = 0.98;
  noise.eta = 0.98;
  for (bool plus : {true, false}) {
    auto registry = make_registry();
    auto state = alice_premeasure(
        bell_input(plus ? BellLabel::PsiPlus : BellLabel::PsiMinus, registry), noise);
    const auto model = bell_station_response(plus, noise.kappa, noise.eta);
    for (const auto& [pattern, amp] : model) {
      OccupationVector occ;
      for (int i = 0; i < 4; ++i) occ.set(i, pattern[i] - '0');
      INFO("plus=", plus, " pattern ", pattern);
      CHECK(std::abs(state.amplitude(occ) - amp) < 1e-12);
    }
    const std::string dominant = plus ? "0110" : "1010";
    const std::string cross = plus ? "1010" : "0110";
    CHECK(std::abs(model.at(dominant)) == doctest::Approx(0.9604).epsilon(2e-4));
    CHECK(std::abs(model.at(cross)) == doctest::Approx(0.0049).epsilon(2e-2));
  }
}

TEST_CASE("teleport fidelity is non-increasing as splitter loss grows") {
  const auto spec = InputStateSpec::from_angles(kPi / 4.0, 0.0);
  double previous = 2.0;
  for (double kappa : {1.0, 0.99, 0.98, 0.95}) {
    NoiseProfile noise;
    noise.kappa = kappa;
    noise.eta = 0.98;
    const auto outcomes = run_protocol(spec, noise);
    const auto* hit = find_pattern(outcomes, "0110");
    REQUIRE(hit != nullptr);
    const auto rho = partial_trace(hit->conditional_state, {4, 5});
    const double f = fidelity(rho, ideal_teleport_target(spec, make_registry()));
    CHECK(f <= previous + 1e-12);
    previous = f;
  }
}

TEST_CASE("post-selection bookkeeping is sound for random noisy configurations") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> survival(0.7, 1.0);
  std::uniform_real_distribution<double> angle(0.0, kPi);

  for (int trial = 0; trial < 20; ++trial) {
    NoiseProfile noise;
    noise.kappa = survival(rng);
    noise.eta = survival(rng);
    noise.epsilon = survival(rng);
    noise.varkappa = survival(rng);
    const auto spec = InputStateSpec::from_angles(angle(rng), 2.0 * angle(rng));

    const auto outcomes = run_protocol(spec, noise);
    double total = 0.0;
    for (const auto& outcome : outcomes) {
      total += outcome.probability;
      const int pair_a = outcome.pattern.get(0) + outcome.pattern.get(1);
      const int pair_b = outcome.pattern.get(2) + outcome.pattern.get(3);
      const bool accepted = outcome.classification != BellLabel::Rejected;
      CHECK(accepted == (pair_a == 1 && pair_b == 1));
      CHECK(outcome.probability > 0.0);
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("correction station composes cleanly and rejects rejected outcomes") {
  NoiseProfile noise;
  noise.kappa = 0.98;
  noise.eta = 0.98;
  noise.varkappa = 0.9;
  const auto spec = InputStateSpec::from_angles(0.4, 1.3);
  const auto outcomes = run_protocol(spec, noise);
  const auto* hit = find_pattern(outcomes, "1010");
  REQUIRE(hit != nullptr);

  const auto once = bob_correct(*hit, noise);
  const auto twice = bob_correct(*hit, noise);  // registry cloning keeps runs independent
  CHECK(std::abs(once.norm() - 1.0) < 1e-12);
  CHECK(once.dump() == twice.dump());

  BellOutcome rejected{OccupationVector(), 0.0, FockStateVector::vacuum(make_registry()),
                       BellLabel::Rejected};
  CHECK_THROWS_AS(bob_correct(rejected, noise), std::invalid_argument);
  CHECK_THROWS_AS(bob_setting_for(BellLabel::Rejected), std::invalid_argument);
}

TEST_CASE("every accepted outcome corrects toward the target under loss") {
  NoiseProfile noise;
  noise.kappa = 0.98;
  noise.eta = 0.98;
  const auto spec = InputStateSpec::from_angles(kPi / 3.0, 0.9);
  const auto outcomes = run_protocol(spec, noise);
  const auto target = ideal_teleport_target(spec, make_registry());

  int accepted = 0;
  for (const auto& outcome : outcomes) {
    if (outcome.classification == BellLabel::Rejected) continue;
    ++accepted;
    const auto corrected = bob_correct(outcome, noise);
    const auto rho = partial_trace(corrected, {4, 5});
    const double f = fidelity(rho, target);
    INFO("pattern ", outcome.pattern.digits(4));
    CHECK(f > 0.8);  // high-fidelity regime of the headline parameters
    CHECK(f <= 1.0 + 1e-12);
  }
  CHECK(accepted == 4);
}
