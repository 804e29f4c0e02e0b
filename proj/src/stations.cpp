// stations.cpp

#include "fewphoton/stations.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fewphoton {

namespace {

constexpr double kPi = std::numbers::pi;

void check_probability(double value, const char* name) {
  if (!(value > 0.0) || value > 1.0) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1]");
  }
}

OccupationVector occupation(std::initializer_list<std::pair<int, int>> counts) {
  OccupationVector occ;
  for (auto [mode, n] : counts) occ.set(mode, n);
  return occ;
}

}  // namespace

InputStateSpec InputStateSpec::from_angles(double gamma, double lambda) {
  InputStateSpec spec;
  spec.c1 = cplx(std::cos(gamma), 0.0);
  spec.c2 = std::polar(std::sin(gamma), lambda);
  return spec;
}

void InputStateSpec::validate() const {
  double norm = std::norm(c1) + std::norm(c2);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw std::invalid_argument("input coefficients are not normalized: |C1|^2+|C2|^2 = " +
                                format_17(norm));
  }
}

void NoiseProfile::validate() const {
  check_probability(kappa, "kappa");
  check_probability(eta, "eta");
  check_probability(epsilon, "epsilon");
  check_probability(varkappa, "varkappa");
}

const char* to_string(BellLabel label) {
  switch (label) {
    case BellLabel::PsiPlus: return "PsiPlus";
    case BellLabel::PsiMinus: return "PsiMinus";
    case BellLabel::PhiPlus: return "PhiPlus";
    case BellLabel::PhiMinus: return "PhiMinus";
    case BellLabel::Rejected: return "Rejected";
  }
  return "?";
}

BobSetting bob_setting_for(BellLabel label) {
  switch (label) {
    case BellLabel::PsiPlus: return {0.0, 0.0, 0.0};                      // identity
    case BellLabel::PsiMinus: return {kPi, kPi, kPi};                     // sigma_z
    case BellLabel::PhiPlus: return {0.0, 1.5 * kPi, 1.5 * kPi};          // sigma_x
    case BellLabel::PhiMinus: return {0.0, kPi, 0.0};                     // sigma_y
    case BellLabel::Rejected: break;
  }
  throw std::invalid_argument("no correction setting for rejected outcomes");
}

std::shared_ptr<ModeRegistry> make_registry() { return std::make_shared<ModeRegistry>(); }

FockStateVector prepare_input(const InputStateSpec& spec,
                              const std::shared_ptr<ModeRegistry>& registry) {
  spec.validate();
  const int m1 = registry->system_mode(1);
  const int m2 = registry->system_mode(2);
  FockStateVector state(registry);
  state.add(occupation({{m2, 1}}), spec.c1);
  state.add(occupation({{m1, 1}}), spec.c2);
  return state;
}

FockStateVector build_quantum_channel(const NoiseProfile& noise,
                                      const std::shared_ptr<ModeRegistry>& registry) {
  noise.validate();
  const int m3 = registry->system_mode(3);
  const int m4 = registry->system_mode(4);
  const int m5 = registry->system_mode(5);
  const int m6 = registry->system_mode(6);

  FockStateVector state =
      FockStateVector::basis_state(registry, occupation({{m4, 1}, {m5, 1}}));
  const BeamSplitterParams bs{kPi / 4.0, noise.kappa};
  const CrossKerrParams km{kPi, noise.eta};
  apply_beam_splitter(state, m3, m4, bs, "BS1");
  apply_beam_splitter(state, m5, m6, bs, "BS2");
  apply_cross_kerr(state, m4, m5, km, "KM1");
  apply_beam_splitter(state, m5, m6, bs, "BS3");
  return state;
}

FockStateVector alice_premeasure(const FockStateVector& joint, const NoiseProfile& noise) {
  noise.validate();
  const auto& registry = joint.registry();
  const int m1 = registry->system_mode(1);
  const int m2 = registry->system_mode(2);
  const int m3 = registry->system_mode(3);
  const int m4 = registry->system_mode(4);

  FockStateVector state = joint;
  const BeamSplitterParams bs{kPi / 4.0, noise.kappa};
  const CrossKerrParams km{kPi, noise.eta};
  apply_beam_splitter(state, m3, m4, bs, "BS4");
  apply_cross_kerr(state, m2, m3, km, "KM2");
  apply_beam_splitter(state, m3, m4, bs, "BS5");
  apply_beam_splitter(state, m1, m2, bs, "BS6");
  const DetectorParams det{noise.epsilon};
  apply_detector_loss(state, m1, det, "D1");
  apply_detector_loss(state, m2, det, "D2");
  apply_detector_loss(state, m3, det, "D3");
  apply_detector_loss(state, m4, det, "D4");
  return state;
}

BellLabel classify_pattern(const OccupationVector& pattern) {
  const int n1 = pattern.get(0), n2 = pattern.get(1);
  const int n3 = pattern.get(2), n4 = pattern.get(3);
  if (n1 + n2 != 1 || n3 + n4 != 1) return BellLabel::Rejected;
  if (n2 == 1 && n3 == 1) return BellLabel::PsiPlus;
  if (n1 == 1 && n3 == 1) return BellLabel::PsiMinus;
  if (n1 == 1 && n4 == 1) return BellLabel::PhiPlus;
  return BellLabel::PhiMinus;  // n2 == 1 && n4 == 1
}

std::vector<BellOutcome> run_protocol(const InputStateSpec& spec, const NoiseProfile& noise) {
  spec.validate();
  noise.validate();
  auto registry = make_registry();
  FockStateVector joint =
      product(prepare_input(spec, registry), build_quantum_channel(noise, registry));
  FockStateVector premeasured = alice_premeasure(joint, noise);

  std::vector<int> detector_modes{registry->system_mode(1), registry->system_mode(2),
                                  registry->system_mode(3), registry->system_mode(4)};
  std::vector<BellOutcome> outcomes;
  for (auto& mo : measure_modes(premeasured, detector_modes)) {
    BellOutcome outcome{mo.pattern, mo.probability, std::move(mo.conditional),
                        classify_pattern(mo.pattern)};
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

FockStateVector bob_correct(const BellOutcome& outcome, const NoiseProfile& noise) {
  noise.validate();
  if (outcome.classification == BellLabel::Rejected) {
    throw std::invalid_argument("bob_correct called on a rejected outcome");
  }
  // Clone the registry so corrections of sibling outcomes from the same run
  // keep independent environment bookkeeping.
  auto registry = std::make_shared<ModeRegistry>(*outcome.conditional_state.registry());
  FockStateVector state = outcome.conditional_state.with_registry(registry);
  if (outcome.classification == BellLabel::PsiPlus) return state;

  const int m5 = registry->system_mode(5);
  const int m6 = registry->system_mode(6);
  const BobSetting setting = bob_setting_for(outcome.classification);
  const BeamSplitterParams bs{kPi / 4.0, noise.kappa};
  apply_phase_plate(state, m5, {setting.phi2, noise.varkappa}, "PP2");
  apply_beam_splitter(state, m5, m6, bs, "BS7");
  apply_phase_plate(state, m5, {setting.phi1, noise.varkappa}, "PP1");
  apply_beam_splitter(state, m5, m6, bs, "BS8");
  apply_phase_plate(state, m5, {setting.phi3, noise.varkappa}, "PP3");
  return state;
}

FockStateVector ideal_teleport_target(const InputStateSpec& spec,
                                      const std::shared_ptr<ModeRegistry>& registry) {
  spec.validate();
  const int m5 = registry->system_mode(5);
  const int m6 = registry->system_mode(6);
  FockStateVector state(registry);
  state.add(occupation({{m6, 1}}), spec.c1);
  state.add(occupation({{m5, 1}}), spec.c2);
  return state;
}

FockStateVector ideal_channel_target(const std::shared_ptr<ModeRegistry>& registry) {
  const int m3 = registry->system_mode(3);
  const int m4 = registry->system_mode(4);
  const int m5 = registry->system_mode(5);
  const int m6 = registry->system_mode(6);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  FockStateVector state(registry);
  state.add(occupation({{m3, 1}, {m6, 1}}), inv_sqrt2);
  state.add(occupation({{m4, 1}, {m5, 1}}), inv_sqrt2);
  return state;
}

FockStateVector bell_input(BellLabel label, const std::shared_ptr<ModeRegistry>& registry) {
  const int m1 = registry->system_mode(1);
  const int m2 = registry->system_mode(2);
  const int m3 = registry->system_mode(3);
  const int m4 = registry->system_mode(4);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  FockStateVector state(registry);
  switch (label) {
    case BellLabel::PsiPlus:
    case BellLabel::PsiMinus: {
      double sign = label == BellLabel::PsiPlus ? 1.0 : -1.0;
      state.add(occupation({{m2, 1}, {m3, 1}}), inv_sqrt2);
      state.add(occupation({{m1, 1}, {m4, 1}}), sign * inv_sqrt2);
      return state;
    }
    case BellLabel::PhiPlus:
    case BellLabel::PhiMinus: {
      double sign = label == BellLabel::PhiPlus ? 1.0 : -1.0;
      state.add(occupation({{m2, 1}, {m4, 1}}), inv_sqrt2);
      state.add(occupation({{m1, 1}, {m3, 1}}), sign * inv_sqrt2);
      return state;
    }
    case BellLabel::Rejected: break;
  }
  throw std::invalid_argument("bell_input: no Bell state for this label");
}

double simulated_channel_fidelity(const NoiseProfile& noise) {
  auto registry = make_registry();
  FockStateVector channel = build_quantum_channel(noise, registry);
  std::vector<int> keep{registry->system_mode(3), registry->system_mode(4),
                        registry->system_mode(5), registry->system_mode(6)};
  DensityMatrix rho = partial_trace(channel, keep);
  return fidelity(rho, ideal_channel_target(registry));
}

}  // namespace fewphoton
