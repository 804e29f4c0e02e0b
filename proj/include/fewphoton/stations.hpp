// stations.hpp
// The three stations of the teleportation circuit: channel preparation
// (BS1, BS2, KM1, BS3), the Bell-measurement station (BS4, KM2, BS5, BS6,
// detectors D1..D4), and the correction station (phase plates around the
// BS7/BS8 interferometer). Wiring is pinned by the verification contracts in
// the test suite: the ideal limit realizes the one-to-one detection-pattern
// map and exact teleportation, and the lossy limit reproduces the
// closed-form channel and conditional-state amplitudes.

#pragma once

#include <memory>
#include <vector>

#include "fewphoton/elements.hpp"
#include "fewphoton/fock.hpp"

namespace fewphoton {

// Dual-rail input C1 |0,1> + C2 |1,0> on modes 1,2. The angle form uses
// C1 = cos(gamma), C2 = sin(gamma) e^{i lambda}.
struct InputStateSpec {
  cplx c1{1.0, 0.0};
  cplx c2{0.0, 0.0};

  static InputStateSpec from_angles(double gamma, double lambda);
  void validate() const;  // |C1|^2 + |C2|^2 = 1 within 1e-12
};

// Survival probabilities of the optical elements: kappa per beam-splitter
// port, eta per cross-Kerr mode, epsilon per detector, varkappa per phase
// plate. xi = kappa/2 is the derived per-branch weight.
struct NoiseProfile {
  double kappa = 1.0;
  double eta = 1.0;
  double epsilon = 1.0;
  double varkappa = 1.0;

  double xi() const { return 0.5 * kappa; }
  bool ideal() const { return kappa == 1.0 && eta == 1.0 && epsilon == 1.0 && varkappa == 1.0; }
  void validate() const;
};

enum class BellLabel { PsiPlus, PsiMinus, PhiPlus, PhiMinus, Rejected };
const char* to_string(BellLabel label);

// Phase-plate settings of the correction station, one row per accepted
// detection pattern. PsiPlus needs no correction at all (no elements are
// applied); the sigma_z / sigma_x / sigma_y rows are (pi, pi, pi),
// (0, 3pi/2, 3pi/2) and (0, pi, 0) for (phi1, phi2, phi3).
struct BobSetting {
  double phi1 = 0.0;
  double phi2 = 0.0;
  double phi3 = 0.0;
};
BobSetting bob_setting_for(BellLabel label);

struct BellOutcome {
  OccupationVector pattern;  // counts on modes 1..4
  double probability = 0.0;
  FockStateVector conditional_state;  // modes 5,6 plus environments; 1..4 pinned
  BellLabel classification = BellLabel::Rejected;
};

// One registry per protocol run; all station builders share it.
std::shared_ptr<ModeRegistry> make_registry();

// C1 |0,1> + C2 |1,0> on modes 1,2 (ideal preparation).
FockStateVector prepare_input(const InputStateSpec& spec,
                              const std::shared_ptr<ModeRegistry>& registry);

// Injects single photons into BS1 (mode 4) and BS2 (mode 5) and applies
// BS1(3,4), BS2(5,6), KM1(4,5) at phi = pi, BS3(5,6). Ideal limit:
// (|1,0,0,1> + |0,1,1,0>)/sqrt(2) on modes 3..6 up to a global phase.
FockStateVector build_quantum_channel(const NoiseProfile& noise,
                                      const std::shared_ptr<ModeRegistry>& registry);

// Bell-measurement optics on the joint state: BS4(3,4), KM2(2,3) at
// phi = pi, BS5(3,4), BS6(1,2), then detector-loss stages on modes 1..4.
FockStateVector alice_premeasure(const FockStateVector& joint, const NoiseProfile& noise);

// Full pipeline: input, channel, measurement optics, readout of modes 1..4.
// Rejected outcomes are kept (their probability mass matters); the list is
// sorted by pattern and the probabilities sum to one.
std::vector<BellOutcome> run_protocol(const InputStateSpec& spec, const NoiseProfile& noise);

// Correction station for an accepted outcome. PsiPlus returns the state
// untouched; the other rows apply plates at phi2 / phi1 / phi3 around and
// inside the BS7/BS8 interferometer on the mode-5 path. Works on a cloned
// registry so repeated corrections stay independent.
FockStateVector bob_correct(const BellOutcome& outcome, const NoiseProfile& noise);

BellLabel classify_pattern(const OccupationVector& pattern);

// The replica target C1 |0,1> + C2 |1,0> on modes 5,6.
FockStateVector ideal_teleport_target(const InputStateSpec& spec,
                                      const std::shared_ptr<ModeRegistry>& registry);

// The ideal channel (|1,0,0,1> + |0,1,1,0>)/sqrt(2) on modes 3..6.
FockStateVector ideal_channel_target(const std::shared_ptr<ModeRegistry>& registry);

// Bell pair on modes 1..4: (|0,1,1,0> +/- |1,0,0,1>)/sqrt(2) for PsiPlus /
// PsiMinus, (|0,1,0,1> +/- |1,0,1,0>)/sqrt(2) for PhiPlus / PhiMinus.
FockStateVector bell_input(BellLabel label, const std::shared_ptr<ModeRegistry>& registry);

// Channel fidelity measured on the simulator: the overlap of the reduced
// channel state on modes 3..6 with the ideal channel.
double simulated_channel_fidelity(const NoiseProfile& noise);

}  // namespace fewphoton
