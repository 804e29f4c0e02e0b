// elements.hpp
// Ideal and lossy optical elements (beam splitter, cross-Kerr medium, phase
// plate, detector-loss stage) applied to a FockStateVector by unitary
// dilation: each lossy port couples to a fresh vacuum environment mode, so
// every intermediate state stays pure and photon number is conserved.

#pragma once

#include <string>
#include <vector>

#include "fewphoton/fock.hpp"

namespace fewphoton {

// Mixing angle theta with transmission t = cos(theta) and reflection
// r = i sin(theta); kappa is the probability of non-absorption per port.
struct BeamSplitterParams {
  double theta = 0.0;
  double kappa = 1.0;
};

// Conditional phase phi imprinted as exp(-i phi n_a n_b) after loss; eta is
// the probability of non-absorption per mode.
struct CrossKerrParams {
  double phi = 0.0;
  double eta = 1.0;
};

struct PhasePlateParams {
  double phi = 0.0;
  double varkappa = 1.0;  // probability of non-absorption
};

struct DetectorParams {
  double epsilon = 1.0;  // quantum efficiency
};

// Couples `mode` to `env_mode` by a real rotation:
//   |1>_m |0>_e -> sqrt(s)|1,0> + sqrt(1-s)|0,1>,
// extended to higher photon numbers by the usual binomial expansion. The
// environment mode must be in vacuum in every term of the state.
void apply_loss_coupler(FockStateVector& state, int mode, double survival, int env_mode);

// Loss couplers with survival kappa on both ports (fresh environment modes,
// skipped entirely when kappa == 1), then the ideal two-mode mixing
// a -> t a + r b, b -> t b + r a. `element_id` labels the environment modes;
// empty means "generate a unique id".
void apply_beam_splitter(FockStateVector& state, int a, int b, const BeamSplitterParams& p,
                         const std::string& element_id = "");

// Loss couplers with survival eta on both modes, then the diagonal phase
// exp(-i phi n_a n_b) on the surviving photons. Single-absorption branches
// therefore carry no conditional phase.
void apply_cross_kerr(FockStateVector& state, int a, int b, const CrossKerrParams& p,
                      const std::string& element_id = "");

// Loss coupler with survival varkappa, then the phase exp(+i phi n).
void apply_phase_plate(FockStateVector& state, int mode, const PhasePlateParams& p,
                       const std::string& element_id = "");

// Loss coupler with survival epsilon; the subsequent readout is ideal.
void apply_detector_loss(FockStateVector& state, int mode, const DetectorParams& p,
                         const std::string& element_id = "");

struct MeasurementOutcome {
  OccupationVector pattern;  // counts on the measured modes, in call order
  double probability = 0.0;
  // Normalized post-measurement state; the measured modes stay pinned at
  // `pattern` (they factor out of the remaining dynamics).
  FockStateVector conditional;
};

// Photon-number-resolving projective readout of `modes`: enumerates every
// pattern with nonzero probability, sorted by pattern. Probabilities sum to
// one for a normalized input.
std::vector<MeasurementOutcome> measure_modes(const FockStateVector& state,
                                              const std::vector<int>& modes);

}  // namespace fewphoton
