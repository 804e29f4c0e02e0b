// fock.hpp
// Sparse multimode bosonic pure states, mode bookkeeping, partial trace and
// fidelity primitives for few-photon linear-optics simulation.

#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fewphoton {

using cplx = std::complex<double>;

// The protocol never holds more than three photons at once (one in the
// dual-rail input pair, two in the entangled channel). Exceeding the cap is
// a hard error, never a silent truncation.
inline constexpr int kMaxPhotonsPerMode = 3;
inline constexpr int kSystemModeCount = 6;

// Names and indexes the optical modes of one circuit run. Indices 0..5 are
// the six fixed system modes (named "1".."6"); environment modes are
// appended on demand by lossy elements, exactly one per lossy port, and are
// never shared between elements or reused.
class ModeRegistry {
 public:
  ModeRegistry();

  int size() const { return static_cast<int>(names_.size()); }
  int system_mode(int label) const;  // label in 1..6 -> index 0..5
  bool is_environment(int mode) const;
  const std::string& name(int mode) const;

  // Creates a fresh environment mode owned by (element_id, port). A second
  // registration with the same pair is rejected: each lossy port couples to
  // its own vacuum bath.
  int register_environment_mode(const std::string& element_id, const std::string& port);

  // Index of a previously registered environment mode, or -1.
  int find_environment_mode(const std::string& element_id, const std::string& port) const;

  // Unique element id with the given stem, for callers that do not care
  // about stable element names (ad-hoc circuits, randomized tests).
  std::string fresh_element_id(const std::string& stem);

  std::vector<int> system_modes() const;
  std::vector<int> environment_modes() const;

 private:
  std::vector<std::string> names_;
  std::map<std::pair<std::string, std::string>, int> env_by_port_;
  int id_counter_ = 0;
};

// Photon counts per mode, keyed positionally by registry index. Trailing
// zeros are stripped to a canonical form, so states written before an
// environment mode existed compare equal to the same occupation written
// afterwards (new modes implicitly hold count 0).
class OccupationVector {
 public:
  OccupationVector() = default;
  explicit OccupationVector(std::vector<std::uint8_t> counts);

  int get(int mode) const;
  void set(int mode, int count);
  int total() const;
  bool is_vacuum() const { return counts_.empty(); }

  // Counts at the given modes, in the given order; used as a key on a mode
  // subset (detector patterns, partial-trace basis labels).
  OccupationVector restricted_to(const std::vector<int>& modes) const;
  bool vanishes_outside(const std::vector<int>& modes) const;

  // Concatenated per-mode digits, zero-padded to `width` modes.
  std::string digits(int width) const;

  const std::vector<std::uint8_t>& counts() const { return counts_; }

  // Mode-wise sum; operands must not both occupy the same mode.
  friend OccupationVector disjoint_union(const OccupationVector& a, const OccupationVector& b);

  auto operator<=>(const OccupationVector&) const = default;

 private:
  void strip();
  std::vector<std::uint8_t> counts_;
};

// Sparse superposition over occupation vectors: the pure state of the run in
// the dilated (system x environment) picture. Value-semantic; the registry
// is shared because environment modes registered mid-circuit extend every
// existing state implicitly with vacuum.
class FockStateVector {
 public:
  explicit FockStateVector(std::shared_ptr<ModeRegistry> registry);

  static FockStateVector vacuum(std::shared_ptr<ModeRegistry> registry);
  static FockStateVector basis_state(std::shared_ptr<ModeRegistry> registry,
                                     const OccupationVector& occ);

  const std::shared_ptr<ModeRegistry>& registry() const { return registry_; }
  const std::map<OccupationVector, cplx>& terms() const { return terms_; }

  void add(const OccupationVector& occ, cplx amplitude);  // accumulates; exact zeros pruned
  void set_amplitude(const OccupationVector& occ, cplx amplitude);
  cplx amplitude(const OccupationVector& occ) const;

  double norm_sq() const;
  double norm() const;
  void normalize();
  void scale(cplx factor);

  // Unnormalized fragment containing only the terms selected by `pred`.
  FockStateVector filtered(const std::function<bool(const OccupationVector&)>& pred) const;

  // Same amplitudes bound to another registry object (which must describe at
  // least as many modes). Used to give derived circuits independent
  // environment bookkeeping.
  FockStateVector with_registry(std::shared_ptr<ModeRegistry> registry) const;

  // One line per term: occupation digits (registry width), tab, real part,
  // tab, imaginary part; 17 significant digits; terms in key order.
  std::string dump() const;

 private:
  std::shared_ptr<ModeRegistry> registry_;
  std::map<OccupationVector, cplx> terms_;
};

cplx inner_product(const FockStateVector& a, const FockStateVector& b);  // <a|b>
double overlap_up_to_global_phase(const FockStateVector& a, const FockStateVector& b);

// Tensor product of two states of the same registry with disjoint occupied
// modes (e.g. the input pair on modes 1,2 times the channel on 3..6).
FockStateVector product(const FockStateVector& a, const FockStateVector& b);

// Reduced state on an ordered mode subset after tracing out everything else.
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> modes, std::vector<OccupationVector> basis,
                Eigen::MatrixXcd entries);

  const std::vector<int>& modes() const { return modes_; }
  const std::vector<OccupationVector>& basis() const { return basis_; }
  const Eigen::MatrixXcd& matrix() const { return entries_; }

  int basis_index(const OccupationVector& restricted) const;  // -1 if absent
  cplx entry(const OccupationVector& row, const OccupationVector& col) const;

  double trace_real() const;
  double hermiticity_defect() const;  // max_ij |M_ij - conj(M_ji)|
  double min_eigenvalue() const;

 private:
  std::vector<int> modes_;
  std::vector<OccupationVector> basis_;
  Eigen::MatrixXcd entries_;
};

// Traces out all modes not in `keep`. The input must be normalized (within
// 1e-9); `keep` must be a nonempty set of registered modes.
DensityMatrix partial_trace(const FockStateVector& state, const std::vector<int>& keep);

// <target|rho|target> for a normalized pure target supported only on the
// modes of `rho`. The imaginary residue must vanish within 1e-12.
double fidelity(const DensityMatrix& rho, const FockStateVector& target);

// Formats a double with 17 significant digits, locale-independent.
std::string format_17(double value);

}  // namespace fewphoton
