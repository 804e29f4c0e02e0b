// fock.cpp

#include "fewphoton/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fewphoton {

std::string format_17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// ---------------------------------------------------------------- registry

ModeRegistry::ModeRegistry() {
  names_.reserve(kSystemModeCount);
  for (int label = 1; label <= kSystemModeCount; ++label) {
    names_.push_back(std::to_string(label));
  }
}

int ModeRegistry::system_mode(int label) const {
  if (label < 1 || label > kSystemModeCount) {
    throw std::invalid_argument("system mode label must be in 1..6, got " +
                                std::to_string(label));
  }
  return label - 1;
}

bool ModeRegistry::is_environment(int mode) const {
  if (mode < 0 || mode >= size()) {
    throw std::invalid_argument("mode index out of range: " + std::to_string(mode));
  }
  return mode >= kSystemModeCount;
}

const std::string& ModeRegistry::name(int mode) const {
  if (mode < 0 || mode >= size()) {
    throw std::invalid_argument("mode index out of range: " + std::to_string(mode));
  }
  return names_[mode];
}

int ModeRegistry::register_environment_mode(const std::string& element_id,
                                            const std::string& port) {
  auto key = std::make_pair(element_id, port);
  if (env_by_port_.count(key) != 0) {
    throw std::logic_error("environment mode already registered for element '" +
                           element_id + "' port '" + port + "'");
  }
  int index = size();
  names_.push_back(element_id + ":" + port);
  env_by_port_[key] = index;
  return index;
}

int ModeRegistry::find_environment_mode(const std::string& element_id,
                                        const std::string& port) const {
  auto it = env_by_port_.find(std::make_pair(element_id, port));
  return it == env_by_port_.end() ? -1 : it->second;
}

std::string ModeRegistry::fresh_element_id(const std::string& stem) {
  return stem + "@" + std::to_string(id_counter_++);
}

std::vector<int> ModeRegistry::system_modes() const {
  std::vector<int> out(kSystemModeCount);
  for (int i = 0; i < kSystemModeCount; ++i) out[i] = i;
  return out;
}

std::vector<int> ModeRegistry::environment_modes() const {
  std::vector<int> out;
  for (int i = kSystemModeCount; i < size(); ++i) out.push_back(i);
  return out;
}

// ------------------------------------------------------------- occupations

OccupationVector::OccupationVector(std::vector<std::uint8_t> counts)
    : counts_(std::move(counts)) {
  for (auto c : counts_) {
    if (c > kMaxPhotonsPerMode) {
      throw std::logic_error("photon count exceeds the cap of " +
                             std::to_string(kMaxPhotonsPerMode));
    }
  }
  strip();
}

void OccupationVector::strip() {
  while (!counts_.empty() && counts_.back() == 0) counts_.pop_back();
}

int OccupationVector::get(int mode) const {
  if (mode < 0) throw std::invalid_argument("negative mode index");
  return mode < static_cast<int>(counts_.size()) ? counts_[mode] : 0;
}

void OccupationVector::set(int mode, int count) {
  if (mode < 0) throw std::invalid_argument("negative mode index");
  if (count < 0 || count > kMaxPhotonsPerMode) {
    throw std::logic_error("photon count " + std::to_string(count) +
                           " outside 0.." + std::to_string(kMaxPhotonsPerMode));
  }
  if (mode >= static_cast<int>(counts_.size())) {
    if (count == 0) return;
    counts_.resize(mode + 1, 0);
  }
  counts_[mode] = static_cast<std::uint8_t>(count);
  strip();
}

int OccupationVector::total() const {
  int sum = 0;
  for (auto c : counts_) sum += c;
  return sum;
}

OccupationVector OccupationVector::restricted_to(const std::vector<int>& modes) const {
  std::vector<std::uint8_t> out;
  out.reserve(modes.size());
  for (int m : modes) out.push_back(static_cast<std::uint8_t>(get(m)));
  return OccupationVector(std::move(out));
}

bool OccupationVector::vanishes_outside(const std::vector<int>& modes) const {
  for (int i = 0; i < static_cast<int>(counts_.size()); ++i) {
    if (counts_[i] != 0 && std::find(modes.begin(), modes.end(), i) == modes.end()) {
      return false;
    }
  }
  return true;
}

std::string OccupationVector::digits(int width) const {
  std::string out;
  out.reserve(width);
  for (int i = 0; i < width; ++i) out.push_back(static_cast<char>('0' + get(i)));
  return out;
}

OccupationVector disjoint_union(const OccupationVector& a, const OccupationVector& b) {
  int width = std::max(a.counts_.size(), b.counts_.size());
  std::vector<std::uint8_t> out(width, 0);
  for (int i = 0; i < width; ++i) {
    int ca = a.get(i), cb = b.get(i);
    if (ca > 0 && cb > 0) {
      throw std::logic_error("disjoint_union: both operands occupy mode " +
                             std::to_string(i));
    }
    out[i] = static_cast<std::uint8_t>(ca + cb);
  }
  return OccupationVector(std::move(out));
}

// ------------------------------------------------------------------ states

FockStateVector::FockStateVector(std::shared_ptr<ModeRegistry> registry)
    : registry_(std::move(registry)) {
  if (!registry_) throw std::invalid_argument("null mode registry");
}

FockStateVector FockStateVector::vacuum(std::shared_ptr<ModeRegistry> registry) {
  FockStateVector s(std::move(registry));
  s.terms_[OccupationVector()] = cplx(1.0, 0.0);
  return s;
}

FockStateVector FockStateVector::basis_state(std::shared_ptr<ModeRegistry> registry,
                                             const OccupationVector& occ) {
  FockStateVector s(std::move(registry));
  s.terms_[occ] = cplx(1.0, 0.0);
  return s;
}

void FockStateVector::add(const OccupationVector& occ, cplx amplitude) {
  auto it = terms_.find(occ);
  if (it == terms_.end()) {
    if (amplitude != cplx(0.0, 0.0)) terms_.emplace(occ, amplitude);
    return;
  }
  it->second += amplitude;
  if (it->second == cplx(0.0, 0.0)) terms_.erase(it);
}

void FockStateVector::set_amplitude(const OccupationVector& occ, cplx amplitude) {
  if (amplitude == cplx(0.0, 0.0)) {
    terms_.erase(occ);
  } else {
    terms_[occ] = amplitude;
  }
}

cplx FockStateVector::amplitude(const OccupationVector& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

double FockStateVector::norm_sq() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
  return sum;
}

double FockStateVector::norm() const { return std::sqrt(norm_sq()); }

void FockStateVector::normalize() {
  double n = norm();
  if (n == 0.0) throw std::logic_error("cannot normalize the zero vector");
  scale(cplx(1.0 / n, 0.0));
}

void FockStateVector::scale(cplx factor) {
  if (factor == cplx(0.0, 0.0)) {
    terms_.clear();
    return;
  }
  for (auto& [occ, amp] : terms_) amp *= factor;
}

FockStateVector FockStateVector::filtered(
    const std::function<bool(const OccupationVector&)>& pred) const {
  FockStateVector out(registry_);
  for (const auto& [occ, amp] : terms_) {
    if (pred(occ)) out.terms_.emplace(occ, amp);
  }
  return out;
}

FockStateVector FockStateVector::with_registry(
    std::shared_ptr<ModeRegistry> registry) const {
  if (!registry) throw std::invalid_argument("null mode registry");
  if (registry->size() < registry_->size()) {
    throw std::invalid_argument("replacement registry describes fewer modes");
  }
  FockStateVector out(std::move(registry));
  out.terms_ = terms_;
  return out;
}

std::string FockStateVector::dump() const {
  std::string out;
  int width = registry_->size();
  for (const auto& [occ, amp] : terms_) {
    out += occ.digits(width);
    out += '\t';
    out += format_17(amp.real());
    out += '\t';
    out += format_17(amp.imag());
    out += '\n';
  }
  return out;
}

cplx inner_product(const FockStateVector& a, const FockStateVector& b) {
  if (a.registry() != b.registry()) {
    throw std::invalid_argument("inner_product: states use different registries");
  }
  // Iterate the smaller support.
  const auto& small = a.terms().size() <= b.terms().size() ? a : b;
  const auto& large = a.terms().size() <= b.terms().size() ? b : a;
  bool small_is_a = &small == &a;
  cplx sum(0.0, 0.0);
  for (const auto& [occ, amp] : small.terms()) {
    cplx other = large.amplitude(occ);
    sum += small_is_a ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return sum;
}

double overlap_up_to_global_phase(const FockStateVector& a, const FockStateVector& b) {
  return std::abs(inner_product(a, b));
}

FockStateVector product(const FockStateVector& a, const FockStateVector& b) {
  if (a.registry() != b.registry()) {
    throw std::invalid_argument("product: states use different registries");
  }
  FockStateVector out(a.registry());
  for (const auto& [oa, va] : a.terms()) {
    for (const auto& [ob, vb] : b.terms()) {
      out.add(disjoint_union(oa, ob), va * vb);
    }
  }
  return out;
}

// --------------------------------------------------------- density matrices

DensityMatrix::DensityMatrix(std::vector<int> modes, std::vector<OccupationVector> basis,
                             Eigen::MatrixXcd entries)
    : modes_(std::move(modes)), basis_(std::move(basis)), entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() ||
      entries_.rows() != static_cast<Eigen::Index>(basis_.size())) {
    throw std::invalid_argument("density matrix shape does not match its basis");
  }
  if (!std::is_sorted(basis_.begin(), basis_.end())) {
    throw std::invalid_argument("density matrix basis must be sorted");
  }
}

int DensityMatrix::basis_index(const OccupationVector& restricted) const {
  auto it = std::lower_bound(basis_.begin(), basis_.end(), restricted);
  if (it == basis_.end() || *it != restricted) return -1;
  return static_cast<int>(it - basis_.begin());
}

cplx DensityMatrix::entry(const OccupationVector& row, const OccupationVector& col) const {
  int i = basis_index(row);
  int j = basis_index(col);
  if (i < 0 || j < 0) return cplx(0.0, 0.0);
  return entries_(i, j);
}

double DensityMatrix::trace_real() const { return entries_.trace().real(); }

double DensityMatrix::hermiticity_defect() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  if (entries_.rows() == 0) return 0.0;
  Eigen::MatrixXcd sym = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix partial_trace(const FockStateVector& state, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const auto& reg = *state.registry();
  for (int m : keep) {
    if (m < 0 || m >= reg.size()) {
      throw std::invalid_argument("partial_trace: unregistered mode " + std::to_string(m));
    }
  }
  if (std::abs(state.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("partial_trace: input state is not normalized");
  }

  std::vector<int> traced;
  for (int m = 0; m < reg.size(); ++m) {
    if (std::find(keep.begin(), keep.end(), m) == keep.end()) traced.push_back(m);
  }

  // Group terms by the traced-out occupation; each group contributes the
  // outer product of its kept-mode vector.
  std::map<OccupationVector, std::vector<std::pair<OccupationVector, cplx>>> groups;
  std::map<OccupationVector, int> basis_order;
  for (const auto& [occ, amp] : state.terms()) {
    OccupationVector kept = occ.restricted_to(keep);
    OccupationVector rest = occ.restricted_to(traced);
    groups[rest].emplace_back(kept, amp);
    basis_order.emplace(kept, 0);
  }

  std::vector<OccupationVector> basis;
  basis.reserve(basis_order.size());
  int next = 0;
  for (auto& [occ, idx] : basis_order) {
    idx = next++;
    basis.push_back(occ);
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(next, next);
  for (const auto& [rest, members] : groups) {
    for (const auto& [occ_i, amp_i] : members) {
      int i = basis_order[occ_i];
      for (const auto& [occ_j, amp_j] : members) {
        int j = basis_order[occ_j];
        rho(i, j) += amp_i * std::conj(amp_j);
      }
    }
  }
  return DensityMatrix(keep, std::move(basis), std::move(rho));
}

double fidelity(const DensityMatrix& rho, const FockStateVector& target) {
  if (std::abs(target.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("fidelity: target state is not normalized");
  }
  Eigen::Index dim = rho.matrix().rows();
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(dim);
  for (const auto& [occ, amp] : target.terms()) {
    if (!occ.vanishes_outside(rho.modes())) {
      throw std::invalid_argument(
          "fidelity: target occupies modes outside the density matrix");
    }
    int i = rho.basis_index(occ.restricted_to(rho.modes()));
    if (i >= 0) t(i) = amp;
  }
  cplx value = (t.adjoint() * rho.matrix() * t)(0, 0);
  if (std::abs(value.imag()) > 1e-12) {
    throw std::logic_error("fidelity: imaginary residue " + format_17(value.imag()));
  }
  return value.real();
}

}  // namespace fewphoton
