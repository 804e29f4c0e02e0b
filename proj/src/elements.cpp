// elements.cpp

#include "fewphoton/elements.hpp"

#include <cmath>
#include <stdexcept>

namespace fewphoton {

namespace {

constexpr double kFactorial[] = {1.0, 1.0, 2.0, 6.0};
constexpr double kBinomial[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

cplx ipow(cplx z, int n) {
  cplx out(1.0, 0.0);
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

void check_mode(const FockStateVector& state, int mode) {
  if (mode < 0 || mode >= state.registry()->size()) {
    throw std::invalid_argument("unregistered mode index " + std::to_string(mode));
  }
}

// Applies the linear mode map a -> x a + y b, b -> u a + v b (a unitary
// 2x2 matrix on the creation operators) to every term. Photon number on the
// pair is conserved term by term.
void apply_two_mode_linear(FockStateVector& state, int ma, int mb, cplx x, cplx y,
                           cplx u, cplx v) {
  FockStateVector out(state.registry());
  for (const auto& [occ, amp] : state.terms()) {
    int n = occ.get(ma);
    int m = occ.get(mb);
    if (n + m == 0) {
      out.add(occ, amp);
      continue;
    }
    double base = 1.0 / std::sqrt(kFactorial[n] * kFactorial[m]);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= m; ++j) {
        int p = i + j;
        int q = (n - i) + (m - j);
        cplx coef = kBinomial[n][i] * kBinomial[m][j] * ipow(x, i) * ipow(y, n - i) *
                    ipow(u, j) * ipow(v, m - j);
        coef *= base * std::sqrt(kFactorial[p] * kFactorial[q]);
        OccupationVector dest = occ;
        dest.set(ma, p);
        dest.set(mb, q);
        out.add(dest, amp * coef);
      }
    }
  }
  state = std::move(out);
}

void check_survival(double s, const char* what) {
  if (!(s > 0.0) || s > 1.0) {
    throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
  }
}

// Registers the environment mode and couples `mode` to it; no-op at
// survival 1 so the ideal limit allocates no environment at all.
void lossy_port(FockStateVector& state, int mode, double survival,
                const std::string& element_id) {
  if (survival == 1.0) return;
  int env = state.registry()->register_environment_mode(
      element_id, state.registry()->name(mode));
  apply_loss_coupler(state, mode, survival, env);
}

std::string ensure_id(FockStateVector& state, const std::string& element_id,
                      const char* stem, double survival) {
  if (!element_id.empty()) return element_id;
  if (survival == 1.0) return element_id;  // never used
  return state.registry()->fresh_element_id(stem);
}

}  // namespace

void apply_loss_coupler(FockStateVector& state, int mode, double survival, int env_mode) {
  check_mode(state, mode);
  check_mode(state, env_mode);
  check_survival(survival, "survival probability");
  if (mode == env_mode) {
    throw std::invalid_argument("loss coupler needs two distinct modes");
  }
  for (const auto& [occ, amp] : state.terms()) {
    if (occ.get(env_mode) != 0) {
      throw std::logic_error("loss coupler: environment mode " +
                             state.registry()->name(env_mode) +
                             " is not in vacuum");
    }
  }
  double s = std::sqrt(survival);
  double l = std::sqrt(1.0 - survival);
  apply_two_mode_linear(state, mode, env_mode, s, l, -l, s);
}

void apply_beam_splitter(FockStateVector& state, int a, int b, const BeamSplitterParams& p,
                         const std::string& element_id) {
  check_mode(state, a);
  check_mode(state, b);
  if (a == b) throw std::invalid_argument("beam splitter needs two distinct modes");
  check_survival(p.kappa, "kappa");
  std::string id = ensure_id(state, element_id, "bs", p.kappa);
  lossy_port(state, a, p.kappa, id);
  lossy_port(state, b, p.kappa, id);
  cplx t(std::cos(p.theta), 0.0);
  cplx r(0.0, std::sin(p.theta));
  apply_two_mode_linear(state, a, b, t, r, r, t);
}

void apply_cross_kerr(FockStateVector& state, int a, int b, const CrossKerrParams& p,
                      const std::string& element_id) {
  check_mode(state, a);
  check_mode(state, b);
  if (a == b) throw std::invalid_argument("cross-Kerr medium needs two distinct modes");
  check_survival(p.eta, "eta");
  std::string id = ensure_id(state, element_id, "km", p.eta);
  lossy_port(state, a, p.eta, id);
  lossy_port(state, b, p.eta, id);
  FockStateVector out(state.registry());
  for (const auto& [occ, amp] : state.terms()) {
    double phase = -p.phi * occ.get(a) * occ.get(b);
    out.add(occ, amp * std::polar(1.0, phase));
  }
  state = std::move(out);
}

void apply_phase_plate(FockStateVector& state, int mode, const PhasePlateParams& p,
                       const std::string& element_id) {
  check_mode(state, mode);
  check_survival(p.varkappa, "varkappa");
  std::string id = ensure_id(state, element_id, "pp", p.varkappa);
  lossy_port(state, mode, p.varkappa, id);
  FockStateVector out(state.registry());
  for (const auto& [occ, amp] : state.terms()) {
    out.add(occ, amp * std::polar(1.0, p.phi * occ.get(mode)));
  }
  state = std::move(out);
}

void apply_detector_loss(FockStateVector& state, int mode, const DetectorParams& p,
                         const std::string& element_id) {
  check_mode(state, mode);
  check_survival(p.epsilon, "epsilon");
  std::string id = ensure_id(state, element_id, "det", p.epsilon);
  lossy_port(state, mode, p.epsilon, id);
}

std::vector<MeasurementOutcome> measure_modes(const FockStateVector& state,
                                              const std::vector<int>& modes) {
  if (modes.empty()) throw std::invalid_argument("measure_modes: empty mode list");
  for (int m : modes) check_mode(state, m);

  std::map<OccupationVector, FockStateVector> sectors;
  for (const auto& [occ, amp] : state.terms()) {
    OccupationVector pattern = occ.restricted_to(modes);
    auto it = sectors.find(pattern);
    if (it == sectors.end()) {
      it = sectors.emplace(pattern, FockStateVector(state.registry())).first;
    }
    it->second.add(occ, amp);
  }

  std::vector<MeasurementOutcome> out;
  out.reserve(sectors.size());
  for (auto& [pattern, sector] : sectors) {
    MeasurementOutcome o{pattern, sector.norm_sq(), std::move(sector)};
    o.conditional.normalize();
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace fewphoton
