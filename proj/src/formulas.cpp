#include "fewphoton/formulas.hpp"

#include <cmath>
#include <stdexcept>

namespace fewphoton {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_params(double kappa, double eta) {
  if (!(kappa > 0.0) || kappa > 1.0) throw std::invalid_argument("kappa must be in (0,1]");
  if (!(eta > 0.0) || eta > 1.0) throw std::invalid_argument("eta must be in (0,1]");
}

}  // namespace

double channel_fidelity(double kappa, double eta) {
  check_params(kappa, eta);
  const double xi = kappa / 2.0;
  const double s = std::sqrt(eta);
  return 0.5 * xi * xi * xi * (1.0 + 4.0 * s * (1.0 + eta) + eta * (6.0 + eta));
}

TeleportCoefficients teleport_coefficients(cplx c1, cplx c2, double kappa, double eta) {
  check_params(kappa, eta);
  const double xi = kappa / 2.0;
  const double s = std::sqrt(eta);
  const double xi2 = xi * xi;
  const double xi3 = xi2 * xi;
  const double xi52 = xi2 * std::sqrt(xi);

  const double P = 1.0 + s + 3.0 * eta - eta * s;
  const double Q = (1.0 - s) * (1.0 - s) * (1.0 + s);
  const double R = 1.0 - 3.0 * s - eta - eta * s;

  TeleportCoefficients k;
  k.a = xi3 * (s * P * c1 + kI * Q * c2);
  k.b = xi3 * (kI * s * Q * c1 - R * c2);
  k.c = xi2 * (-kI * s * (1.0 + eta) * c1 + (1.0 - 2.0 * s - eta) * c2);
  k.d = xi52 * (-kI * eta * (1.0 + 2.0 * s - eta) * c1 + s * (1.0 + eta) * c2);
  k.e = std::sqrt(xi) * k.c;
  k.f = kI * std::sqrt(xi) * k.c;
  return k;
}

TeleportCoefficients teleport_coefficients_tabulated(cplx c1, cplx c2, double kappa,
                                                     double eta) {
  check_params(kappa, eta);
  const double xi = kappa / 2.0;
  const double s = std::sqrt(eta);
  const double xi2 = xi * xi;
  const double xi3 = xi2 * xi;
  const double xi52 = xi2 * std::sqrt(xi);

  TeleportCoefficients k;
  k.a = xi3 * (-s * (1.0 + s + 3.0 * eta - eta * s) * c1 +
               kI * (1.0 - s - eta + eta * s) * c2);
  k.b = xi3 * (kI * s * (1.0 - s - eta + eta * s) * c1 +
               (1.0 - 3.0 * s - eta - eta * s) * c2);
  k.c = xi2 * (kI * s * (1.0 + eta) * c1 + (1.0 - 2.0 * s - eta) * c2);
  k.d = xi52 * (-eta * (1.0 + 2.0 * s - eta) * c1 + kI * s * (1.0 + eta) * c2);
  k.e = xi52 * (-s * (1.0 + 0.5 * s - s * (1.0 - s) + eta) * c1 +
                kI * (1.0 - 1.5 * s - s * (1.0 + s) - 0.5 * eta) * c2);
  k.f = xi52 * (kI * s * (1.0 - eta) * c1 + (1.0 - 2.0 * s - eta) * c2);
  return k;
}

double normalization(const TeleportCoefficients& k, double kappa, double eta) {
  check_params(kappa, eta);
  const double xi = kappa / 2.0;
  const double inv_n2 = std::norm(k.a) + std::norm(k.b) +
                        (1.0 - 2.0 * xi) * (std::norm(k.c) + std::norm(k.d) + std::norm(k.f)) +
                        std::norm(k.e) * (1.0 - eta);
  return 1.0 / std::sqrt(inv_n2);
}

double teleport_fidelity(cplx c1, cplx c2, double kappa, double eta) {
  const TeleportCoefficients k = teleport_coefficients(c1, c2, kappa, eta);
  const double n = normalization(k, kappa, eta);
  return n * n * std::norm(k.a * std::conj(c1) + k.b * std::conj(c2));
}

double detection_probability_0110(cplx c1, cplx c2, double kappa, double eta,
                                  double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("epsilon must be in (0,1]");
  const TeleportCoefficients k = teleport_coefficients(c1, c2, kappa, eta);
  const double n = normalization(k, kappa, eta);
  return epsilon * epsilon / (n * n);
}

std::map<std::string, cplx> channel_two_photon_amplitudes(double kappa, double eta) {
  check_params(kappa, eta);
  const double xi = kappa / 2.0;
  const double s = std::sqrt(eta);
  const double g = xi * std::sqrt(xi);
  return {
      {"1010", -kI * g * (1.0 - s)},
      {"0110", cplx(-g * s * (1.0 + s), 0.0)},
      {"1001", cplx(-g * (1.0 + s), 0.0)},
      {"0101", kI * g * s * (1.0 - s)},
  };
}

std::map<std::string, cplx> channel_two_photon_amplitudes_tabulated(double kappa,
                                                                    double eta) {
  check_params(kappa, eta);
  const double xi = kappa / 2.0;
  const double s = std::sqrt(eta);
  const double g = xi * std::sqrt(xi);
  return {
      {"1010", cplx(g * (1.0 - s), 0.0)},
      {"0110", kI * g * s * (1.0 + s)},
      {"1001", kI * g * (1.0 + s)},
      {"0101", cplx(-g * s * (1.0 - s), 0.0)},
  };
}

std::map<std::string, cplx> bell_station_response_tabulated(bool plus, double kappa,
                                                            double eta) {
  check_params(kappa, eta);
  const double xi = kappa / 2.0;
  const double s = std::sqrt(eta);
  const double g = xi * std::sqrt(xi) / std::sqrt(2.0);
  const double pm = plus ? 1.0 : -1.0;
  return {
      {"1010", cplx(g * ((s + eta) - pm * (s + 1.0)), 0.0)},
      {"0110", kI * g * ((s + eta) + pm * (s + 1.0))},
      {"0101", cplx(g * (-(s - eta) + pm * (s - 1.0)), 0.0)},
      {"1001", kI * g * ((s - eta) + pm * (s - 1.0))},
  };
}

std::map<std::string, cplx> bell_station_response(bool plus, double kappa, double eta) {
  // Same branches in the simulator's frame: multiply by i (-1)^{n2+n3}.
  std::map<std::string, cplx> out;
  for (const auto& [pattern, amp] : bell_station_response_tabulated(plus, kappa, eta)) {
    const int n2 = pattern[1] - '0';
    const int n3 = pattern[2] - '0';
    const double sign = ((n2 + n3) % 2 == 0) ? 1.0 : -1.0;
    out[pattern] = kI * sign * amp;
  }
  return out;
}

ChannelRejectedSectors channel_rejected_sectors(const NoiseProfile& noise) {
  noise.validate();
  auto registry = make_registry();
  FockStateVector channel = build_quantum_channel(noise, registry);

  const int m3 = registry->system_mode(3);
  const int m4 = registry->system_mode(4);
  FockStateVector model = channel.filtered([&](const OccupationVector& occ) {
    return occ.get(m3) == 0 && occ.get(m4) == 0;
  });

  // Hand-tabulated expansion of the same sector, reconstructed on the
  // registry the channel populated so the two can be compared term by term.
  const double xi = noise.kappa / 2.0;
  const double s = std::sqrt(noise.eta);
  const double xi2 = xi * xi;
  const double rt_gamma = std::sqrt(1.0 - noise.kappa);
  const double rt_lambda = std::sqrt(1.0 - noise.eta);

  const int e14 = registry->find_environment_mode("BS1", "4");
  const int e25 = registry->find_environment_mode("BS2", "5");
  const int e35 = registry->find_environment_mode("BS3", "5");
  const int e36 = registry->find_environment_mode("BS3", "6");
  const int k4 = registry->find_environment_mode("KM1", "4");
  const int k5 = registry->find_environment_mode("KM1", "5");
  (void)e14;  // the tabulated expansion omits this marker; that is its defect

  const int m5 = registry->system_mode(5);
  const int m6 = registry->system_mode(6);

  FockStateVector tabulated(registry);
  auto add_term = [&](cplx amp, std::initializer_list<std::pair<int, int>> photons) {
    if (amp == cplx{}) return;
    std::vector<uint8_t> occ;
    for (const auto& [mode, n] : photons) {
      if (mode < 0) return;  // bath absent (lossless): the term carries zero weight
      if (mode >= static_cast<int>(occ.size())) occ.resize(mode + 1, 0);
      occ[mode] = static_cast<uint8_t>(n);
    }
    tabulated.add(OccupationVector(occ), amp);
  };

  // One photon left on mode 5 or 6.
  add_term(xi2 * ((1.0 - s) + cplx(0.0, xi)), {{m5, 1}});
  add_term(xi2 * (-kI * xi * s) * rt_lambda, {{m5, 1}, {k4, 1}});
  add_term(kI * xi2 * ((1.0 + s) + xi), {{m6, 1}});
  add_term(kI * xi2 * (xi * s) * rt_lambda, {{m6, 1}, {k4, 1}});

  // System vacuum, one bath excitation.
  add_term(cplx(rt_gamma, 0.0), {{e25, 1}});
  add_term(kI * xi * s * rt_gamma, {{e35, 1}});
  add_term(kI * xi * rt_lambda, {{k5, 1}});
  add_term(cplx(xi * rt_gamma, 0.0), {{e36, 1}});

  // System vacuum, the same bath excitations paired with the KM1:4 marker.
  add_term(kI * xi * rt_gamma * rt_lambda, {{e25, 1}, {k4, 1}});
  add_term(kI * xi * (kI * xi * s) * rt_gamma * rt_lambda, {{e35, 1}, {k4, 1}});
  add_term(kI * xi * (kI * xi) * rt_lambda * rt_lambda, {{k5, 1}, {k4, 1}});
  add_term(kI * xi * xi * rt_gamma * rt_lambda, {{e36, 1}, {k4, 1}});

  return ChannelRejectedSectors{std::move(model), std::move(tabulated)};
}

}  // namespace fewphoton
