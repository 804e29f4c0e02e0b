// Command-line front end: run the teleportation protocol, compare the
// channel fidelity against its closed form, sweep the teleport fidelity
// over the input-state angles, and tabulate detection patterns for
// Bell-state inputs.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fewphoton/elements.hpp"
#include "fewphoton/fock.hpp"
#include "fewphoton/formulas.hpp"
#include "fewphoton/stations.hpp"

namespace {

using fewphoton::cplx;
using fewphoton::format_17;
using ordered_json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

struct Options {
  double gamma_pi = 0.25;
  double lambda_pi = 0.0;
  double gamma_raw = 0.0;   // used only when --gamma given
  double lambda_raw = 0.0;  // used only when --lambda given
  bool gamma_raw_set = false;
  bool lambda_raw_set = false;
  double kappa = 0.98;
  double eta = 0.98;
  double epsilon = 0.7;
  double varkappa = 1.0;
  int grid = 25;
  std::string format = "text";
  std::string out;
  std::string bell;  // optional outcome filter for `teleport`

  double gamma() const { return gamma_raw_set ? gamma_raw : gamma_pi * kPi; }
  double lambda() const { return lambda_raw_set ? lambda_raw : lambda_pi * kPi; }
};

void add_common_flags(CLI::App* cmd, Options& o) {
  auto* gp = cmd->add_option("--gamma-pi", o.gamma_pi,
                             "Input angle gamma in units of pi")
                 ->capture_default_str();
  auto* lp = cmd->add_option("--lambda-pi", o.lambda_pi,
                             "Input phase lambda in units of pi")
                 ->capture_default_str();
  auto* g = cmd->add_option("--gamma", o.gamma_raw, "Input angle gamma in radians");
  auto* l = cmd->add_option("--lambda", o.lambda_raw, "Input phase lambda in radians");
  g->excludes(gp);
  l->excludes(lp);
  g->each([&o](const std::string&) { o.gamma_raw_set = true; });
  l->each([&o](const std::string&) { o.lambda_raw_set = true; });

  cmd->add_option("--kappa", o.kappa, "Beam-splitter survival probability")
      ->capture_default_str();
  cmd->add_option("--eta", o.eta, "Cross-Kerr survival probability")
      ->capture_default_str();
  cmd->add_option("--epsilon", o.epsilon, "Detector efficiency")->capture_default_str();
  cmd->add_option("--varkappa", o.varkappa, "Phase-plate survival probability")
      ->capture_default_str();
  cmd->add_option("--grid", o.grid, "Sweep resolution per axis")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000).description("INT in [2..100000]"));
  cmd->add_option("--format", o.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "text-table", "csv", "json"}));
  cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
}

int validate_probability(const char* flag, double value) {
  if (!(value > 0.0) || value > 1.0) {
    std::cerr << "error: " << flag << " must be in (0,1], got " << value << "\n";
    return 2;
  }
  return 0;
}

int validate_options(const Options& o) {
  if (int rc = validate_probability("--kappa", o.kappa)) return rc;
  if (int rc = validate_probability("--eta", o.eta)) return rc;
  if (int rc = validate_probability("--epsilon", o.epsilon)) return rc;
  if (int rc = validate_probability("--varkappa", o.varkappa)) return rc;
  return 0;
}

int emit(const Options& o, const std::string& payload) {
  if (o.out.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) {
    std::cerr << "error: --out path '" << o.out << "' is not writable\n";
    return 1;
  }
  file << payload;
  if (!file.good()) {
    std::cerr << "error: --out path '" << o.out << "' failed during write\n";
    return 1;
  }
  return 0;
}

bool is_text(const std::string& format) {
  return format == "text" || format == "text-table";
}

std::string pad(std::string value, size_t width) {
  if (value.size() < width) value.append(width - value.size(), ' ');
  return value;
}

fewphoton::NoiseProfile noise_from(const Options& o) {
  fewphoton::NoiseProfile noise;
  noise.kappa = o.kappa;
  noise.eta = o.eta;
  noise.epsilon = o.epsilon;
  noise.varkappa = o.varkappa;
  return noise;
}

int cmd_teleport(const Options& o) {
  if (int rc = validate_options(o)) return rc;

  const auto spec = fewphoton::InputStateSpec::from_angles(o.gamma(), o.lambda());
  const auto noise = noise_from(o);
  const auto outcomes = fewphoton::run_protocol(spec, noise);

  auto registry = fewphoton::make_registry();
  const auto target = fewphoton::ideal_teleport_target(spec, registry);
  const std::vector<int> bob_modes = {registry->system_mode(5),
                                      registry->system_mode(6)};

  struct Row {
    std::string pattern;
    std::string bell;
    double probability;
    double fidelity;
  };
  std::vector<Row> rows;
  double acceptance = 0.0;
  for (const auto& outcome : outcomes) {
    if (outcome.classification == fewphoton::BellLabel::Rejected) continue;
    acceptance += outcome.probability;
    const std::string bell = fewphoton::to_string(outcome.classification);
    if (!o.bell.empty() && bell != o.bell) continue;
    const auto corrected = fewphoton::bob_correct(outcome, noise);
    const auto rho = fewphoton::partial_trace(corrected, bob_modes);
    rows.push_back(Row{outcome.pattern.digits(4), bell, outcome.probability,
                       fewphoton::fidelity(rho, target)});
  }

  std::string payload;
  if (o.format == "json") {
    ordered_json doc;
    doc["config"] = {{"command", "teleport"}, {"gamma", o.gamma()},
                     {"lambda", o.lambda()},  {"kappa", o.kappa},
                     {"eta", o.eta},          {"epsilon", o.epsilon},
                     {"varkappa", o.varkappa}};
    if (!o.bell.empty()) doc["config"]["bell"] = o.bell;
    ordered_json list = ordered_json::array();
    for (const auto& row : rows) {
      list.push_back({{"pattern", row.pattern},
                      {"bell", row.bell},
                      {"probability", row.probability},
                      {"fidelity", row.fidelity}});
    }
    doc["results"] = {{"outcomes", list}, {"acceptance_rate", acceptance}};
    payload = doc.dump(2) + "\n";
  } else if (o.format == "csv") {
    payload = "pattern,bell,probability,fidelity\n";
    for (const auto& row : rows) {
      payload += row.pattern + "," + row.bell + "," + format_17(row.probability) + "," +
                 format_17(row.fidelity) + "\n";
    }
    payload += "acceptance_rate,,," + format_17(acceptance) + "\n";
  } else {
    payload = pad("pattern", 9) + pad("bell", 10) + pad("probability", 26) + "fidelity\n";
    for (const auto& row : rows) {
      payload += pad(row.pattern, 9) + pad(row.bell, 10) +
                 pad(format_17(row.probability), 26) + format_17(row.fidelity) + "\n";
    }
    payload += "acceptance_rate " + format_17(acceptance) + "\n";
  }
  return emit(o, payload);
}

int cmd_channel_fidelity(const Options& o) {
  if (int rc = validate_options(o)) return rc;

  const auto noise = noise_from(o);
  const double closed = fewphoton::channel_fidelity(o.kappa, o.eta);
  const double simulated = fewphoton::simulated_channel_fidelity(noise);
  const double difference = std::abs(closed - simulated);

  std::string payload;
  if (o.format == "json") {
    ordered_json doc;
    doc["config"] = {{"command", "channel-fidelity"}, {"kappa", o.kappa}, {"eta", o.eta}};
    doc["results"] = {{"closed_form", closed},
                      {"simulated", simulated},
                      {"difference", difference}};
    payload = doc.dump(2) + "\n";
  } else if (o.format == "csv") {
    payload = "closed_form,simulated,difference\n" + format_17(closed) + "," +
              format_17(simulated) + "," + format_17(difference) + "\n";
  } else {
    payload = "closed_form  " + format_17(closed) + "\n" +
              "simulated    " + format_17(simulated) + "\n" +
              "difference   " + format_17(difference) + "\n";
  }
  return emit(o, payload);
}

int cmd_fig3(const Options& o) {
  if (int rc = validate_options(o)) return rc;

  struct Row {
    double gamma, lambda, fidelity;
  };
  std::vector<Row> rows;
  rows.reserve(static_cast<size_t>(o.grid) * o.grid);
  for (int i = 0; i < o.grid; ++i) {
    const double gamma = kPi * i / (o.grid - 1);
    for (int j = 0; j < o.grid; ++j) {
      const double lambda = 2.0 * kPi * j / o.grid;
      const cplx c1 = std::cos(gamma);
      const cplx c2 = std::sin(gamma) * std::polar(1.0, lambda);
      rows.push_back(Row{gamma, lambda,
                         fewphoton::teleport_fidelity(c1, c2, o.kappa, o.eta)});
    }
  }

  std::string payload;
  if (o.format == "json") {
    ordered_json doc;
    doc["config"] = {{"command", "fig3"},
                     {"kappa", o.kappa},
                     {"eta", o.eta},
                     {"grid", o.grid}};
    ordered_json list = ordered_json::array();
    for (const auto& row : rows) {
      list.push_back({{"gamma", row.gamma}, {"lambda", row.lambda}, {"F", row.fidelity}});
    }
    doc["results"] = {{"rows", list}};
    payload = doc.dump(2) + "\n";
  } else if (is_text(o.format)) {
    payload = pad("gamma", 26) + pad("lambda", 26) + "F\n";
    for (const auto& row : rows) {
      payload += pad(format_17(row.gamma), 26) + pad(format_17(row.lambda), 26) +
                 format_17(row.fidelity) + "\n";
    }
  } else {
    payload = "gamma,lambda,F\n";
    for (const auto& row : rows) {
      payload += format_17(row.gamma) + "," + format_17(row.lambda) + "," +
                 format_17(row.fidelity) + "\n";
    }
  }
  return emit(o, payload);
}

int cmd_bell_table(const Options& o) {
  if (int rc = validate_options(o)) return rc;

  const auto noise = noise_from(o);
  const std::vector<std::string> columns = {"0110", "1010", "1001", "0101"};
  const std::vector<fewphoton::BellLabel> inputs = {
      fewphoton::BellLabel::PsiPlus, fewphoton::BellLabel::PsiMinus,
      fewphoton::BellLabel::PhiPlus, fewphoton::BellLabel::PhiMinus};

  struct Row {
    std::string input;
    std::map<std::string, double> accepted;
    double rejected;
  };
  std::vector<Row> rows;
  for (const auto label : inputs) {
    auto registry = fewphoton::make_registry();
    auto state = fewphoton::bell_input(label, registry);
    state = fewphoton::alice_premeasure(state, noise);
    const std::vector<int> detector_modes = {
        registry->system_mode(1), registry->system_mode(2),
        registry->system_mode(3), registry->system_mode(4)};
    Row row{fewphoton::to_string(label), {}, 0.0};
    for (const auto& column : columns) row.accepted[column] = 0.0;
    for (const auto& outcome : fewphoton::measure_modes(state, detector_modes)) {
      const std::string digits = outcome.pattern.digits(4);
      if (row.accepted.count(digits) &&
          fewphoton::classify_pattern(outcome.pattern) != fewphoton::BellLabel::Rejected) {
        row.accepted[digits] = outcome.probability;
      } else {
        row.rejected += outcome.probability;
      }
    }
    rows.push_back(std::move(row));
  }

  std::string payload;
  if (o.format == "json") {
    ordered_json doc;
    doc["config"] = {{"command", "bell-table"},
                     {"kappa", o.kappa},
                     {"eta", o.eta},
                     {"epsilon", o.epsilon}};
    ordered_json table;
    for (const auto& row : rows) {
      ordered_json entry;
      for (const auto& column : columns) entry[column] = row.accepted.at(column);
      entry["rejected"] = row.rejected;
      table[row.input] = entry;
    }
    doc["results"] = table;
    payload = doc.dump(2) + "\n";
  } else if (o.format == "csv") {
    payload = "input,p0110,p1010,p1001,p0101,rejected\n";
    for (const auto& row : rows) {
      payload += row.input;
      for (const auto& column : columns) payload += "," + format_17(row.accepted.at(column));
      payload += "," + format_17(row.rejected) + "\n";
    }
  } else {
    payload = pad("input", 10);
    for (const auto& column : columns) payload += pad("p" + column, 26);
    payload += "rejected\n";
    for (const auto& row : rows) {
      payload += pad(row.input, 10);
      for (const auto& column : columns)
        payload += pad(format_17(row.accepted.at(column)), 26);
      payload += format_17(row.rejected) + "\n";
    }
  }
  return emit(o, payload);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Few-photon simulator of a lossy dual-rail entanglement-teleportation circuit"};
  app.require_subcommand(1);

  Options o;
  auto* teleport = app.add_subcommand(
      "teleport", "Run the protocol and report accepted outcomes with fidelities");
  add_common_flags(teleport, o);
  teleport->add_option("--bell", o.bell, "Only report outcomes with this label")
      ->check(CLI::IsMember({"PsiPlus", "PsiMinus", "PhiPlus", "PhiMinus"}));

  auto* channel = app.add_subcommand(
      "channel-fidelity", "Compare closed-form and simulated channel fidelity");
  add_common_flags(channel, o);

  auto* fig3 = app.add_subcommand(
      "fig3", "Sweep the teleport fidelity over the input angles gamma and lambda");
  add_common_flags(fig3, o);

  auto* bell_table = app.add_subcommand(
      "bell-table", "Detection-pattern probabilities for each Bell-state input");
  add_common_flags(bell_table, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*teleport) return cmd_teleport(o);
    if (*channel) return cmd_channel_fidelity(o);
    if (*fig3) return cmd_fig3(o);
    if (*bell_table) return cmd_bell_table(o);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
