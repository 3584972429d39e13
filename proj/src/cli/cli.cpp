// Copyright 2026 The collmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/json_writer.hpp"
#include "cli/manifest.hpp"
#include "collmeas/errors.hpp"
#include "collmeas/game.hpp"
#include "collmeas/tomography.hpp"

namespace collmeas::cli {

namespace {

// Options shared by every subcommand that builds a device.
struct DeviceFlags {
  double concurrence = 0.25;
  double splitting = 0.5;
  std::vector<double> imperfection;
  std::vector<double> rotation;

  void add_to(CLI::App &app, bool with_imperfection) {
    app.add_option("--concurrence", concurrence, "Concurrence of the projection (partial polarizer)")
        ->capture_default_str();
    app.add_option("--splitting", splitting, "Beamsplitter power transmission T")->capture_default_str();
    if (with_imperfection) {
      app.add_option("--imperfection", imperfection, "Residual unitary targets |<V|U|V>|^2,|<A|U|A>|^2")
          ->expected(2)
          ->delimiter(',');
    }
    app.add_option("--rotation", rotation, "Frame rotation as ZYZ Euler angles a,b,c (radians)")
        ->expected(3)
        ->delimiter(',');
  }

  TetrahedronFrame frame() const {
    if (rotation.empty()) return build_tetrahedron();
    return build_tetrahedron(rotation_from_euler_zyz(rotation[0], rotation[1], rotation[2]));
  }

  std::optional<ImperfectionTargets> targets() const {
    if (imperfection.empty()) return std::nullopt;
    return ImperfectionTargets{imperfection[0], imperfection[1]};
  }

  DeviceModel device(const MPBasis &basis) const {
    DeviceOptions opts;
    opts.concurrence = concurrence;
    opts.transmittance = splitting;
    if (auto t = targets()) opts.imperfection = fit_imperfection_unitary(*t);
    return make_device(basis, opts);
  }

  void describe(Json &j) const {
    j["concurrence"] = concurrence;
    j["splitting"] = splitting;
    j["imperfection"] = imperfection.empty() ? Json(nullptr) : Json(imperfection);
    j["rotation"] = rotation.empty() ? Json(nullptr) : Json(rotation);
  }
};

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::filesystem::path with_suffix(const std::string &base, const std::string &suffix) {
  return std::filesystem::path(base + suffix);
}

// ---------------------------------------------------------------- game

struct GameFlags {
  std::vector<std::string> kind;
  std::string strategy;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string out;
  DeviceFlags device;
};

StrategyKind parse_strategy(const std::string &s) {
  if (s == "collective") return StrategyKind::Collective;
  if (s == "locc") return StrategyKind::LOCC;
  if (s == "supp-ent") return StrategyKind::SuppressedEntanglement;
  throw DomainError("unknown strategy '" + s + "'");
}

FiniteSetPrior read_state_set(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read state set file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception &e) {
    throw DomainError("state set file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.contains("states") || !j["states"].is_array()) throw DomainError("state set file needs a 'states' array");
  std::vector<PureQubit> states;
  std::vector<double> weights;
  for (const auto &s : j["states"]) {
    states.push_back(state_from_angles(s.at("theta").get<double>(), s.at("phi").get<double>()));
    if (s.contains("weight")) weights.push_back(s["weight"].get<double>());
  }
  if (!weights.empty() && weights.size() != states.size()) {
    throw DomainError("either every state or no state carries a weight");
  }
  return FiniteSetPrior::make(std::move(states), std::move(weights));
}

std::optional<double> closed_form_benchmark(const std::string &kind, StrategyKind strategy) {
  if (kind == "genmp" && strategy == StrategyKind::Collective) return optimal_collective_fidelity(2);
  if (kind == "genmp" && strategy == StrategyKind::LOCC) return benchmarks::locc_uniform();
  if (kind == "tetramp" && strategy == StrategyKind::Collective) return benchmarks::kCollectiveTetrahedron;
  return std::nullopt;
}

int run_game_command(const GameFlags &flags, std::ostream &out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (flags.trials < 1) throw DomainError("--trials must be at least 1");
  const std::string &kind = flags.kind.at(0);
  Prior prior;
  if (kind == "genmp") {
    if (flags.kind.size() != 1) throw DomainError("--kind genmp takes no file");
    prior = UniformSpherePrior{};
  } else if (kind == "tetramp") {
    if (flags.kind.size() != 1) throw DomainError("--kind tetramp takes no file");
    prior = TetrahedronVerticesPrior{};
  } else if (kind == "set") {
    if (flags.kind.size() != 2) throw DomainError("--kind set needs a state-set file");
    prior = read_state_set(flags.kind[1]);
  } else {
    throw DomainError("unknown game kind '" + kind + "'");
  }
  const StrategyKind strategy = parse_strategy(flags.strategy);

  GameConfig config;
  config.prior = prior;
  config.strategy = strategy;
  config.trials = flags.trials;
  config.seed = flags.seed;
  config.frame = flags.device.frame();
  config.device = flags.device.device(build_mp_basis(config.frame));

  const GameResult result = run_game(config);
  const double expected = expected_fidelity(config.prior, strategy, config.device, config.frame);

  Json j;
  j["kind"] = kind;
  j["strategy"] = to_string(strategy);
  j["trials"] = flags.trials;
  j["seed"] = flags.seed;
  j["average_fidelity"] = result.average_fidelity;
  j["standard_error"] = result.standard_error;
  const auto bench = closed_form_benchmark(kind, strategy);
  j["theoretical_benchmark"] = bench ? Json(*bench) : Json(nullptr);
  j["expected_fidelity"] = expected;
  Json device_json;
  flags.device.describe(device_json);
  j["device"] = device_json;
  Json rows = Json::array();
  for (const PerStateResult &row : result.per_state) {
    const PureQubit c = row.state.canonical();
    rows.push_back({{"theta", c.theta()},
                    {"phi", c.phi()},
                    {"trials", row.trials},
                    {"freq", Json(std::vector<double>(row.frequencies.begin(), row.frequencies.end()))},
                    {"fidelity", row.fidelity}});
  }
  j["per_state"] = rows;

  RunManifest manifest;
  manifest.command = "game";
  manifest.seed = flags.seed;
  manifest.config = {{"kind", flags.kind}, {"strategy", flags.strategy}, {"trials", flags.trials},
                     {"seed", flags.seed}, {"out", flags.out}};
  flags.device.describe(manifest.config);

  const std::string body = dump_json(j);
  if (flags.out.empty()) {
    out << body;
  } else {
    manifest.outputs.emplace_back(flags.out, write_output(flags.out, body));
    manifest.duration_seconds = elapsed_since(t0);
    write_output(with_suffix(flags.out, ".manifest.json"), dump_json(manifest.to_json()));
  }
  return kExitOk;
}

// ---------------------------------------------------------- tomography

struct TomographyFlags {
  std::optional<double> theta;
  std::optional<double> phi;
  bool random_state = false;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> nens;
  std::uint32_t repeats = 1;
  std::string reference = "true";
  std::string out;
  DeviceFlags device;
};

std::string curve_csv(const std::vector<InfidelityPoint> &curve) {
  std::string s = "n_ens,mean_infidelity,stderr,repeats\n";
  for (const InfidelityPoint &p : curve) {
    s += std::to_string(p.n_ens) + "," + format_real(p.mean_infidelity) + "," +
         (p.standard_error ? format_real(*p.standard_error) : std::string()) + "," + std::to_string(p.repeats) + "\n";
  }
  return s;
}

int run_tomography_command(const TomographyFlags &flags, std::ostream &out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (flags.random_state == (flags.theta.has_value() || flags.phi.has_value())) {
    throw DomainError("give either --theta/--phi or --random-state");
  }
  if (!flags.random_state && !(flags.theta && flags.phi)) throw DomainError("--theta and --phi go together");
  if (flags.out.empty()) throw DomainError("--out prefix is required");

  TomographyConfig config;
  if (flags.random_state) {
    Rng rng = Rng::substream(flags.seed, {static_cast<std::uint64_t>(StreamTag::kTomography), ~0ULL});
    config.true_state = haar_random_qubit(rng);
  } else {
    config.true_state = state_from_angles(*flags.theta, *flags.phi);
  }
  config.ensemble_sizes = flags.nens;
  config.repeats = flags.repeats;
  config.seed = flags.seed;
  config.frame = flags.device.frame();
  config.device = flags.device.device(build_mp_basis(config.frame));
  if (flags.reference == "true") {
    config.reference = ReferenceMode::TrueState;
  } else if (flags.reference == "largest-n") {
    config.reference = ReferenceMode::LargestEnsemble;
  } else {
    throw DomainError("--reference must be 'true' or 'largest-n'");
  }
  config.validate();

  const std::vector<InfidelityPoint> curve = infidelity_curve(config);

  RunManifest manifest;
  manifest.command = "tomography";
  manifest.seed = flags.seed;
  // The manifest's config block is itself a valid --config file.
  manifest.config = {{"theta", flags.random_state ? Json(nullptr) : Json(*flags.theta)},
                     {"phi", flags.random_state ? Json(nullptr) : Json(*flags.phi)},
                     {"random_state", flags.random_state},
                     {"seed", flags.seed},
                     {"nens", flags.nens},
                     {"repeats", flags.repeats},
                     {"reference", flags.reference},
                     {"out", flags.out}};
  flags.device.describe(manifest.config);

  const auto curve_path = with_suffix(flags.out, "_curve.csv");
  manifest.outputs.emplace_back(curve_path.string(), write_output(curve_path, curve_csv(curve)));

  std::string gm = "n_ens,infidelity\n";
  for (std::uint64_t n : flags.nens) gm += std::to_string(n) + "," + format_real(gill_massar_reference(n)) + "\n";
  const auto gm_path = with_suffix(flags.out, "_gill_massar.csv");
  manifest.outputs.emplace_back(gm_path.string(), write_output(gm_path, gm));

  // The zero-by-construction reference point (and any other zero) is excluded.
  std::vector<std::pair<double, double>> points;
  for (const InfidelityPoint &p : curve) {
    if (p.mean_infidelity > 0.0) points.emplace_back(static_cast<double>(p.n_ens), p.mean_infidelity);
  }
  const auto fit_path = with_suffix(flags.out, "_fit.json");
  std::filesystem::remove(fit_path);
  if (points.size() >= 3) {
    const ScalingFit fit = fit_power_law(points);
    Json j;
    j["a"] = fit.a;
    j["b"] = fit.b;
    j["stderr_a"] = fit.stderr_a;
    j["stderr_b"] = fit.stderr_b;
    j["r_squared"] = fit.r_squared;
    j["points"] = points.size();
    manifest.outputs.emplace_back(fit_path.string(), write_output(fit_path, dump_json(j)));
  }
  manifest.duration_seconds = elapsed_since(t0);
  write_output(with_suffix(flags.out, "_manifest.json"), dump_json(manifest.to_json()));
  out << "wrote " << curve_path.string() << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- device

struct DeviceReportFlags {
  bool print_povm = false;
  bool json = false;
  std::string out;
  DeviceFlags device;
};

Json complex_list(const auto &values) {
  Json arr = Json::array();
  for (const cplx &c : values) arr.push_back(Json::array({c.real(), c.imag()}));
  return arr;
}

Json matrix_json(const auto &m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    std::vector<cplx> row;
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(complex_list(row));
  }
  return rows;
}

std::string complex_text(const cplx &c) { return "(" + format_real(c.real()) + ", " + format_real(c.imag()) + ")"; }

int run_device_command(const DeviceReportFlags &flags, std::ostream &out) {
  const auto t0 = std::chrono::steady_clock::now();
  const PartialPolarizer polarizer = polarizer_for_concurrence(flags.device.concurrence);
  if (!(flags.device.splitting >= 0.0 && flags.device.splitting <= 1.0)) {
    throw DomainError("--splitting must lie in [0, 1]");
  }
  const double eta = efficiency(flags.device.concurrence);
  const TetrahedronFrame frame = flags.device.frame();
  const MPBasis basis = build_mp_basis(frame);
  const double basis_concurrence = concurrence(basis.states[0]);

  std::optional<DeviceModel> device;
  std::optional<double> residual;
  if (std::abs(basis_concurrence - flags.device.concurrence) <= kChainedTol) {
    device = flags.device.device(basis);
    // Max deviation of P(setting i | MP_j) from eta * delta_ij at a balanced splitter.
    DeviceModel balanced = *device;
    balanced.transmittance = 0.5;
    double worst = 0.0;
    for (int i = 1; i <= 4; ++i)
      for (int k = 1; k <= 4; ++k)
        worst = std::max(worst, std::abs(device_coincidence_prob(balanced, i, basis.states[k - 1]) -
                                         (i == k ? eta : 0.0)));
    residual = worst;
  }

  std::string body;
  if (flags.json) {
    Json j;
    j["concurrence"] = flags.device.concurrence;
    j["splitting"] = flags.device.splitting;
    j["t_h"] = polarizer.t_h;
    j["t_v"] = polarizer.t_v;
    j["extinction_ratio"] = extinction_ratio(polarizer);
    j["efficiency"] = eta;
    Json states = Json::array();
    for (const TwoQubitState &s : basis.states) {
      const Vec4c &a = s.amplitudes();
      states.push_back(complex_list(std::vector<cplx>(a.data(), a.data() + 4)));
    }
    j["mp_basis"] = states;
    j["mp_concurrence"] = basis_concurrence;
    j["verification_residual"] = residual ? Json(*residual) : Json(nullptr);
    if (flags.print_povm && device) {
      Json settings = Json::array();
      for (int i = 1; i <= 4; ++i) {
        settings.push_back({{"setting", i},
                            {"arm1", matrix_json(device->settings[i - 1].arm1.matrix)},
                            {"arm2", matrix_json(device->settings[i - 1].arm2.matrix)},
                            {"effect", matrix_json(coincidence_operator(*device, i))}});
      }
      j["povm"] = settings;
    }
    body = dump_json(j);
  } else {
    std::ostringstream s;
    s << "concurrence        " << format_real(flags.device.concurrence) << "\n";
    s << "splitting (T)      " << format_real(flags.device.splitting) << "\n";
    s << "t_H                " << format_real(polarizer.t_h) << "\n";
    s << "t_V                " << format_real(polarizer.t_v) << "\n";
    s << "extinction ratio   " << format_real(extinction_ratio(polarizer)) << "\n";
    s << "efficiency eta     " << format_real(eta) << "\n";
    s << "MP basis (|00>, |01>, |10>, |11>), concurrence " << format_real(basis_concurrence) << "\n";
    for (int i = 0; i < 4; ++i) {
      s << "  MP_" << i + 1 << ":";
      for (int k = 0; k < 4; ++k) s << " " << complex_text(basis.states[i][k]);
      s << "\n";
    }
    if (residual) {
      s << "setting verification residual " << format_real(*residual) << "\n";
    } else {
      s << "setting verification residual n/a (concurrence differs from the MP basis)\n";
    }
    if (flags.print_povm && device) {
      for (int i = 1; i <= 4; ++i) {
        const Mat4c q = coincidence_operator(*device, i);
        s << "effect " << i << ":\n";
        for (int r = 0; r < 4; ++r) {
          s << " ";
          for (int c = 0; c < 4; ++c) s << " " << complex_text(q(r, c));
          s << "\n";
        }
      }
    }
    body = s.str();
  }

  out << body;
  if (!flags.out.empty()) {
    RunManifest manifest;
    manifest.command = "device";
    manifest.config = {{"print_povm", flags.print_povm}, {"json", flags.json}, {"out", flags.out}};
    flags.device.describe(manifest.config);
    manifest.outputs.emplace_back(flags.out, write_output(flags.out, body));
    manifest.duration_seconds = elapsed_since(t0);
    write_output(with_suffix(flags.out, ".manifest.json"), dump_json(manifest.to_json()));
  }
  return kExitOk;
}

// --------------------------------------------------------- config file

// Keys map to flags with '_' read as '-'. Turns {"trials": 10, "imperfection": [0.9, 0.8], "json": true} into flag
// tokens placed after the subcommand name. Keys also given on the command
// line are dropped, so explicit flags win.
std::vector<std::string> config_tokens(const std::string &path, const std::set<std::string> &explicit_flags) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception &e) {
    throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw CLI::ValidationError("--config", "top level must be an object");
  std::vector<std::string> tokens;
  auto scalar = [](const Json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) {
      std::ostringstream s;
      s.precision(17);
      s << v.get<double>();
      return s.str();
    }
    return v.dump();
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string flag = "--" + it.key();
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (explicit_flags.count(flag)) continue;
    const Json &v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) tokens.push_back(flag);
    } else if (v.is_array()) {
      tokens.push_back(flag);
      for (const auto &e : v) tokens.push_back(scalar(e));
    } else if (!v.is_null()) {
      tokens.push_back(flag);
      tokens.push_back(scalar(v));
    }
  }
  return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string> &args) {
  if (args.empty()) return args;
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ValidationError("--config", "needs a file");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty() || rest.empty()) return rest;
  std::set<std::string> explicit_flags;
  for (const std::string &a : rest) {
    if (a.rfind("--", 0) == 0) explicit_flags.insert(a.substr(0, a.find('=')));
  }
  std::vector<std::string> merged{rest.front()};
  for (auto &t : config_tokens(config_path, explicit_flags)) merged.push_back(std::move(t));
  merged.insert(merged.end(), rest.begin() + 1, rest.end());
  return merged;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Two-copy collective measurement simulator", "collmeas"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand");

  GameFlags game;
  CLI::App *game_cmd = app.add_subcommand("game", "Monte Carlo state-guessing game");
  game_cmd->add_option("--kind", game.kind, "genmp | tetramp | set <file>")->required()->expected(1, 2);
  game_cmd->add_option("--strategy", game.strategy, "collective | locc | supp-ent")->required();
  game_cmd->add_option("--trials", game.trials, "Number of trials")->required();
  game_cmd->add_option("--seed", game.seed, "Master seed")->capture_default_str();
  game_cmd->add_option("--out", game.out, "Result JSON path (stdout when omitted)");
  game.device.add_to(*game_cmd, true);

  TomographyFlags tomo;
  CLI::App *tomo_cmd = app.add_subcommand("tomography", "Infidelity scaling of collective-measurement tomography");
  tomo_cmd->add_option("--theta", tomo.theta, "Polar angle of the true state");
  tomo_cmd->add_option("--phi", tomo.phi, "Azimuth of the true state");
  tomo_cmd->add_flag("--random-state", tomo.random_state, "Draw the true state uniformly from the seed");
  tomo_cmd->add_option("--seed", tomo.seed, "Master seed")->capture_default_str();
  tomo_cmd->add_option("--nens", tomo.nens, "Comma list of even ensemble sizes (photons)")
      ->required()
      ->delimiter(',');
  tomo_cmd->add_option("--repeats", tomo.repeats, "Reconstructions per size")->capture_default_str();
  tomo_cmd->add_option("--reference", tomo.reference, "true | largest-n")->capture_default_str();
  tomo_cmd->add_option("--out", tomo.out, "Output path prefix")->required();
  tomo.device.add_to(*tomo_cmd, true);

  DeviceReportFlags dev;
  CLI::App *dev_cmd = app.add_subcommand("device", "Print derived device quantities");
  dev_cmd->add_flag("--print-povm", dev.print_povm, "Also print setting unitaries and effects");
  dev_cmd->add_flag("--json", dev.json, "Emit JSON instead of text");
  dev_cmd->add_option("--out", dev.out, "Also write the report to this file");
  dev.device.add_to(*dev_cmd, false);
  dev_cmd->get_option("--concurrence")->required();

  try {
    std::vector<std::string> expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*game_cmd) return run_game_command(game, out);
    if (*tomo_cmd) return run_tomography_command(tomo, out);
    return run_device_command(dev, out);
  } catch (const DomainError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError &e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DegenerateInputError &e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace collmeas::cli
