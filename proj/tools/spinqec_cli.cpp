#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "spinqec/circuit.hpp"
#include "spinqec/device.hpp"
#include "spinqec/error_table.hpp"
#include "spinqec/harness.hpp"
#include "spinqec/lattice.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinqec;

namespace {

struct ScanArg {
  ScanVariable variable;
  double start, stop, step;
};

ScanArg parse_scan(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw CLI::ValidationError("--scan", "expected VAR=START:STOP:STEP");
  ScanArg s{};
  try {
    s.variable = scan_variable_from_string(text.substr(0, eq));
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--scan", e.what());
  }
  std::stringstream rest(text.substr(eq + 1));
  std::string a, b, c;
  if (!std::getline(rest, a, ':') || !std::getline(rest, b, ':') || !std::getline(rest, c, ':'))
    throw CLI::ValidationError("--scan", "expected VAR=START:STOP:STEP");
  try {
    s.start = std::stod(a);
    s.stop = std::stod(b);
    s.step = std::stod(c);
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--scan", "malformed number");
  }
  return s;
}

// Replaces "--config FILE" with the flags it lists. Lines are "key = value"
// with '#' comments; flags given on the command line win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> out;
  std::vector<std::pair<std::string, std::string>> from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config", 1, 0);
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      const auto trim = [](std::string t) {
        const auto b = t.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        return t.substr(b, t.find_last_not_of(" \t\r") - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw CLI::ConversionError(fmt::format("{}:{}: expected key = value", path, n));
      std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      std::replace(key.begin(), key.end(), '_', '-');
      from_file.emplace_back("--" + key, value);
    }
  }
  for (const auto& [flag, value] : from_file) {
    const bool given = std::any_of(out.begin(), out.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given || value == "false") continue;
    out.push_back(flag);
    if (value != "true") out.push_back(value);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

fs::path sibling(const fs::path& csv, const std::string& suffix) {
  fs::path p = csv;
  p.replace_extension();
  return fs::path(p.string() + suffix);
}

const char* regime_name(GateRegime r) {
  switch (r) {
    case GateRegime::sqrtswap: return "sqrtswap (J << omega)";
    case GateRegime::s_gate: return "s (J >> omega)";
    default: return "intermediate";
  }
}

std::string hz(double v) {
  const double a = std::abs(v);
  if (a >= 1e9) return fmt::format("{:.6g} GHz", v / 1e9);
  if (a >= 1e6) return fmt::format("{:.6g} MHz", v / 1e6);
  if (a >= 1e3) return fmt::format("{:.6g} kHz", v / 1e3);
  return fmt::format("{:.6g} Hz", v);
}

std::string seconds(double v) {
  const double a = std::abs(v);
  if (a >= 1) return fmt::format("{:.6g} s", v);
  if (a >= 1e-3) return fmt::format("{:.6g} ms", v * 1e3);
  if (a >= 1e-6) return fmt::format("{:.6g} us", v * 1e6);
  return fmt::format("{:.6g} ns", v * 1e9);
}

void print_estimate(const ThresholdEstimate& est) {
  std::string pairs;
  for (const auto& p : est.pairs)
    pairs += p.found ? fmt::format(" {}/{}={:.5g}", p.d_small, p.d_large, p.value)
                     : fmt::format(" {}/{}=none", p.d_small, p.d_large);
  if (est.crossing_found)
    fmt::print("threshold {} = {:.5g} +- {:.2g} ({}; pairs:{})\n", to_string(est.variable), est.value,
               est.half_width, to_string(est.normalisation), pairs);
  else
    fmt::print("threshold {}: no crossing in grid ({}; pairs:{})\n", to_string(est.variable),
               to_string(est.normalisation), pairs);
  if (!est.diagnostics.empty()) fmt::print("  {}\n", est.diagnostics);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface-code threshold simulator for spin qubits with mediated exchange", "spinqec"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a threshold sweep and write CSV, JSON results and a manifest");
  std::string config_help;
  sim->add_option("--config", config_help, "Flat key = value file; keys are flag names without dashes");
  std::vector<int> distances{3, 5, 7};
  std::string gate = "s", scan_text, leak_model = "worst_case", out_path, json_path, manifest_path;
  std::optional<double> p2_fixed, pleak_fixed;
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 1;
  int workers = 0;
  bool quiet = false;
  sim->add_option("--distances", distances, "Code distances")->delimiter(',')->check(CLI::PositiveNumber);
  sim->add_option("--gate", gate, "Two-qubit gate flavour")->check(CLI::IsMember({"s", "sqrtswap"}));
  sim->add_option("--scan", scan_text, "Scanned rate and grid, e.g. p2=0.004:0.012:0.0005")->required();
  sim->add_option("--p2", p2_fixed, "Two-qubit gate error when scanning p_leak");
  sim->add_option("--pleak", pleak_fixed, "Charge-leakage probability when scanning p2");
  sim->add_option("--leak-model", leak_model, "Leakage table")->check(CLI::IsMember({"worst_case", "refined"}));
  sim->add_option("--shots", shots, "Shots per point (default 20000 for d <= 5, 10000 above)");
  sim->add_option("--seed", seed, "Master seed");
  sim->add_option("--workers", workers, "Worker threads (SPINQEC_WORKERS overrides)");
  sim->add_option("--out", out_path, "CSV output path")->required();
  sim->add_option("--json", json_path, "Results JSON path (default: next to the CSV)");
  sim->add_option("--manifest", manifest_path, "Manifest path (default: next to the CSV)");
  sim->add_flag("--quiet", quiet, "No progress lines");

  // threshold
  auto* thr = app.add_subcommand("threshold", "Fit the threshold crossing from a sweep CSV");
  thr->add_option("--config", config_help, "Flat key = value file");
  std::string in_path, thr_json, norm_text = "per_round";
  thr->add_option("--in", in_path, "Sweep CSV")->required()->check(CLI::ExistingFile);
  thr->add_option("--normalisation", norm_text, "Compare per-round or per-shot rates")
      ->check(CLI::IsMember({"per_round", "per_shot"}));
  thr->add_option("--json", thr_json, "Write the estimate as JSON");

  // device
  auto* dev = app.add_subcommand("device", "Exchange strengths, residual ratios and cycle budget from dot parameters");
  dev->add_option("--config", config_help, "Flat key = value file");
  double t_tun = 0, delta_on = 0, delta_m = 0;
  std::optional<double> delta_off, omega, t_j, t_z, t_h, t2, u_charging, elapsed;
  dev->add_option("--t", t_tun, "Tunnelling energy (Hz)")->required()->check(CLI::PositiveNumber);
  dev->add_option("--delta-on", delta_on, "Side-dot excitation energy with the gate on (Hz)")->required()->check(CLI::PositiveNumber);
  dev->add_option("--delta-m", delta_m, "Mediator excitation energy (Hz)")->required()->check(CLI::PositiveNumber);
  dev->add_option("--delta-off", delta_off, "Side-dot excitation energy with the gate off (Hz)")->check(CLI::PositiveNumber);
  dev->add_option("--omega", omega, "Zeeman splitting difference (Hz)");
  dev->add_option("--t-j", t_j, "Exchange gate time T_J (s); enables the cycle budget")->check(CLI::NonNegativeNumber);
  dev->add_option("--t-z", t_z, "Explicit Z gate time (s)")->check(CLI::NonNegativeNumber);
  dev->add_option("--t-h", t_h, "Hadamard / sqrt(Y) time (s)")->check(CLI::NonNegativeNumber);
  dev->add_option("--t2", t2, "Coherence time T2 (s)")->check(CLI::PositiveNumber);
  dev->add_option("--u", u_charging, "On-site charging energy U (Hz) for the leakage oscillation")->check(CLI::PositiveNumber);
  dev->add_option("--elapsed", elapsed, "Evolution time for the leakage oscillation (s)")->check(CLI::NonNegativeNumber);

  // verify
  auto* ver = app.add_subcommand("verify", "Run the gate-identity and error-channel checks");
  double tol = 1e-10;
  ver->add_option("--tol", tol, "Tolerance for dense comparisons");

  // lattice
  auto* lat = app.add_subcommand("lattice", "Dump lattice geometry as JSON");
  int lat_d = 3;
  std::string lat_out;
  lat->add_option("--distance,-d", lat_d, "Code distance")->required();
  lat->add_option("--out", lat_out, "Output path (stdout when absent)");

  // table
  auto* tab = app.add_subcommand("table", "Compile and dump one check's error table as JSON");
  std::string tab_basis = "z", tab_gate = "s", tab_leak = "worst_case", tab_out;
  double tab_p2 = 0, tab_pleak = 0;
  unsigned tab_mask = kAllData;
  tab->add_option("--basis", tab_basis, "Check type")->check(CLI::IsMember({"x", "z"}));
  tab->add_option("--gate", tab_gate, "Two-qubit gate flavour")->check(CLI::IsMember({"s", "sqrtswap"}));
  tab->add_option("--p2", tab_p2, "Two-qubit gate error")->check(CLI::Range(0.0, 0.25));
  tab->add_option("--pleak", tab_pleak, "Charge-leakage probability")->check(CLI::Range(0.0, 0.25));
  tab->add_option("--leak-model", tab_leak, "Leakage table")->check(CLI::IsMember({"worst_case", "refined"}));
  tab->add_option("--mask", tab_mask, "Present data slots as a 4-bit mask")->check(CLI::Range(1u, 15u));
  tab->add_option("--out", tab_out, "Output path (stdout when absent)");

  app.failure_message(CLI::FailureMessage::help);
  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) {
      const ScanArg scan = parse_scan(scan_text);
      SweepSpec spec;
      spec.distances = distances;
      spec.scan_variable = scan.variable;
      spec.start = scan.start;
      spec.stop = scan.stop;
      spec.step = scan.step;
      if (scan.variable == ScanVariable::p2) {
        if (p2_fixed) throw CLI::ValidationError("--p2", "cannot fix the scanned rate");
        spec.fixed = pleak_fixed.value_or(0.0);
      } else {
        if (pleak_fixed) throw CLI::ValidationError("--pleak", "cannot fix the scanned rate");
        spec.fixed = p2_fixed.value_or(0.0);
      }
      spec.flavour = gate_flavour_from_string(gate);
      spec.leak_model = leak_model_from_string(leak_model);
      if (shots)
        for (int d : distances) spec.shots[d] = *shots;
      spec.seed = seed;
      spec.validate();
      const int n_workers = resolve_workers(workers);

      const auto rows = run_sweep(spec, n_workers, [&](const SweepRow& r) {
        if (!quiet)
          fmt::print(stderr, "d={} p2={:.6g} p_leak={:.6g} failures={}/{} p_logical={:.6g}\n", r.d, r.p2,
                     r.p_leak, r.failures, r.shots, r.p_logical);
      });
      const fs::path csv(out_path);
      write_text(csv, format_csv(rows));

      json results;
      results["rows"] = json::array();
      for (const auto& r : rows)
        results["rows"].push_back({{"d", r.d}, {"p2", r.p2}, {"p_leak", r.p_leak}, {"shots", r.shots},
                                   {"failures", r.failures}, {"p_logical", r.p_logical}, {"stderr", r.stderr_}});
      std::set<int> unique_d(distances.begin(), distances.end());
      if (unique_d.size() >= 3 && spec.grid().size() >= 5) {
        for (auto norm : {RateNormalisation::per_round, RateNormalisation::per_shot}) {
          const auto est = fit_threshold(rows, norm);
          results["threshold"][to_string(norm)] = est.to_json();
          if (norm == RateNormalisation::per_round && !quiet) print_estimate(est);
        }
      }
      write_text(json_path.empty() ? sibling(csv, ".json") : fs::path(json_path), results.dump(2) + "\n");

      json manifest;
      manifest["tool"] = "spinqec";
      manifest["version"] = kVersion;
      manifest["command"] = "simulate";
      manifest["argv"] = std::vector<std::string>(argv, argv + argc);
      manifest["sweep"] = spec.to_json();
      const auto preset = ErrorModelParams::standard(1.0, 0.0, spec.flavour, spec.leak_model);
      manifest["error_model"] = {{"p1_over_p2", preset.p1}, {"p_readout_over_p2", preset.p_readout},
                                 {"rounds", "d noisy rounds then one perfect round"},
                                 {"decoder", "exact minimum-weight perfect matching, unit space/time/diagonal edges"}};
      manifest["workers"] = n_workers;
      manifest["outputs"] = {{"csv", csv.string()},
                             {"json", (json_path.empty() ? sibling(csv, ".json") : fs::path(json_path)).string()}};
      manifest["csv_columns"] = kCsvHeader;
      write_text(manifest_path.empty() ? sibling(csv, ".manifest.json") : fs::path(manifest_path),
                 manifest.dump(2) + "\n");
      return 0;
    }

    if (*thr) {
      std::ifstream in(in_path);
      const auto rows = parse_csv(in);
      const auto est = fit_threshold(rows, rate_normalisation_from_string(norm_text));
      print_estimate(est);
      if (!thr_json.empty()) write_text(thr_json, est.to_json().dump(2) + "\n");
      return 0;
    }

    if (*dev) {
      const double j_on = mediated_exchange_estimate(t_tun, delta_on, delta_m);
      DeviceParams dp;
      dp.t_l1 = dp.t_l2 = dp.t_r1 = dp.t_r2 = t_tun;
      dp.delta_l = dp.delta_r = delta_on;
      dp.delta_m = delta_m;
      fmt::print("J_on = {}\n", hz(j_on));
      fmt::print("J_on (full expression, equal real amplitudes) = {}\n", hz(mediated_exchange_full(dp)));
      if (delta_off) {
        const double j_off = mediated_exchange_estimate(t_tun, *delta_off, delta_m);
        fmt::print("J_off = {}\n", hz(j_off));
        fmt::print("J_off/J_on = {:.6g}\n", j_off / j_on);
        fmt::print("residual ratio mediated = {:.6g}\n", residual_exchange_ratio(delta_on, *delta_off, ExchangeKind::mediated));
        fmt::print("residual ratio direct = {:.6g}\n", residual_exchange_ratio(delta_on, *delta_off, ExchangeKind::direct));
      }
      if (omega) fmt::print("regime = {}\n", regime_name(classify_regime(*omega, j_on)));
      if (t_j) {
        TimingParams tp;
        tp.t_j = *t_j;
        tp.t_z = t_z.value_or(0.0);
        tp.t_h = t_h.value_or(0.0);
        const double cs = cycle_time(GateFlavour::s_gate, tp);
        const double cw = cycle_time(GateFlavour::sqrtswap, tp);
        fmt::print("cycle time s = {}\n", seconds(cs));
        fmt::print("cycle time sqrtswap = {}\n", seconds(cw));
        if (t2) {
          fmt::print("dephasing per cycle s = {:.4g}\n", dephasing_per_cycle(cs, *t2));
          fmt::print("dephasing per cycle sqrtswap = {:.4g}\n", dephasing_per_cycle(cw, *t2));
        }
      }
      if (u_charging) {
        const double el = elapsed.value_or(M_PI / *u_charging);
        fmt::print("leakage oscillation at {} = {:.6g}\n", seconds(el), leakage_oscillation(t_tun, *u_charging, el));
      }
      return 0;
    }

    if (*ver) {
      bool ok = true;
      for (const auto& c : verify_cz_decompositions(tol)) {
        fmt::print("{} {} (max deviation {:.3g})\n", c.passed ? "PASS" : "FAIL", c.name, c.max_deviation);
        ok = ok && c.passed;
      }
      for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap})
        for (auto b : {CheckBasis::z, CheckBasis::x}) {
          bool passed = true;
          std::string what;
          try {
            const auto c = build_check_circuit(b, f);
            what = fmt::format("{} explicit Z", c.explicit_z_count());
          } catch (const std::exception& e) {
            passed = false;
            what = e.what();
          }
          fmt::print("{} virtual-Z compilation {} {} ({})\n", passed ? "PASS" : "FAIL", to_string(f), to_string(b), what);
          ok = ok && passed;
        }
      const double eps = 0.1;
      {
        const auto u = fluctuation_channel(gates::swap(), eps);
        const bool passed = u.terms.size() == 2 && std::abs(u.terms[0].second - (1 - eps * eps)) < 1e-15 &&
                            std::abs(u.terms[1].second - eps * eps) < 1e-15 &&
                            dense_equal_up_to_phase(u.terms[1].first, gates::swap(), tol);
        fmt::print("{} fluctuation channel SWAP unitary form {{I: {:.4g}, SWAP: {:.4g}}}\n", passed ? "PASS" : "FAIL",
                   u.terms[0].second, u.terms.size() > 1 ? u.terms[1].second : 0.0);
        ok = ok && passed;
      }
      const auto sw = pauli_twirl(fluctuation_channel(gates::swap(), eps));
      const auto zz = fluctuation_channel(std::vector<std::pair<PauliString, double>>{{PauliString::from_string("ZZ"), 1.0}}, eps);
      for (const auto& [name, ch] : {std::pair<const char*, PauliChannel>{"twirled SWAP error", sw}, {"ZZ error", zz}}) {
        double id = 0;
        for (const auto& [p, w] : ch.terms)
          if (p.weight() == 0) id = w;
        // SWAP = (II + XX + YY + ZZ)/2 keeps a quarter of eps^2 on the identity.
        const double expect = ch.terms.size() > 2 ? 1 - 0.75 * eps * eps : 1 - eps * eps;
        const bool passed = std::abs(ch.total() - 1) < 1e-12 && std::abs(id - expect) < 1e-12;
        fmt::print("{} fluctuation channel {} (eps = {}, identity weight {:.12g})\n", passed ? "PASS" : "FAIL", name, eps, id);
        ok = ok && passed;
      }
      return ok ? 0 : 1;
    }

    if (*lat) {
      const auto l = build_lattice(lat_d);
      const std::string text = l.to_json().dump(2) + "\n";
      if (lat_out.empty())
        std::cout << text;
      else
        write_text(lat_out, text);
      return 0;
    }

    if (*tab) {
      auto params = ErrorModelParams::standard(tab_p2, tab_pleak, gate_flavour_from_string(tab_gate),
                                                   leak_model_from_string(tab_leak));
      const auto c = build_check_circuit(tab_basis == "x" ? CheckBasis::x : CheckBasis::z, params.flavour, tab_mask);
      const std::string text = compile_error_table(c, params).to_json().dump(2) + "\n";
      if (tab_out.empty())
        std::cout << text;
      else
        write_text(tab_out, text);
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
