// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fail.
//
//   spinqec_acceptance [--fast] [--threshold] [--out-dir DIR]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fault_injection.hpp"
#include "oracles.hpp"
#include "spinqec/circuit.hpp"
#include "spinqec/device.hpp"
#include "spinqec/error_table.hpp"
#include "spinqec/harness.hpp"
#include "spinqec/matching.hpp"
#include "spinqec/sampler.hpp"

using namespace spinqec;
using Terms = std::vector<std::pair<PauliString, double>>;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(bool ok, const std::string& id, const std::string& detail) {
  fmt::print("{} {}: {}\n", ok ? "PASS" : "FAIL", id, detail);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- fast criteria -----------------------------------------------------------

void gate_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = verify_cz_decompositions(1e-10);
  const double el = seconds_since(t0);
  bool ok = el < 1.0;
  double worst = 0;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    worst = std::max(worst, c.max_deviation);
  }
  report(ok, "gate_identities", fmt::format("{} identities, max deviation {:.2g}, {:.3f} s", checks.size(), worst, el));
}

void device_numbers() {
  const double j_on = mediated_exchange_estimate(1e9, 1e10, 1e10);
  const double j_off = mediated_exchange_estimate(1e9, 1e12, 1e10);
  const double rm = residual_exchange_ratio(1e10, 1e12, ExchangeKind::mediated);
  const double rd = residual_exchange_ratio(1e10, 1e12, ExchangeKind::direct);
  TimingParams fast;
  fast.t_j = 1e-6;
  TimingParams slow;
  slow.t_j = 1e-6;
  slow.t_z = 0.25e-6;
  slow.t_h = 1e-6;
  const double cf = cycle_time(GateFlavour::s_gate, fast), cs = cycle_time(GateFlavour::sqrtswap, slow);
  const double deph = dephasing_per_cycle(12e-6, 28e-3);
  const auto rel = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); };
  const bool ok = rel(j_on, 1e6) && rel(j_off, 100) && rel(j_off / j_on, 1e-4) && rel(rm, 1e-4) && rel(rd, 1e-2) &&
                  rel(cf, 8e-6) && rel(cs, 12e-6) && std::abs(deph - 2.1e-4) < 0.05e-4;
  report(ok, "device_numbers",
         fmt::format("J_on {:g} Hz, J_off {:g} Hz, ratio {:g}; residual mediated {:g} direct {:g}; cycles {:g}/{:g} us; "
                     "dephasing {:.3g}",
                     j_on, j_off, j_off / j_on, rm, rd, cf * 1e6, cs * 1e6, deph));
}

void fluctuation_channels() {
  bool ok = true;
  const auto u = fluctuation_channel(gates::swap(), 0.1);
  ok = ok && u.terms.size() == 2 && std::abs(u.terms[0].second - 0.99) < 1e-15 &&
       std::abs(u.terms[1].second - 0.01) < 1e-15 && dense_equal_up_to_phase(u.terms[1].first, gates::swap(), 1e-12);
  const auto zz = fluctuation_channel(Terms{{PauliString::from_string("ZZ"), 1.0}}, 0.1);
  ok = ok && zz.terms.size() == 2 && std::abs(zz.terms[0].second - 0.99) < 1e-15 &&
       zz.terms[1].first.letters() == "ZZ" && std::abs(zz.terms[1].second - 0.01) < 1e-15;

  double worst_ratio = 0;
  const std::vector<std::pair<PauliString, double>> swap_terms = {{PauliString::from_string("II"), 0.5},
                                                                  {PauliString::from_string("XX"), 0.5},
                                                                  {PauliString::from_string("YY"), 0.5},
                                                                  {PauliString::from_string("ZZ"), 0.5}};
  const std::vector<std::pair<PauliString, double>> zz_terms = {{PauliString::from_string("ZZ"), 1.0}};
  for (const auto* terms : {&swap_terms, &zz_terms}) {
    oracle::Mat h = oracle::Mat::Zero(4, 4);
    for (const auto& [p, a] : *terms) h += a * oracle::pauli_dense(p);
    for (double eps : {0.01, 0.03, 0.05, 0.1}) {
      const auto ref = oracle::mixture_twirl(h, 2, eps);
      std::map<std::pair<std::uint64_t, std::uint64_t>, double> got;
      for (const auto& [p, w] : fluctuation_channel(*terms, eps).terms) got[{p.x_bits(), p.z_bits()}] += w;
      for (std::uint64_t x = 0; x < 4; ++x)
        for (std::uint64_t z = 0; z < 4; ++z) {
          const double a = got.count({x, z}) ? got[{x, z}] : 0.0;
          const double b = ref.count({x, z}) ? ref.at({x, z}) : 0.0;
          worst_ratio = std::max(worst_ratio, std::abs(a - b) / std::pow(eps, 4));
        }
    }
  }
  ok = ok && worst_ratio <= 1.0;
  report(ok, "fluctuation_channels",
         fmt::format("SWAP {{I: {:.4g}, SWAP: {:.4g}}}, ZZ {{I: {:.4g}, ZZ: {:.4g}}}; max |twirl - mixture| = {:.3f} eps^4",
                     u.terms[0].second, u.terms[1].second, zz.terms[0].second, zz.terms[1].second, worst_ratio));
}

void leakage_oscillation_check() {
  const double u = 2 * std::numbers::pi * 1e10;
  double worst = 0;
  for (int i = 1; i <= 20; ++i) {
    const double r = 0.01 * i;
    for (int k = 0; k <= 200; ++k) {
      const double el = (2 * std::numbers::pi / u) * k / 200.0;
      const double dev = std::abs(leakage_oscillation(r * u / 2, u, el) - oracle::exact_leakage(r * u / 2, u, el));
      worst = std::max(worst, dev / (r * r * r));
    }
  }
  report(worst <= 5, "leakage_oscillation",
         fmt::format("max |perturbative - exact| = {:.3f} r^3 over r <= 0.2 and one period (bound 5 r^3)", worst));
}

void error_table_sums() {
  double worst = 0;
  int tables = 0;
  for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap})
    for (auto b : {CheckBasis::x, CheckBasis::z})
      for (unsigned mask : {0xFu, 0x3u, 0xCu})
        for (double p2 : {0.0, 0.001, 0.01})
          for (double pl : {0.0, 0.001, 0.01})
            for (auto m : {LeakModel::worst_case, LeakModel::refined}) {
              const auto t = compile_error_table(build_check_circuit(b, f, mask), ErrorModelParams::standard(p2, pl, f, m));
              worst = std::max(worst, std::abs(t.total() - 1));
              ++tables;
            }
  report(worst <= 1e-10, "error_table_sums", fmt::format("{} tables, max |sum - 1| = {:.2g}", tables, worst));
}

void error_table_propagation() {
  int cases = 0, mismatches = 0;
  for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap})
    for (auto b : {CheckBasis::x, CheckBasis::z}) {
      const auto c = build_literal_check_circuit(b, f);
      for (std::size_t loc = 0; loc < c.locations.size(); ++loc) {
        const auto& l = c.locations[loc];
        if (l.kind == GateKind::readout_st) continue;
        const std::size_t k = l.qubits.size();
        for (std::size_t code = 1; code < (std::size_t{1} << (2 * k)); ++code) {
          PauliString err(kCheckQubits);
          for (std::size_t i = 0; i < k; ++i) err.set_letter(static_cast<std::size_t>(l.qubits[i]), "IXYZ"[(code >> (2 * i)) & 3u]);
          const auto ref = oracle::dense_propagation(c, loc, err);
          std::map<std::pair<std::uint64_t, std::uint64_t>, double> got;
          for (const auto& [p, w] : propagate_to_end(c, loc, err))
            if (w > 1e-12) got[{p.x_bits(), p.z_bits()}] += w;
          bool same = got.size() == ref.size();
          for (const auto& [key, w] : ref) same = same && got.count(key) && std::abs(got[key] - w) < 1e-10;
          mismatches += !same;
          ++cases;
        }
      }
    }
  report(mismatches == 0, "error_table_propagation",
         fmt::format("{} single injections vs dense oracle, {} mismatches", cases, mismatches));
}

void error_table_sampling() {
  double worst = 0;
  const std::size_t n = 1'000'000;
  for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap})
    for (auto b : {CheckBasis::x, CheckBasis::z}) {
      const SampledTable st(compile_error_table(build_check_circuit(b, f), ErrorModelParams::standard(0.01, 0.005, f)));
      std::vector<std::size_t> counts(st.draws.size(), 0);
      std::mt19937_64 rng(77);
      for (std::size_t i = 0; i < n; ++i) ++counts[st.alias.sample(uniform01(rng))];
      for (std::size_t i = 0; i < counts.size(); ++i) {
        const double p = st.table.entries[i].probability;
        if (p * n < 25) continue;
        worst = std::max(worst, std::abs(static_cast<double>(counts[i]) - n * p) / std::sqrt(n * p * (1 - p)));
      }
    }
  report(worst <= 5, "error_table_sampling", fmt::format("1e6 draws per table, max deviation {:.2f} sigma", worst));
}

void decoder_brute_force() {
  std::mt19937_64 rng(2024);
  int mismatches = 0, compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 * static_cast<int>(1 + rng() % 5);
    std::vector<MatchingEdge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 4 != 0) edges.push_back({u, v, static_cast<std::int64_t>(rng() % 21)});
    const auto best = oracle::brute_force_min_perfect(n, edges);
    if (best == std::numeric_limits<std::int64_t>::max()) continue;
    mismatches += matching_weight(edges, min_weight_perfect_matching(n, edges)) != best;
    ++compared;
  }
  report(mismatches == 0 && compared >= 150, "decoder_brute_force",
         fmt::format("{} random graphs with <= 10 nodes, {} mismatches", compared, mismatches));
}

void decoder_single_faults() {
  int total = 0, failed = 0;
  std::string example;
  for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap}) {
    const auto rep = faults::single_fault_sweep(3, ErrorModelParams::standard(0.01, 0.0, f));
    total += rep.total;
    failed += rep.failed;
    if (example.empty() && !rep.examples.empty()) example = rep.examples.front();
  }
  report(failed == 0, "decoder_single_faults_d3",
         fmt::format("{} gate, initialisation and readout faults, {} uncorrected{}", total, failed,
                     example.empty() ? "" : " (e.g. " + example + ")"));
}

void decoder_consistency() {
  int shots = 0;
  bool ok = true;
  for (int d : {3, 5, 7}) {
    const auto l = build_lattice(d);
    const Decoder dec(l);
    for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap}) {
      const ErrorTables t(ErrorModelParams::standard(0.015, 0.01, f), l);
      for (std::uint64_t s = 0; s < 500; ++s) {
        const auto rec = sample_shot(l, t, d, s);
        try {
          adjudicate(rec.frame, dec.correction(rec), l);
        } catch (const std::logic_error&) {
          ok = false;
        }
        ++shots;
      }
    }
  }
  report(ok, "decoder_stabiliser_consistency", fmt::format("{} noisy shots, corrected frame always commutes with every check", shots));
}

void determinism() {
  SweepSpec s;
  s.distances = {3, 5};
  s.start = 0.006;
  s.stop = 0.010;
  s.step = 0.002;
  s.fixed = 0.001;
  s.shots = {{3, 2000}, {5, 1000}};
  s.seed = 42;
  const auto a = format_csv(run_sweep(s, 1));
  const auto b = format_csv(run_sweep(s, 2));
  const auto c = format_csv(run_sweep(s, 5));
  report(a == b && a == c, "determinism", fmt::format("CSV for 1, 2 and 5 workers {}", a == b && a == c ? "byte-identical" : "differs"));
}

// ---- threshold criteria ------------------------------------------------------

struct Scan {
  ThresholdEstimate per_round;
  ThresholdEstimate per_shot;
};

Scan run_scan(const std::string& name, GateFlavour f, ScanVariable var, double fixed, double start, double stop,
              const fs::path& out_dir) {
  SweepSpec s;
  s.distances = {3, 5, 7};
  s.scan_variable = var;
  s.start = start;
  s.stop = stop;
  s.step = 5e-4;
  s.fixed = fixed;
  s.flavour = f;
  s.shots = {{3, 20000}, {5, 20000}, {7, 10000}};
  s.seed = 20240601;
  s.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_sweep(s, resolve_workers(0));
  fs::create_directories(out_dir);
  std::ofstream(out_dir / (name + ".csv")) << format_csv(rows);
  Scan out{fit_threshold(rows, RateNormalisation::per_round), fit_threshold(rows, RateNormalisation::per_shot)};
  fmt::print("  scan {} ({} points, {:.0f} s): per-round {}, per-shot {}\n", name, rows.size(), seconds_since(t0),
             out.per_round.crossing_found ? fmt::format("{:.4f}%", 100 * out.per_round.value) : "none",
             out.per_shot.crossing_found ? fmt::format("{:.4f}%", 100 * out.per_shot.value) : "none");
  std::fflush(stdout);
  return out;
}

std::string pct(const ThresholdEstimate& e) {
  return e.crossing_found ? fmt::format("{:.3f}% +- {:.3f}%", 100 * e.value, 100 * e.half_width) : "no crossing";
}

void threshold_value(const std::string& id, const Scan& s, double target, double tol) {
  const auto& e = s.per_round;
  const bool ok = e.crossing_found && std::abs(e.value - target) <= tol;
  report(ok, id,
         fmt::format("{} (target {:.2f}% +- {:.2f}%; per-shot crossing {})", pct(e), 100 * target, 100 * tol, pct(s.per_shot)));
}

void threshold_suite(const fs::path& out_dir) {
  const auto s_p2 = run_scan("p2_s", GateFlavour::s_gate, ScanVariable::p2, 0.0, 0.005, 0.012, out_dir);
  threshold_value("threshold_p2_s_gate", s_p2, 0.0086, 0.0015);
  const auto w_p2 = run_scan("p2_sqrtswap", GateFlavour::sqrtswap, ScanVariable::p2, 0.0, 0.004, 0.011, out_dir);
  threshold_value("threshold_p2_sqrtswap", w_p2, 0.0076, 0.0015);
  const auto pure = run_scan("pleak_pure", GateFlavour::s_gate, ScanVariable::p_leak, 0.0, 0.004, 0.010, out_dir);
  threshold_value("threshold_pure_leakage", pure, 0.0066, 0.0015);

  struct Range {
    double p2, lo, hi;
  };
  const std::vector<Range> ranges = {{0.004, 0.002, 0.006}, {0.005, 0.0015, 0.0055}, {0.006, 0.0005, 0.0045}, {0.007, 0.0, 0.0035}};
  std::map<GateFlavour, std::vector<ThresholdEstimate>> table;
  for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap})
    for (const auto& r : ranges) {
      const auto s = run_scan(fmt::format("pleak_{}_p2_{:.1f}", to_string(f), 1000 * r.p2), f, ScanVariable::p_leak, r.p2,
                              r.lo, r.hi, out_dir);
      table[f].push_back(s.per_round);
      if (r.p2 == 0.005)
        threshold_value(f == GateFlavour::s_gate ? "threshold_pleak_s_gate_at_p2_0.5" : "threshold_pleak_sqrtswap_at_p2_0.5",
                        s, f == GateFlavour::s_gate ? 0.0027 : 0.0023, 0.0010);
    }

  for (auto f : {GateFlavour::s_gate, GateFlavour::sqrtswap}) {
    const auto& v = table[f];
    bool ok = true;
    std::string vals;
    for (std::size_t i = 0; i < v.size(); ++i) {
      vals += fmt::format("{}{}", i ? ", " : "", v[i].crossing_found ? fmt::format("{:.3f}%", 100 * v[i].value) : "none");
      ok = ok && v[i].crossing_found && (i == 0 || v[i].value < v[i - 1].value);
    }
    report(ok, fmt::format("pleak_threshold_decreasing_{}", to_string(f)),
           fmt::format("p2 = 0.4/0.5/0.6/0.7% -> {}", vals));
  }
  bool ok = true;
  std::string cmp;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto& s = table[GateFlavour::s_gate][i];
    const auto& w = table[GateFlavour::sqrtswap][i];
    const bool here = s.crossing_found && w.crossing_found && s.value > w.value;
    ok = ok && here;
    cmp += fmt::format("{}p2 {:.1f}%: {} vs {}{}", i ? "; " : "", 100 * ranges[i].p2,
                       s.crossing_found ? fmt::format("{:.3f}%", 100 * s.value) : "none",
                       w.crossing_found ? fmt::format("{:.3f}%", 100 * w.value) : "none", here ? "" : " (violated)");
  }
  report(ok, "pleak_threshold_s_gate_above_sqrtswap", cmp);
}

}  // namespace

int main(int argc, char** argv) {
  bool fast = false, thresh = false;
  fs::path out_dir = "acceptance_out";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--fast") {
      fast = true;
    } else if (a == "--threshold") {
      thresh = true;
    } else if (a == "--out-dir" && i + 1 < argc) {
      out_dir = argv[++i];
    } else {
      std::cerr << "usage: spinqec_acceptance [--fast] [--threshold] [--out-dir DIR]\n";
      return 2;
    }
  }
  if (!fast && !thresh) fast = thresh = true;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (fast) {
      gate_identities();
      device_numbers();
      fluctuation_channels();
      leakage_oscillation_check();
      error_table_sums();
      error_table_propagation();
      error_table_sampling();
      decoder_brute_force();
      decoder_single_faults();
      decoder_consistency();
      determinism();
    }
    if (thresh) threshold_suite(out_dir);
  } catch (const std::exception& e) {
    report(false, "internal", e.what());
  }
  fmt::print("{} failed, {:.0f} s\n", g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
