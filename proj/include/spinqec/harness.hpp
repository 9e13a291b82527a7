#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinqec/device.hpp"
#include "spinqec/error_table.hpp"

namespace spinqec {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kWorkersEnv = "SPINQEC_WORKERS";
inline constexpr const char* kCsvHeader = "d,p2,p_leak,shots,failures,p_logical,stderr";

enum class ScanVariable { p2, p_leak };

std::string to_string(ScanVariable v);
ScanVariable scan_variable_from_string(const std::string& s);

struct SweepPoint {
  int distance = 3;
  double p2 = 0;
  double p_leak = 0;
  GateFlavour flavour = GateFlavour::s_gate;
  LeakModel leak_model = LeakModel::worst_case;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};

struct SweepRow {
  int d = 0;
  double p2 = 0;
  double p_leak = 0;
  std::uint64_t shots = 0;
  std::uint64_t failures = 0;
  double p_logical = 0;
  double stderr_ = 0;
};

struct SweepSpec {
  std::vector<int> distances;
  ScanVariable scan_variable = ScanVariable::p2;
  double start = 0;
  double stop = 0;
  double step = 0;
  double fixed = 0;  // the rate that is not scanned
  GateFlavour flavour = GateFlavour::s_gate;
  LeakModel leak_model = LeakModel::worst_case;
  std::map<int, std::uint64_t> shots;  // per distance; missing entries use default_shots(d)
  std::uint64_t seed = 0;

  static std::uint64_t default_shots(int d) { return d <= 5 ? 20000 : 10000; }
  std::uint64_t shots_for(int d) const;
  std::vector<double> grid() const;
  std::vector<SweepPoint> points() const;
  void validate() const;
  nlohmann::json to_json() const;
};

// Reads SPINQEC_WORKERS when set, otherwise returns `requested` (or the
// hardware concurrency when requested <= 0).
int resolve_workers(int requested);

std::uint64_t point_key(const SweepPoint& p);
std::uint64_t shot_seed(std::uint64_t master, std::uint64_t key, std::uint64_t shot);

SweepRow make_row(const SweepPoint& p, std::uint64_t failures);
SweepRow estimate_logical_rate(const SweepPoint& p, int workers = 1);

using ProgressFn = std::function<void(const SweepRow&)>;
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers = 1, const ProgressFn& progress = {});

std::string format_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_csv(std::istream& in);

// Curves are compared either as the raw failure fraction of a d-round shot
// or as the equivalent per-round rate 1 - (1 - p)^(1/d).
enum class RateNormalisation { per_shot, per_round };

std::string to_string(RateNormalisation n);
RateNormalisation rate_normalisation_from_string(const std::string& s);
double per_round_rate(double p_logical, int rounds);

struct PairCrossing {
  int d_small;
  int d_large;
  bool found;
  double value;
  std::string method;
};

struct ThresholdEstimate {
  bool crossing_found = false;
  double value = 0;
  double half_width = 0;
  bool extrapolated = false;
  ScanVariable variable = ScanVariable::p2;
  RateNormalisation normalisation = RateNormalisation::per_round;
  std::vector<PairCrossing> pairs;
  std::string diagnostics;

  nlohmann::json to_json() const;
};

// Pairwise crossings of successive distances with local quadratic fits.
ThresholdEstimate fit_threshold(const std::vector<SweepRow>& rows,
                                RateNormalisation norm = RateNormalisation::per_round);

}  // namespace spinqec
