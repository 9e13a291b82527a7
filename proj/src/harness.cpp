#include "spinqec/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "spinqec/decoder.hpp"
#include "spinqec/lattice.hpp"
#include "spinqec/sampler.hpp"

namespace spinqec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double snap(double v) { return std::round(v * 1e12) / 1e12; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// Root of the least-squares quadratic through (xs, ys) inside [lo, hi].
bool quadratic_root(const std::vector<double>& xs, const std::vector<double>& ys, double lo, double hi,
                    double& root) {
  const std::size_t n = xs.size();
  if (n < 3) return false;
  const double x0 = 0.5 * (lo + hi);
  const double scale = std::max(hi - lo, 1e-300);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (xs[i] - x0) / scale;
    a(static_cast<Eigen::Index>(i), 0) = 1;
    a(static_cast<Eigen::Index>(i), 1) = t;
    a(static_cast<Eigen::Index>(i), 2) = t * t;
    b(static_cast<Eigen::Index>(i)) = ys[i];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  std::vector<double> roots;
  if (std::abs(c(2)) < 1e-12 * (std::abs(c(1)) + std::abs(c(0)) + 1e-300)) {
    if (c(1) != 0) roots.push_back(-c(0) / c(1));
  } else {
    const double disc = c(1) * c(1) - 4 * c(2) * c(0);
    if (disc >= 0) {
      const double s = std::sqrt(disc);
      roots.push_back((-c(1) + s) / (2 * c(2)));
      roots.push_back((-c(1) - s) / (2 * c(2)));
    }
  }
  const double tlo = (lo - x0) / scale, thi = (hi - x0) / scale;
  bool found = false;
  for (double r : roots) {
    if (r >= tlo - 1e-12 && r <= thi + 1e-12) {
      const double x = x0 + r * scale;
      if (!found || std::abs(x - x0) < std::abs(root - x0)) root = x;
      found = true;
    }
  }
  return found;
}

}  // namespace

std::string to_string(ScanVariable v) { return v == ScanVariable::p2 ? "p2" : "p_leak"; }

ScanVariable scan_variable_from_string(const std::string& s) {
  if (s == "p2") return ScanVariable::p2;
  if (s == "p_leak" || s == "pleak") return ScanVariable::p_leak;
  throw std::invalid_argument("unknown scan variable: " + s);
}

std::string to_string(RateNormalisation n) { return n == RateNormalisation::per_shot ? "per_shot" : "per_round"; }

RateNormalisation rate_normalisation_from_string(const std::string& s) {
  if (s == "per_shot") return RateNormalisation::per_shot;
  if (s == "per_round") return RateNormalisation::per_round;
  throw std::invalid_argument("unknown normalisation: " + s);
}

double per_round_rate(double p_logical, int rounds) {
  if (rounds < 1) throw std::invalid_argument("per_round_rate: rounds must be positive");
  if (p_logical < 0 || p_logical > 1) throw std::invalid_argument("per_round_rate: probability out of range");
  return 1.0 - std::pow(1.0 - p_logical, 1.0 / rounds);
}

std::uint64_t SweepSpec::shots_for(int d) const {
  auto it = shots.find(d);
  return it == shots.end() ? default_shots(d) : it->second;
}

std::vector<double> SweepSpec::grid() const {
  if (!(step > 0)) throw std::invalid_argument("SweepSpec: step must be positive");
  if (stop < start) throw std::invalid_argument("SweepSpec: stop below start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(snap(start + static_cast<double>(i) * step));
  return out;
}

void SweepSpec::validate() const {
  if (distances.empty()) throw std::invalid_argument("SweepSpec: no distances");
  for (int d : distances)
    if (d < 3 || d % 2 == 0) throw std::invalid_argument("SweepSpec: distances must be odd and >= 3");
  for (int d : distances)
    if (shots_for(d) < 1000) throw std::invalid_argument("SweepSpec: at least 1000 shots per point");
  const auto g = grid();
  if (g.empty()) throw std::invalid_argument("SweepSpec: empty grid");
  for (const auto& p : points()) {
    ErrorModelParams params = ErrorModelParams::standard(p.p2, p.p_leak, p.flavour, p.leak_model);
    params.validate();
  }
}

std::vector<SweepPoint> SweepSpec::points() const {
  std::vector<SweepPoint> out;
  for (int d : distances) {
    for (double v : grid()) {
      SweepPoint p;
      p.distance = d;
      p.p2 = scan_variable == ScanVariable::p2 ? v : fixed;
      p.p_leak = scan_variable == ScanVariable::p_leak ? v : fixed;
      p.flavour = flavour;
      p.leak_model = leak_model;
      p.shots = shots_for(d);
      p.seed = seed;
      out.push_back(p);
    }
  }
  return out;
}

nlohmann::json SweepSpec::to_json() const {
  nlohmann::json j;
  j["distances"] = distances;
  j["scan"] = {{"variable", to_string(scan_variable)}, {"start", start}, {"stop", stop}, {"step", step}};
  j["fixed"] = {{scan_variable == ScanVariable::p2 ? "p_leak" : "p2", fixed}};
  j["gate"] = to_string(flavour);
  j["leak_model"] = to_string(leak_model);
  nlohmann::json s = nlohmann::json::object();
  for (int d : distances) s[std::to_string(d)] = shots_for(d);
  j["shots"] = s;
  j["seed"] = seed;
  return j;
}

int resolve_workers(int requested) {
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw std::invalid_argument(std::string(kWorkersEnv) + " must be a positive integer");
    return static_cast<int>(v);
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t point_key(const SweepPoint& p) {
  std::uint64_t h = splitmix64(static_cast<std::uint64_t>(p.distance));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(p.p2));
  h = splitmix64(h ^ std::bit_cast<std::uint64_t>(p.p_leak));
  h = splitmix64(h ^ (p.flavour == GateFlavour::s_gate ? 1u : 2u));
  h = splitmix64(h ^ (p.leak_model == LeakModel::worst_case ? 3u : 4u));
  return h;
}

std::uint64_t shot_seed(std::uint64_t master, std::uint64_t key, std::uint64_t shot) {
  return splitmix64(splitmix64(master ^ key) + shot * 0x9e3779b97f4a7c15ULL);
}

SweepRow make_row(const SweepPoint& p, std::uint64_t failures) {
  SweepRow r;
  r.d = p.distance;
  r.p2 = p.p2;
  r.p_leak = p.p_leak;
  r.shots = p.shots;
  r.failures = failures;
  r.p_logical = p.shots ? static_cast<double>(failures) / static_cast<double>(p.shots) : 0.0;
  r.stderr_ = p.shots ? std::sqrt(r.p_logical * (1 - r.p_logical) / static_cast<double>(p.shots)) : 0.0;
  return r;
}

SweepRow estimate_logical_rate(const SweepPoint& p, int workers) {
  const Lattice lattice = build_lattice(p.distance);
  const ErrorModelParams params = ErrorModelParams::standard(p.p2, p.p_leak, p.flavour, p.leak_model);
  const ErrorTables tables(params, lattice);
  const Decoder decoder(lattice);
  const std::uint64_t key = point_key(p);
  workers = std::max(1, workers);
  std::vector<std::uint64_t> fails(static_cast<std::size_t>(workers), 0);
  auto work = [&](int w) {
    std::uint64_t f = 0;
    for (std::uint64_t s = static_cast<std::uint64_t>(w); s < p.shots; s += static_cast<std::uint64_t>(workers)) {
      const ShotRecord rec = sample_shot(lattice, tables, p.distance, shot_seed(p.seed, key, s));
      const ShotOutcome o = adjudicate(rec.frame, decoder.correction(rec), lattice);
      if (o.failed()) ++f;
    }
    fails[static_cast<std::size_t>(w)] = f;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::uint64_t total = 0;
  for (auto f : fails) total += f;
  return make_row(p, total);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers, const ProgressFn& progress) {
  spec.validate();
  std::vector<SweepRow> rows;
  for (const auto& p : spec.points()) {
    rows.push_back(estimate_logical_rate(p, workers));
    if (progress) progress(rows.back());
  }
  return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows)
    out += fmt::format("{},{:.10g},{:.10g},{},{},{:.10g},{:.10g}\n", r.d, r.p2, r.p_leak, r.shots, r.failures,
                       r.p_logical, r.stderr_);
  return out;
}

std::vector<SweepRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::invalid_argument("CSV: expected header '" + std::string(kCsvHeader) + "'");
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw std::invalid_argument(fmt::format("CSV line {}: expected 7 fields", lineno));
    try {
      SweepRow r;
      r.d = std::stoi(f[0]);
      r.p2 = std::stod(f[1]);
      r.p_leak = std::stod(f[2]);
      r.shots = std::stoull(f[3]);
      r.failures = std::stoull(f[4]);
      r.p_logical = std::stod(f[5]);
      r.stderr_ = std::stod(f[6]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw std::invalid_argument(fmt::format("CSV line {}: malformed number", lineno));
    }
  }
  return rows;
}

nlohmann::json ThresholdEstimate::to_json() const {
  nlohmann::json j;
  j["variable"] = to_string(variable);
  j["normalisation"] = to_string(normalisation);
  j["crossing_found"] = crossing_found;
  if (crossing_found) {
    j["value"] = value;
    j["half_width"] = half_width;
  }
  j["extrapolated"] = extrapolated;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : pairs) {
    nlohmann::json pj = {{"d_small", p.d_small}, {"d_large", p.d_large}, {"found", p.found}, {"method", p.method}};
    if (p.found) pj["value"] = p.value;
    j["pairs"].push_back(pj);
  }
  j["diagnostics"] = diagnostics;
  return j;
}

ThresholdEstimate fit_threshold(const std::vector<SweepRow>& rows, RateNormalisation norm) {
  ThresholdEstimate est;
  est.normalisation = norm;
  if (rows.empty()) throw std::invalid_argument("fit_threshold: no rows");
  std::set<double> p2s, pls;
  for (const auto& r : rows) {
    p2s.insert(r.p2);
    pls.insert(r.p_leak);
  }
  if (p2s.size() > 1 && pls.size() > 1) throw std::invalid_argument("fit_threshold: both rates vary");
  est.variable = pls.size() > 1 ? ScanVariable::p_leak : ScanVariable::p2;
  auto xval = [&](const SweepRow& r) { return est.variable == ScanVariable::p2 ? r.p2 : r.p_leak; };

  std::map<int, std::map<double, double>> curves;
  for (const auto& r : rows)
    curves[r.d][xval(r)] = norm == RateNormalisation::per_round ? per_round_rate(r.p_logical, r.d) : r.p_logical;
  if (curves.size() < 3) throw std::invalid_argument("fit_threshold: need at least 3 distances");

  std::vector<int> ds;
  for (const auto& [d, c] : curves) ds.push_back(d);
  std::vector<double> found_values;
  std::ostringstream diag;
  for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
    const auto& small = curves[ds[i]];
    const auto& large = curves[ds[i + 1]];
    std::vector<double> xs, diff;
    for (const auto& [x, y] : small) {
      auto it = large.find(x);
      if (it != large.end()) {
        xs.push_back(x);
        diff.push_back(it->second - y);
      }
    }
    PairCrossing pc{ds[i], ds[i + 1], false, 0, "none"};
    if (xs.size() < 5) {
      diag << "d=" << ds[i] << "/" << ds[i + 1] << ": fewer than 5 shared grid points; ";
      est.pairs.push_back(pc);
      continue;
    }
    // Sign changes from "larger code better" to "larger code worse".
    std::vector<std::size_t> changes;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k)
      if (diff[k] <= 0 && diff[k + 1] > 0 && !(diff[k] == 0 && k > 0 && diff[k - 1] > 0)) changes.push_back(k);
    if (changes.empty()) {
      diag << "d=" << ds[i] << "/" << ds[i + 1] << ": no crossing in grid; ";
      est.pairs.push_back(pc);
      continue;
    }
    if (changes.size() > 1) diag << "d=" << ds[i] << "/" << ds[i + 1] << ": " << changes.size() << " sign changes, using the median; ";
    const std::size_t k = changes[changes.size() / 2];
    const std::size_t lo = k >= 2 ? k - 2 : 0;
    const std::size_t hi = std::min(xs.size() - 1, lo + 4);
    std::vector<double> wx(xs.begin() + static_cast<std::ptrdiff_t>(lo), xs.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    std::vector<double> wy(diff.begin() + static_cast<std::ptrdiff_t>(lo), diff.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    double root = 0;
    if (quadratic_root(wx, wy, xs[k], xs[k + 1], root)) {
      pc.method = "quadratic";
    } else {
      const double t = diff[k] / (diff[k] - diff[k + 1]);
      root = xs[k] + t * (xs[k + 1] - xs[k]);
      pc.method = "linear";
    }
    pc.found = true;
    pc.value = root;
    found_values.push_back(root);
    est.pairs.push_back(pc);
  }
  if (found_values.empty()) {
    est.crossing_found = false;
    est.diagnostics = diag.str() + "no crossing";
    return est;
  }
  est.crossing_found = true;
  double sum = 0;
  for (double v : found_values) sum += v;
  est.value = sum / static_cast<double>(found_values.size());
  const auto [mn, mx] = std::minmax_element(found_values.begin(), found_values.end());
  est.half_width = 0.5 * (*mx - *mn);
  if (found_values.size() < est.pairs.size()) diag << "only " << found_values.size() << " of " << est.pairs.size() << " pairs cross; ";
  est.diagnostics = diag.str();
  return est;
}

}  // namespace spinqec
