#include "spinqec/device.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace spinqec {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

void require_nonzero(double v, const char* what) {
  if (v == 0 || !std::isfinite(v)) throw std::domain_error(std::string(what) + " is zero");
}

}  // namespace

std::string to_string(GateFlavour f) { return f == GateFlavour::s_gate ? "s" : "sqrtswap"; }

GateFlavour gate_flavour_from_string(const std::string& s) {
  if (s == "s" || s == "s_gate" || s == "S") return GateFlavour::s_gate;
  if (s == "sqrtswap" || s == "sqrt_swap") return GateFlavour::sqrtswap;
  throw std::invalid_argument("unknown gate flavour: " + s);
}

double PauliChannel::total() const {
  double s = 0;
  for (const auto& [p, w] : terms) s += w;
  return s;
}

void PauliChannel::validate(double tol) const {
  for (const auto& [p, w] : terms)
    if (w < 0) throw std::invalid_argument("PauliChannel: negative probability");
  if (std::abs(total() - 1.0) > tol) throw std::invalid_argument("PauliChannel: not normalised");
}

double mediated_exchange_full(const DeviceParams& p) {
  require_nonzero(p.delta_l, "delta_l");
  require_nonzero(p.delta_m, "delta_m");
  require_nonzero(p.delta_r, "delta_r");
  const std::complex<double> term =
      std::conj(p.t_r2) * p.t_r1 * std::conj(p.t_l1) * p.t_l2 / (p.delta_r * p.delta_m * p.delta_l);
  return -2.0 * (term + std::conj(term)).real();
}

double mediated_exchange_estimate(double t, double delta_side, double delta_m) {
  require_positive(t, "t");
  require_positive(delta_side, "delta_side");
  require_positive(delta_m, "delta_m");
  return t * t * t * t / (delta_side * delta_side * delta_m);
}

double residual_exchange_ratio(double delta_on, double delta_off, ExchangeKind kind) {
  require_positive(delta_on, "delta_on");
  require_positive(delta_off, "delta_off");
  const double r = delta_on / delta_off;
  return kind == ExchangeKind::mediated ? r * r : r;
}

GateRegime classify_regime(double omega, double j) {
  const double a = std::abs(omega), aj = std::abs(j);
  if (a <= aj / 10) return GateRegime::sqrtswap;
  if (a >= 10 * aj) return GateRegime::s_gate;
  return GateRegime::intermediate;
}

PauliChannel fluctuation_channel(const std::vector<std::pair<PauliString, double>>& h_terms,
                                 double epsilon) {
  if (!(epsilon >= 0 && epsilon <= 0.5)) throw std::invalid_argument("fluctuation_channel: epsilon out of range");
  if (h_terms.empty()) throw std::invalid_argument("fluctuation_channel: empty Hamiltonian");
  double norm = 0;
  for (const auto& [g, a] : h_terms) norm += a * a;
  if (std::abs(norm - 1.0) > 1e-9) throw std::invalid_argument("fluctuation_channel: amplitudes not normalised");
  const std::size_t n = h_terms.front().first.n_qubits();
  const double e2 = epsilon * epsilon;
  PauliChannel ch;
  ch.terms.emplace_back(PauliString(n), 1.0 - e2);
  for (const auto& [g, a] : h_terms) {
    PauliString letters(n, g.x_bits(), g.z_bits());
    if (letters.is_identity()) {
      ch.terms.front().second += e2 * a * a;
      continue;
    }
    ch.terms.emplace_back(letters, e2 * a * a);
  }
  return ch;
}

UnitaryChannel fluctuation_channel(const DenseOperator& h, double epsilon) {
  if (!(epsilon >= 0 && epsilon <= 0.5)) throw std::invalid_argument("fluctuation_channel: epsilon out of range");
  if (!h.is_unitary() || (h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("fluctuation_channel: h must be unitary and Hermitian");
  const double e2 = epsilon * epsilon;
  UnitaryChannel ch;
  ch.terms.emplace_back(DenseOperator::identity(h.n_qubits()), 1.0 - e2);
  if (e2 > 0) ch.terms.emplace_back(h, e2);
  return ch;
}

PauliChannel pauli_twirl(const UnitaryChannel& channel) {
  if (channel.terms.empty()) throw std::invalid_argument("pauli_twirl: empty channel");
  const std::size_t n = channel.terms.front().first.n_qubits();
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> acc;
  for (const auto& [u, w] : channel.terms)
    for (const auto& [p, c] : pauli_decomposition(u, 1e-14))
      acc[{p.x_bits(), p.z_bits()}] += w * std::norm(c);
  PauliChannel out;
  for (const auto& [key, w] : acc) out.terms.emplace_back(PauliString(n, key.first, key.second), w);
  return out;
}

GateErrorPair gate_error_pair(double p2) {
  if (!(p2 >= 0 && p2 <= 1)) throw std::invalid_argument("gate_error_pair: probability out of range");
  return {p2, p2 / 2};
}

double leakage_oscillation(double t_tun, double u, double elapsed) {
  require_positive(u, "u");
  const double r = 2 * t_tun / u;
  if (std::abs(r) > 0.3) throw std::domain_error("leakage_oscillation: 2t/U beyond perturbative range");
  const double s = std::sin(u * elapsed / 2);
  return 4 * (2 * t_tun / u) * (2 * t_tun / u) * s * s;
}

double cycle_time(GateFlavour flavour, const TimingParams& tp) {
  if (tp.t_j < 0 || tp.t_z < 0 || tp.t_h < 0) throw std::invalid_argument("cycle_time: negative time");
  if (flavour == GateFlavour::s_gate) return 8 * tp.t_j + 2 * tp.t_h;
  return 8 * tp.t_j + 8 * tp.t_z + 2 * tp.t_h;
}

double dephasing_per_cycle(double cycle, double t2) {
  if (!(t2 > 0)) throw std::invalid_argument("dephasing_per_cycle: t2 must be positive");
  if (cycle < 0) throw std::invalid_argument("dephasing_per_cycle: negative cycle time");
  return cycle / (2 * t2);
}

}  // namespace spinqec
