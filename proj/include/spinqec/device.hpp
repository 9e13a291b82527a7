#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "spinqec/dense.hpp"
#include "spinqec/pauli.hpp"

namespace spinqec {

enum class GateFlavour { s_gate, sqrtswap };
enum class ExchangeKind { mediated, direct };
enum class GateRegime { sqrtswap, s_gate, intermediate };

std::string to_string(GateFlavour f);
GateFlavour gate_flavour_from_string(const std::string& s);

// Energies in Hz. Tunnelling amplitudes may carry a phase.
struct DeviceParams {
  std::complex<double> t_l1{0.0}, t_l2{0.0}, t_r1{0.0}, t_r2{0.0};
  double delta_l = 0, delta_m = 0, delta_r = 0;
  double u_charging = 0;
  double omega = 0;
  double e_z = 0;
};

// Times in seconds.
struct TimingParams {
  double t_j = 0;
  double t_z = 0;
  double t_h = 0;
  double t_2 = 0;
};

struct PauliChannel {
  std::vector<std::pair<PauliString, double>> terms;

  double total() const;
  // Throws unless probabilities are nonnegative and sum to 1 within tol.
  void validate(double tol = 1e-12) const;
};

struct UnitaryChannel {
  std::vector<std::pair<DenseOperator, double>> terms;
};

double mediated_exchange_full(const DeviceParams& p);
double mediated_exchange_estimate(double t, double delta_side, double delta_m);
double residual_exchange_ratio(double delta_on, double delta_off, ExchangeKind kind);

GateRegime classify_regime(double omega, double j);

// Twirled channel of a Hamiltonian with Pauli components alpha_i under a
// symmetric +-epsilon over/under-rotation: {I: 1 - eps^2, g_i: eps^2 alpha_i^2}.
PauliChannel fluctuation_channel(const std::vector<std::pair<PauliString, double>>& h_terms,
                                 double epsilon);
// Untwirled form for a unitary normalised Hamiltonian h: {I: 1 - eps^2, h: eps^2}.
UnitaryChannel fluctuation_channel(const DenseOperator& h, double epsilon);

PauliChannel pauli_twirl(const UnitaryChannel& channel);

struct GateErrorPair {
  double p_s;
  double p_sw;
};
GateErrorPair gate_error_pair(double p2);

double leakage_oscillation(double t_tun, double u, double elapsed);
double cycle_time(GateFlavour flavour, const TimingParams& tp);
double dephasing_per_cycle(double cycle, double t2);

}  // namespace spinqec
