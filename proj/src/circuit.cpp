#include "spinqec/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace spinqec {

namespace {

constexpr double kPi = std::numbers::pi;

bool has_data(unsigned mask, int slot) { return (mask >> slot) & 1u; }

int ancilla_for(int slot) { return slot < 2 ? kA1 : kA2; }

// Max deviation of a from b after removing the best global phase.
double phase_deviation(const DenseOperator& a, const DenseOperator& b) {
  Eigen::Index r = 0, c = 0;
  b.matrix().cwiseAbs().maxCoeff(&r, &c);
  const cplx ratio = a.matrix()(r, c) / b.matrix()(r, c);
  const cplx phi = ratio / std::abs(ratio);
  return (a.matrix() - phi * b.matrix()).cwiseAbs().maxCoeff();
}

// Wraps an angle into (-pi, pi].
double wrap(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a <= -kPi) a += 2 * kPi;
  if (a > kPi) a -= 2 * kPi;
  return a;
}

}  // namespace

std::string to_string(CheckBasis b) { return b == CheckBasis::x ? "X" : "Z"; }

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::init_singlet: return "init_singlet";
    case GateKind::y_rot: return "y_rot";
    case GateKind::z_rot: return "z_rot";
    case GateKind::s_interaction: return "s_interaction";
    case GateKind::sqrt_swap: return "sqrt_swap";
    case GateKind::readout_st: return "readout_st";
  }
  return "?";
}

std::size_t CheckCircuit::count(GateKind k) const {
  return static_cast<std::size_t>(
      std::count_if(locations.begin(), locations.end(), [k](const GateLocation& l) { return l.kind == k; }));
}

std::size_t CheckCircuit::cz_block_count() const {
  int top = -1;
  for (const auto& l : locations) top = std::max(top, l.block);
  return static_cast<std::size_t>(top + 1);
}

std::size_t CheckCircuit::explicit_z_count() const { return count(GateKind::z_rot); }

std::size_t CheckCircuit::data_single_qubit_gate_count() const {
  std::size_t n = 0;
  for (const auto& l : locations)
    if ((l.kind == GateKind::y_rot || l.kind == GateKind::z_rot) && l.qubits.front() < kA1) ++n;
  return n;
}

std::vector<std::size_t> CheckCircuit::block_locations(int block) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < locations.size(); ++i)
    if (locations[i].block == block) out.push_back(i);
  return out;
}

CheckCircuit build_literal_check_circuit(CheckBasis basis, GateFlavour flavour, unsigned data_mask) {
  if (data_mask == 0 || data_mask > kAllData) throw std::invalid_argument("check circuit: bad data mask");
  CheckCircuit c;
  c.basis = basis;
  c.flavour = flavour;
  c.data_mask = data_mask;
  auto& locs = c.locations;
  locs.push_back({GateKind::init_singlet, {kA1, kA2}});
  if (basis == CheckBasis::x)
    for (int s = 0; s < 4; ++s)
      if (has_data(data_mask, s)) locs.push_back({GateKind::y_rot, {s}, s < 2 ? 1 : 2, 0, -kPi / 2});
  int block = 0;
  for (int stage = 1; stage <= 2; ++stage) {
    for (int half = 1; half <= 2; ++half) {
      const int d = (half - 1) * 2 + (stage - 1);
      if (!has_data(data_mask, d)) continue;
      const int a = ancilla_for(d);
      auto add = [&](GateKind k, std::vector<int> q, double angle = 0, bool bracketed = false) {
        GateLocation l{k, std::move(q), half, stage, angle};
        l.bracketed = bracketed;
        l.block = block;
        locs.push_back(l);
      };
      if (flavour == GateFlavour::s_gate) {
        add(GateKind::z_rot, {d}, kPi / 2);
        add(GateKind::z_rot, {a}, kPi / 2);
        add(GateKind::s_interaction, {d, a});
      } else {
        add(GateKind::z_rot, {d}, kPi / 2);
        add(GateKind::z_rot, {a}, -kPi / 2);
        add(GateKind::sqrt_swap, {d, a});
        add(GateKind::z_rot, {d}, kPi, true);
        add(GateKind::sqrt_swap, {d, a});
      }
      ++block;
    }
  }
  if (basis == CheckBasis::x)
    for (int s = 0; s < 4; ++s)
      if (has_data(data_mask, s)) locs.push_back({GateKind::y_rot, {s}, s < 2 ? 1 : 2, 0, kPi / 2});
  locs.push_back({GateKind::readout_st, {kA1, kA2}});
  return c;
}

CheckCircuit apply_virtual_z_compilation(const CheckCircuit& literal) {
  CheckCircuit out = literal;
  out.locations.clear();
  double frame[kCheckQubits] = {0, 0, 0, 0, 0, 0};
  for (const auto& l : literal.locations) {
    if (l.kind == GateKind::z_rot && !l.bracketed) {
      frame[l.qubits.front()] += l.angle;
      continue;
    }
    GateLocation copy = l;
    if (l.kind == GateKind::y_rot) copy.frame += frame[l.qubits.front()];
    out.locations.push_back(copy);
  }
  const double asym = wrap(frame[kA1] - frame[kA2]);
  if (std::abs(asym) < 1e-12) {
  } else if (std::abs(std::abs(asym) - kPi) < 1e-12) {
    out.readout_inverted = !out.readout_inverted;
  } else {
    throw std::logic_error("virtual Z compilation: ancilla rotations are not a Pauli");
  }

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Eigen::Vector2cd> states(4);
    for (auto& s : states) {
      s << cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng));
      s.normalize();
    }
    const double a = singlet_probability(literal, states);
    const double b = singlet_probability(out, states);
    if (std::abs(a - b) > 1e-9)
      throw std::logic_error("virtual Z compilation changed the singlet statistics");
  }
  return out;
}

CheckCircuit build_check_circuit(CheckBasis basis, GateFlavour flavour, unsigned data_mask) {
  return apply_virtual_z_compilation(build_literal_check_circuit(basis, flavour, data_mask));
}

DenseOperator location_unitary(const GateLocation& loc) {
  switch (loc.kind) {
    case GateKind::y_rot:
      return gates::rz(-loc.frame) * gates::ry(loc.angle) * gates::rz(loc.frame);
    case GateKind::z_rot: return gates::rz(loc.angle);
    case GateKind::s_interaction: return gates::s_dipole();
    case GateKind::sqrt_swap: return gates::sqrt_swap();
    case GateKind::init_singlet:
    case GateKind::readout_st: return DenseOperator::identity(2);
  }
  throw std::logic_error("location_unitary: unknown kind");
}

DenseOperator circuit_unitary(const CheckCircuit& c) {
  DenseOperator u = DenseOperator::identity(kCheckQubits);
  for (const auto& l : c.locations) {
    if (l.kind == GateKind::init_singlet || l.kind == GateKind::readout_st) continue;
    std::vector<std::size_t> q(l.qubits.begin(), l.qubits.end());
    u = embed(location_unitary(l), q, kCheckQubits) * u;
  }
  return u;
}

double singlet_probability(const CheckCircuit& c, const std::vector<Eigen::Vector2cd>& data_states) {
  if (data_states.size() != 4) throw std::invalid_argument("singlet_probability: need 4 data states");
  Eigen::VectorXcd psi(1);
  psi(0) = 1;
  auto append = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(psi.size() * v.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) out.segment(i * v.size(), v.size()) = psi(i) * v;
    psi = out;
  };
  for (const auto& s : data_states) append(s);
  Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(4);
  singlet(1) = 1 / std::sqrt(2.0);
  singlet(2) = -1 / std::sqrt(2.0);
  append(singlet);
  psi = circuit_unitary(c).matrix() * psi;
  double p = 0;
  for (Eigen::Index b = 0; b < 16; ++b) {
    cplx amp = 0;
    for (Eigen::Index j = 0; j < 4; ++j) amp += std::conj(singlet(j)) * psi(b * 4 + j);
    p += std::norm(amp);
  }
  return c.readout_inverted ? 1 - p : p;
}

std::vector<IdentityCheck> verify_cz_decompositions(double tol) {
  using namespace gates;
  const DenseOperator target = cz();
  std::vector<IdentityCheck> out;
  auto check = [&](std::string name, const DenseOperator& a, const DenseOperator& b) {
    out.push_back({std::move(name), dense_equal_up_to_phase(a, b, tol), phase_deviation(a, b)});
  };
  const DenseOperator zz_outer = kron(rz(kPi / 2), rz(-kPi / 2));
  const DenseOperator zpi = kron(rz(kPi), DenseOperator::identity(1));
  check("sqrtswap CZ (time order)", sqrt_swap() * zpi * sqrt_swap() * zz_outer, target);
  check("sqrtswap CZ (product order)", zz_outer * sqrt_swap() * zpi * sqrt_swap(), target);
  check("S-gate CZ", kron(rz(kPi / 2), rz(kPi / 2)) * s_dipole(), target);
  const DenseOperator zz = DenseOperator::from_pauli(PauliString::from_string("ZZ"));
  check("S squared", s_dipole() * s_dipole(), zz);
  check("sqrtswap squared", sqrt_swap() * sqrt_swap(), swap());
  check("exp(-i pi/2 SWAP)", exp_hermitian(swap(), kPi / 2), swap());
  return out;
}

}  // namespace spinqec
