#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spinqec/dense.hpp"
#include "spinqec/device.hpp"

namespace spinqec {

enum class CheckBasis { x, z };

std::string to_string(CheckBasis b);

// Register layout shared by every check: four data slots then the two
// ancilla spins. Half 1 couples a1 to d1 then d2; half 2 couples a2 to d3
// then d4.
enum Role : int { kD1 = 0, kD2 = 1, kD3 = 2, kD4 = 3, kA1 = 4, kA2 = 5 };
inline constexpr std::size_t kCheckQubits = 6;
inline constexpr unsigned kAllData = 0xF;

enum class GateKind { init_singlet, y_rot, z_rot, s_interaction, sqrt_swap, readout_st };

std::string to_string(GateKind k);

struct GateLocation {
  GateKind kind;
  // Roles touched. Two-qubit interactions list (data, ancilla).
  std::vector<int> qubits;
  int half = 0;        // 0 for joint ancilla operations
  int stage = 0;       // 1 or 2 inside a half's CZ sequence
  double angle = 0;    // rotation angle for y_rot / z_rot
  double frame = 0;    // rotating-frame offset picked up from virtual Z gates
  bool bracketed = false;  // the Z_pi between two sqrt_swaps
  int block = -1;      // CZ block index, -1 outside blocks
};

struct CheckCircuit {
  CheckBasis basis = CheckBasis::z;
  GateFlavour flavour = GateFlavour::s_gate;
  unsigned data_mask = kAllData;
  // Net Z_pi left on one ancilla spin after dropping symmetric rotations;
  // swaps the singlet and triplet outcomes.
  bool readout_inverted = false;
  std::vector<GateLocation> locations;

  std::size_t count(GateKind k) const;
  std::size_t cz_block_count() const;
  std::size_t explicit_z_count() const;
  std::size_t data_single_qubit_gate_count() const;
  std::vector<std::size_t> block_locations(int block) const;
};

// The check with every Z rotation of the CZ decompositions written out.
CheckCircuit build_literal_check_circuit(CheckBasis basis, GateFlavour flavour,
                                         unsigned data_mask = kAllData);

// Moves data Z rotations into the rotating frame and drops the ancilla
// rotations that act symmetrically on the singlet pair. Throws if the
// singlet probability of the result differs from the input on random
// product data states.
CheckCircuit apply_virtual_z_compilation(const CheckCircuit& literal);

CheckCircuit build_check_circuit(CheckBasis basis, GateFlavour flavour,
                                 unsigned data_mask = kAllData);

// Dense unitary of one location on its own qubits (data first).
DenseOperator location_unitary(const GateLocation& loc);
// Dense unitary of everything between initialisation and readout.
DenseOperator circuit_unitary(const CheckCircuit& c);
// Probability of the singlet outcome for the given data product state.
double singlet_probability(const CheckCircuit& c, const std::vector<Eigen::Vector2cd>& data_states);

struct IdentityCheck {
  std::string name;
  bool passed;
  double max_deviation;
};

std::vector<IdentityCheck> verify_cz_decompositions(double tol = 1e-10);

}  // namespace spinqec
