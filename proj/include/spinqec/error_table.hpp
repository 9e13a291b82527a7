#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinqec/circuit.hpp"
#include "spinqec/device.hpp"
#include "spinqec/pauli.hpp"

namespace spinqec {

enum class LeakModel { worst_case, refined };

std::string to_string(LeakModel m);
LeakModel leak_model_from_string(const std::string& s);

struct ErrorModelParams {
  double p1 = 0;
  double p2 = 0;
  double p_readout = 0;
  double p_leak = 0;
  GateFlavour flavour = GateFlavour::s_gate;
  LeakModel leak_model = LeakModel::worst_case;

  // p1 = p2 / 10 and p_readout = p2.
  static ErrorModelParams standard(double p2, double p_leak, GateFlavour flavour,
                                    LeakModel model = LeakModel::worst_case);
  void validate() const;
};

// Which qubits of one half are depolarised after a charge-leakage event.
struct LeakagePattern {
  bool ancilla = false;
  bool first_data = false;   // data qubit of stage 1
  bool second_data = false;  // data qubit of stage 2
  double probability = 0;

  std::string label() const;
};

// Patterns for a half with both stages present. Identical patterns merged.
std::vector<LeakagePattern> leakage_event_table(double p_leak, LeakModel model);
// Patterns for a half with the given number of CZ stages (0, 1 or 2).
std::vector<LeakagePattern> leakage_event_table(double p_leak, LeakModel model, int stages);

// Probability distribution over Pauli strings (letters only; phases dropped).
using PauliDistribution = std::vector<std::pair<PauliString, double>>;

// An independent error source: a Pauli channel acting right after a
// location (location == npos means just before readout).
struct ErrorSource {
  std::size_t location;
  std::string label;
  PauliDistribution channel;  // non-identity terms only, on the 6-qubit register
};

std::vector<ErrorSource> error_sources(const CheckCircuit& c, const ErrorModelParams& params);

// Pushes a Pauli injected right after `location` to the end of the check.
// CZ blocks are Clifford and are applied symplectically; a fault inside a
// block is first pushed through the rest of the block on the dense oracle
// and Pauli-twirled.
PauliDistribution propagate_to_end(const CheckCircuit& c, std::size_t location, const PauliString& err);

struct ErrorTableEntry {
  PauliString data_pauli;  // 4 data slots
  bool parity_flip = false;
  double probability = 0;
};

struct ErrorTable {
  CheckBasis basis = CheckBasis::z;
  unsigned data_mask = kAllData;
  std::vector<ErrorTableEntry> entries;

  double total() const;
  double probability_of(const std::string& data_letters, bool flip) const;
  nlohmann::json to_json() const;
  static ErrorTable from_json(const nlohmann::json& j);
};

// Letters differ on the two ancilla spins (phase ignored).
bool ancilla_pair_flips_parity(const PauliString& six_qubit);

ErrorTable compile_error_table(const CheckCircuit& c, const ErrorModelParams& params);

}  // namespace spinqec
