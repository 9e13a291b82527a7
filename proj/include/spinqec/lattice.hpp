#pragma once

#include <array>
#include <vector>

#include <json.hpp>

#include "spinqec/circuit.hpp"

namespace spinqec {

struct DataQubit {
  int index;
  int row;
  int col;
};

struct Plaquette {
  int id;  // position in its basis list
  CheckBasis basis;
  // Top-left corner of the 2x2 cell; -1 or d-1 for boundary cells.
  int row;
  int col;
  // Data index wired to each circuit slot d1..d4, -1 when absent.
  std::array<int, 4> slots;
  std::vector<int> data;
  int colour;
  bool boundary;

  unsigned slot_mask() const;
};

struct Lattice {
  int distance = 0;
  std::vector<DataQubit> data_qubits;
  std::vector<Plaquette> x_plaquettes;
  std::vector<Plaquette> z_plaquettes;
  std::vector<int> logical_x_support;
  std::vector<int> logical_z_support;

  std::size_t n_data() const { return data_qubits.size(); }
  int data_index(int row, int col) const { return row * distance + col; }
  const std::vector<Plaquette>& plaquettes(CheckBasis b) const {
    return b == CheckBasis::x ? x_plaquettes : z_plaquettes;
  }
  nlohmann::json to_json() const;
};

// Colours in the order the four partitions are measured each round.
inline constexpr std::array<int, 4> kColourSchedule = {0, 1, 3, 2};

// Rotated planar code. Data qubit (r, c) has index r*d + c. Logical Z runs
// along row 0 and logical X down column 0.
Lattice build_lattice(int d);

// Colour of every plaquette, X plaquettes first then Z plaquettes.
std::vector<int> partition_plaquettes(const Lattice& l);

}  // namespace spinqec
