#include "spinqec/lattice.hpp"

#include <stdexcept>

namespace spinqec {

unsigned Plaquette::slot_mask() const {
  unsigned m = 0;
  for (int s = 0; s < 4; ++s)
    if (slots[static_cast<std::size_t>(s)] >= 0) m |= 1u << s;
  return m;
}

Lattice build_lattice(int d) {
  if (d < 3 || d % 2 == 0) throw std::invalid_argument("build_lattice: distance must be odd and >= 3");
  Lattice l;
  l.distance = d;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) l.data_qubits.push_back({r * d + c, r, c});

  auto in_bounds = [d](int r, int c) { return r >= 0 && r < d && c >= 0 && c < d; };
  for (int i = -1; i <= d - 1; ++i) {
    for (int j = -1; j <= d - 1; ++j) {
      const bool is_x = ((i + j) % 2 + 2) % 2 == 0;
      const bool row_edge = i == -1 || i == d - 1;
      const bool col_edge = j == -1 || j == d - 1;
      if (row_edge && col_edge) continue;
      // Weight-2 X cells sit on the top and bottom edges, Z cells on the sides.
      if (row_edge && !is_x) continue;
      if (col_edge && is_x) continue;
      const int nw = in_bounds(i, j) ? i * d + j : -1;
      const int ne = in_bounds(i, j + 1) ? i * d + j + 1 : -1;
      const int sw = in_bounds(i + 1, j) ? (i + 1) * d + j : -1;
      const int se = in_bounds(i + 1, j + 1) ? (i + 1) * d + j + 1 : -1;
      Plaquette p;
      p.basis = is_x ? CheckBasis::x : CheckBasis::z;
      p.row = i;
      p.col = j;
      // Each half pairs two qubits along the direction transverse to the
      // same-type logical operator.
      p.slots = is_x ? std::array<int, 4>{nw, ne, sw, se} : std::array<int, 4>{nw, sw, ne, se};
      for (int q : p.slots)
        if (q >= 0) p.data.push_back(q);
      p.colour = 2 * (i & 1) + (j & 1);
      p.boundary = row_edge || col_edge;
      auto& list = is_x ? l.x_plaquettes : l.z_plaquettes;
      p.id = static_cast<int>(list.size());
      list.push_back(p);
    }
  }
  for (int c = 0; c < d; ++c) l.logical_z_support.push_back(c);
  for (int r = 0; r < d; ++r) l.logical_x_support.push_back(r * d);
  return l;
}

std::vector<int> partition_plaquettes(const Lattice& l) {
  std::vector<int> out;
  for (const auto& p : l.x_plaquettes) out.push_back(p.colour);
  for (const auto& p : l.z_plaquettes) out.push_back(p.colour);
  return out;
}

nlohmann::json Lattice::to_json() const {
  nlohmann::json j;
  j["distance"] = distance;
  j["data_qubits"] = nlohmann::json::array();
  for (const auto& q : data_qubits) j["data_qubits"].push_back({{"index", q.index}, {"row", q.row}, {"col", q.col}});
  auto dump = [](const std::vector<Plaquette>& ps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : ps)
      arr.push_back({{"id", p.id},
                     {"row", p.row},
                     {"col", p.col},
                     {"data", p.data},
                     {"slots", p.slots},
                     {"colour", p.colour},
                     {"boundary", p.boundary}});
    return arr;
  };
  j["x_plaquettes"] = dump(x_plaquettes);
  j["z_plaquettes"] = dump(z_plaquettes);
  j["logical_x_support"] = logical_x_support;
  j["logical_z_support"] = logical_z_support;
  j["colour_schedule"] = kColourSchedule;
  return j;
}

}  // namespace spinqec
