#pragma once

#include <vector>

#include "spinqec/lattice.hpp"
#include "spinqec/matching.hpp"
#include "spinqec/sampler.hpp"

namespace spinqec {

// Shortest paths on the space-time graph of one check type. Each data qubit
// shared by two same-type plaquettes gives a space edge within a round and a
// diagonal edge joining the earlier-scheduled plaquette in round r + 1 to the
// later one in round r; a data fault landing between the two checks of a
// round produces exactly that pair. Time edges join consecutive rounds of
// one plaquette. All edges have unit weight. Qubits in a single plaquette of
// the type connect it to the boundary.
class MatchingGeometry {
 public:
  // max_dt bounds the round separation of queried pairs; negative means
  // distance + 1 rounds. Without diagonals the graph is the plain cubic one.
  MatchingGeometry(const Lattice& l, CheckBasis basis, int max_dt = -1, bool diagonals = true);

  CheckBasis basis() const { return basis_; }
  int n_plaquettes() const { return n_; }
  int max_dt() const { return max_dt_; }
  // dt is the round of b minus the round of a.
  int distance(int a, int b, int dt = 0) const;
  int boundary_distance(int a) const { return bdist_[static_cast<std::size_t>(a)]; }
  // Data qubits along a shortest path; time steps contribute none.
  std::vector<int> path(int a, int b, int dt = 0) const;
  std::vector<int> boundary_path(int a) const;

 private:
  std::size_t node(int p, int t) const { return static_cast<std::size_t>(p * layers_ + t + window_); }
  std::size_t slot(int src, std::size_t nd) const { return static_cast<std::size_t>(src) * nodes_ + nd; }
  void check_dt(int dt) const;

  CheckBasis basis_;
  int n_;
  int max_dt_;
  int window_;
  int layers_;
  std::size_t nodes_;
  std::vector<int> dist_;  // per source plaquette at t = 0
  std::vector<int> prev_;
  std::vector<int> via_;
  std::vector<int> bdist_;
  std::vector<int> bprev_;
  std::vector<int> bvia_;
};

std::int64_t event_distance(const MatchingGeometry& g, std::pair<int, int> a, std::pair<int, int> b);

// Complete graph on events plus boundary copies. Event pairs whose direct
// weight is not below the sum of their boundary weights are omitted; they can
// never beat matching both to the boundary.
MatchingGraph build_matching_graph(const SyndromeGrid& g, const MatchingGeometry& geom);
MatchingGraph build_matching_graph(const SyndromeGrid& g, const Lattice& l, CheckBasis basis);

struct ShotOutcome {
  bool logical_x_failed = false;
  bool logical_z_failed = false;
  int event_count = 0;

  bool failed() const { return logical_x_failed || logical_z_failed; }
};

class Decoder {
 public:
  explicit Decoder(const Lattice& l, bool diagonals = true);

  // Correction frame for both syndrome types. Z-check events yield X
  // corrections, X-check events yield Z corrections.
  PauliFrame correction(const ShotRecord& rec) const;
  // Matches one basis's events; splits the graph into independent
  // components first.
  void correct_basis(const SyndromeGrid& g, const MatchingGeometry& geom, std::vector<std::uint8_t>& out) const;

  const MatchingGeometry& geometry(CheckBasis b) const { return b == CheckBasis::x ? x_geom_ : z_geom_; }

 private:
  const Lattice& lattice_;
  MatchingGeometry x_geom_;
  MatchingGeometry z_geom_;
};

// Applies the correction and checks the result. Throws std::logic_error if
// the corrected frame anticommutes with any stabiliser.
ShotOutcome adjudicate(const PauliFrame& frame, const PauliFrame& correction, const Lattice& l);

}  // namespace spinqec
