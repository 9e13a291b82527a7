#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace spinqec {

struct MatchingEdge {
  int u;
  int v;
  std::int64_t weight;
};

// Nodes 0..n_events-1 are detection events (round, plaquette); node
// n_events + i is the boundary copy of event i.
struct MatchingGraph {
  std::vector<std::pair<int, int>> events;
  std::vector<MatchingEdge> edges;

  int n_events() const { return static_cast<int>(events.size()); }
  int n_nodes() const { return 2 * n_events(); }
};

// General maximum-weight matching (Edmonds' blossom algorithm with dual
// updates, O(n^3)). Returns mate[v] or -1. With max_cardinality set, only
// maximum-cardinality matchings are considered.
std::vector<int> max_weight_matching(int n_nodes, const std::vector<MatchingEdge>& edges,
                                     bool max_cardinality);

// Minimum-weight perfect matching of an arbitrary graph. Throws
// std::logic_error if no perfect matching exists.
std::vector<int> min_weight_perfect_matching(int n_nodes, const std::vector<MatchingEdge>& edges);

// Minimum-weight perfect matching of a boundary-augmented graph, returned
// as mate per node.
std::vector<int> mwpm(const MatchingGraph& g);

std::int64_t matching_weight(const std::vector<MatchingEdge>& edges, const std::vector<int>& mate);

}  // namespace spinqec
