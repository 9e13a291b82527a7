#include "spinqec/decoder.hpp"

#include <array>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace spinqec {

MatchingGeometry::MatchingGeometry(const Lattice& l, CheckBasis basis, int max_dt, bool diagonals)
    : basis_(basis), n_(static_cast<int>(l.plaquettes(basis).size())) {
  max_dt_ = max_dt < 0 ? l.distance + 1 : max_dt;
  window_ = max_dt_ + l.distance + 1;
  layers_ = 2 * window_ + 1;
  nodes_ = static_cast<std::size_t>(n_ * layers_);
  const auto& ps = l.plaquettes(basis);
  std::array<int, 4> position{};
  for (int k = 0; k < 4; ++k) position[static_cast<std::size_t>(kColourSchedule[static_cast<std::size_t>(k)])] = k;

  std::vector<std::vector<int>> owners(l.n_data());
  for (const auto& p : ps)
    for (int q : p.data) owners[static_cast<std::size_t>(q)].push_back(p.id);
  // (neighbour, round shift, qubit); boundary edges use neighbour -1.
  std::vector<std::vector<std::array<int, 3>>> adj(static_cast<std::size_t>(n_));
  for (std::size_t q = 0; q < owners.size(); ++q) {
    const auto& o = owners[q];
    const int qi = static_cast<int>(q);
    if (o.size() == 2) {
      const int a = o[0], b = o[1];
      const int pa = position[static_cast<std::size_t>(ps[static_cast<std::size_t>(a)].colour)];
      const int pb = position[static_cast<std::size_t>(ps[static_cast<std::size_t>(b)].colour)];
      if (pa == pb) throw std::logic_error("MatchingGeometry: neighbouring plaquettes share a colour");
      adj[static_cast<std::size_t>(a)].push_back({b, 0, qi});
      adj[static_cast<std::size_t>(b)].push_back({a, 0, qi});
      if (diagonals) {
        adj[static_cast<std::size_t>(a)].push_back({b, pa < pb ? -1 : 1, qi});
        adj[static_cast<std::size_t>(b)].push_back({a, pb < pa ? -1 : 1, qi});
      }
    } else if (o.size() == 1) {
      adj[static_cast<std::size_t>(o[0])].push_back({-1, 0, qi});
    } else if (o.size() > 2) {
      throw std::logic_error("MatchingGeometry: data qubit in more than two plaquettes of one type");
    }
  }

  dist_.assign(static_cast<std::size_t>(n_) * nodes_, -1);
  prev_.assign(dist_.size(), -1);
  via_.assign(dist_.size(), -1);
  for (int s = 0; s < n_; ++s) {
    std::queue<std::pair<int, int>> bfs;
    dist_[slot(s, node(s, 0))] = 0;
    bfs.push({s, 0});
    while (!bfs.empty()) {
      const auto [v, t] = bfs.front();
      bfs.pop();
      const std::size_t vn = node(v, t);
      auto relax = [&](int w, int tw, int q) {
        if (tw < -window_ || tw > window_) return;
        const std::size_t wn = node(w, tw);
        if (dist_[slot(s, wn)] != -1) return;
        dist_[slot(s, wn)] = dist_[slot(s, vn)] + 1;
        prev_[slot(s, wn)] = static_cast<int>(vn);
        via_[slot(s, wn)] = q;
        bfs.push({w, tw});
      };
      relax(v, t - 1, -1);
      relax(v, t + 1, -1);
      for (const auto& [w, shift, q] : adj[static_cast<std::size_t>(v)])
        if (w >= 0) relax(w, t + shift, q);
    }
  }

  // Boundary distances are the same in every round.
  bdist_.assign(static_cast<std::size_t>(n_), -1);
  bprev_.assign(static_cast<std::size_t>(n_), -1);
  bvia_.assign(static_cast<std::size_t>(n_), -1);
  std::queue<int> bfs;
  for (int p = 0; p < n_; ++p)
    for (const auto& [w, shift, q] : adj[static_cast<std::size_t>(p)])
      if (w < 0 && bdist_[static_cast<std::size_t>(p)] == -1) {
        bdist_[static_cast<std::size_t>(p)] = 1;
        bvia_[static_cast<std::size_t>(p)] = q;
        bfs.push(p);
      }
  while (!bfs.empty()) {
    const int v = bfs.front();
    bfs.pop();
    for (const auto& [w, shift, q] : adj[static_cast<std::size_t>(v)]) {
      if (w < 0 || shift != 0 || bdist_[static_cast<std::size_t>(w)] != -1) continue;
      bdist_[static_cast<std::size_t>(w)] = bdist_[static_cast<std::size_t>(v)] + 1;
      bprev_[static_cast<std::size_t>(w)] = v;
      bvia_[static_cast<std::size_t>(w)] = q;
      bfs.push(w);
    }
  }
  for (int p = 0; p < n_; ++p)
    if (bdist_[static_cast<std::size_t>(p)] < 0) throw std::logic_error("MatchingGeometry: plaquette cut off from the boundary");
}

void MatchingGeometry::check_dt(int dt) const {
  if (dt < -max_dt_ || dt > max_dt_) throw std::out_of_range("MatchingGeometry: round separation beyond max_dt");
}

int MatchingGeometry::distance(int a, int b, int dt) const {
  check_dt(dt);
  return dist_[slot(a, node(b, dt))];
}

std::vector<int> MatchingGeometry::path(int a, int b, int dt) const {
  check_dt(dt);
  std::vector<int> out;
  const std::size_t target = node(a, 0);
  for (std::size_t v = node(b, dt); v != target; v = static_cast<std::size_t>(prev_[slot(a, v)])) {
    const int q = via_[slot(a, v)];
    if (q >= 0) out.push_back(q);
  }
  return out;
}

std::vector<int> MatchingGeometry::boundary_path(int a) const {
  std::vector<int> out;
  for (int v = a; v >= 0; v = bprev_[static_cast<std::size_t>(v)]) out.push_back(bvia_[static_cast<std::size_t>(v)]);
  return out;
}

std::int64_t event_distance(const MatchingGeometry& g, std::pair<int, int> a, std::pair<int, int> b) {
  return g.distance(a.second, b.second, b.first - a.first);
}

MatchingGraph build_matching_graph(const SyndromeGrid& g, const MatchingGeometry& geom) {
  MatchingGraph mg;
  mg.events = g.event_list();
  const int n = mg.n_events();
  for (int i = 0; i < n; ++i) {
    const std::int64_t bi = geom.boundary_distance(mg.events[static_cast<std::size_t>(i)].second);
    mg.edges.push_back({i, n + i, bi});
    for (int j = i + 1; j < n; ++j) {
      const std::int64_t bj = geom.boundary_distance(mg.events[static_cast<std::size_t>(j)].second);
      const std::int64_t w = event_distance(geom, mg.events[static_cast<std::size_t>(i)], mg.events[static_cast<std::size_t>(j)]);
      if (w < bi + bj) mg.edges.push_back({i, j, w});
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) mg.edges.push_back({n + i, n + j, 0});
  return mg;
}

MatchingGraph build_matching_graph(const SyndromeGrid& g, const Lattice& l, CheckBasis basis) {
  return build_matching_graph(g, MatchingGeometry(l, basis));
}

Decoder::Decoder(const Lattice& l, bool diagonals)
    : lattice_(l), x_geom_(l, CheckBasis::x, -1, diagonals), z_geom_(l, CheckBasis::z, -1, diagonals) {}

void Decoder::correct_basis(const SyndromeGrid& g, const MatchingGeometry& geom, std::vector<std::uint8_t>& out) const {
  const auto events = g.event_list();
  const int n = static_cast<int>(events.size());
  if (n == 0) return;
  auto flip_path = [&](const std::vector<int>& qs) {
    for (int q : qs) out[static_cast<std::size_t>(q)] ^= 1;
  };
  std::vector<std::int64_t> bd(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) bd[static_cast<std::size_t>(i)] = geom.boundary_distance(events[static_cast<std::size_t>(i)].second);

  // Union-find over the pruned event-event edges.
  std::vector<int> root(static_cast<std::size_t>(n));
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int v) {
    while (root[static_cast<std::size_t>(v)] != v) {
      root[static_cast<std::size_t>(v)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(v)])];
      v = root[static_cast<std::size_t>(v)];
    }
    return v;
  };
  std::vector<MatchingEdge> pair_edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::int64_t w = event_distance(geom, events[static_cast<std::size_t>(i)], events[static_cast<std::size_t>(j)]);
      if (w < bd[static_cast<std::size_t>(i)] + bd[static_cast<std::size_t>(j)]) {
        pair_edges.push_back({i, j, w});
        root[static_cast<std::size_t>(find(i))] = find(j);
      }
    }
  std::vector<std::vector<int>> comps(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) comps[static_cast<std::size_t>(find(i))].push_back(i);

  auto apply_pair = [&](int a, int b) {
    const auto& ea = events[static_cast<std::size_t>(a)];
    const auto& eb = events[static_cast<std::size_t>(b)];
    flip_path(geom.path(ea.second, eb.second, eb.first - ea.first));
  };
  auto apply_boundary = [&](int a) { flip_path(geom.boundary_path(events[static_cast<std::size_t>(a)].second)); };

  std::vector<int> local(static_cast<std::size_t>(n), -1);
  for (const auto& comp : comps) {
    const int k = static_cast<int>(comp.size());
    if (k == 0) continue;
    if (k == 1) {
      apply_boundary(comp[0]);
      continue;
    }
    if (k == 2) {
      // Connected, so the direct edge beats both boundary edges.
      apply_pair(comp[0], comp[1]);
      continue;
    }
    for (int i = 0; i < k; ++i) local[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = i;
    std::vector<MatchingEdge> edges;
    for (int i = 0; i < k; ++i) edges.push_back({i, k + i, bd[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])]});
    for (const auto& e : pair_edges) {
      const int lu = local[static_cast<std::size_t>(e.u)];
      if (lu < 0 || find(e.u) != find(comp[0])) continue;
      edges.push_back({lu, local[static_cast<std::size_t>(e.v)], e.weight});
    }
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) edges.push_back({k + i, k + j, 0});
    const auto mate = min_weight_perfect_matching(2 * k, edges);
    for (int i = 0; i < k; ++i) {
      const int m = mate[static_cast<std::size_t>(i)];
      if (m >= k) {
        if (m != k + i) throw std::logic_error("decoder: event matched to a foreign boundary copy");
        apply_boundary(comp[static_cast<std::size_t>(i)]);
      } else if (m > i) {
        apply_pair(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(m)]);
      }
    }
    for (int v : comp) local[static_cast<std::size_t>(v)] = -1;
  }
}

PauliFrame Decoder::correction(const ShotRecord& rec) const {
  PauliFrame c(lattice_.n_data());
  correct_basis(rec.z_grid, z_geom_, c.x);
  correct_basis(rec.x_grid, x_geom_, c.z);
  return c;
}

ShotOutcome adjudicate(const PauliFrame& frame, const PauliFrame& correction, const Lattice& l) {
  if (frame.size() != l.n_data() || correction.size() != l.n_data())
    throw std::invalid_argument("adjudicate: frame size mismatch");
  PauliFrame f = frame;
  for (std::size_t q = 0; q < f.size(); ++q) {
    f.x[q] ^= correction.x[q];
    f.z[q] ^= correction.z[q];
  }
  for (CheckBasis b : {CheckBasis::x, CheckBasis::z})
    for (const auto& p : l.plaquettes(b))
      if (frame_parity(f, p)) throw std::logic_error("adjudicate: corrected frame violates a stabiliser");
  ShotOutcome out;
  std::uint8_t xl = 0, zl = 0;
  for (int q : l.logical_z_support) xl ^= f.x[static_cast<std::size_t>(q)];
  for (int q : l.logical_x_support) zl ^= f.z[static_cast<std::size_t>(q)];
  out.logical_x_failed = xl != 0;
  out.logical_z_failed = zl != 0;
  return out;
}

}  // namespace spinqec
