#include "spinqec/matching.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace spinqec {

namespace {

// Port of the classic primal-dual blossom formulation (Galil's exposition,
// as popularised by J. van Rantwijk's mwmatching). Edge weights are integers
// and every slack stays even, so all arithmetic is exact.
class Blossom {
 public:
  Blossom(int n, const std::vector<MatchingEdge>& edges, bool max_cardinality)
      : nv_(n), edges_(edges), maxcard_(max_cardinality) {}

  std::vector<int> solve();

 private:
  using i64 = std::int64_t;

  i64 slack(int k) const {
    const auto& e = edges_[static_cast<std::size_t>(k)];
    return dual_[e.u] + dual_[e.v] - 2 * e.weight;
  }
  int endpoint(int p) const {
    const auto& e = edges_[static_cast<std::size_t>(p / 2)];
    return (p % 2 == 0) ? e.u : e.v;
  }

  void leaves(int b, std::vector<int>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (int t : childs_[b]) leaves(t, out);
  }
  std::vector<int> leaves(int b) const {
    std::vector<int> out;
    leaves(b, out);
    return out;
  }

  void assign_label(int w, int t, int p);
  int scan_blossom(int v, int w);
  void add_blossom(int base, int k);
  void expand_blossom(int b, bool endstage);
  void augment_blossom(int b, int v);
  void augment_matching(int k);

  int nv_;
  const std::vector<MatchingEdge>& edges_;
  bool maxcard_;

  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_, label_, labelend_, inblossom_, parent_, base_, bestedge_;
  std::vector<std::vector<int>> childs_, endps_;
  std::vector<std::vector<int>> bestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<int> unused_;
  std::vector<i64> dual_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

void Blossom::assign_label(int w, int t, int p) {
  const int b = inblossom_[w];
  label_[w] = label_[b] = t;
  labelend_[w] = labelend_[b] = p;
  bestedge_[w] = bestedge_[b] = -1;
  if (t == 1) {
    leaves(b, queue_);
  } else if (t == 2) {
    const int base = base_[b];
    assign_label(endpoint(mate_[base]), 1, mate_[base] ^ 1);
  }
}

int Blossom::scan_blossom(int v, int w) {
  std::vector<int> path;
  int base = -1;
  while (v != -1 || w != -1) {
    int b = inblossom_[v];
    if (label_[b] & 4) {
      base = base_[b];
      break;
    }
    path.push_back(b);
    label_[b] = 5;
    if (labelend_[b] == -1) {
      v = -1;
    } else {
      v = endpoint(labelend_[b]);
      b = inblossom_[v];
      v = endpoint(labelend_[b]);
    }
    if (w != -1) std::swap(v, w);
  }
  for (int b : path) label_[b] = 1;
  return base;
}

void Blossom::add_blossom(int base, int k) {
  int v = edges_[static_cast<std::size_t>(k)].u;
  int w = edges_[static_cast<std::size_t>(k)].v;
  const int bb = inblossom_[base];
  int bv = inblossom_[v];
  int bw = inblossom_[w];
  const int b = unused_.back();
  unused_.pop_back();
  base_[b] = base;
  parent_[b] = -1;
  parent_[bb] = b;
  auto& path = childs_[b];
  auto& endps = endps_[b];
  path.clear();
  endps.clear();
  while (bv != bb) {
    parent_[bv] = b;
    path.push_back(bv);
    endps.push_back(labelend_[bv]);
    v = endpoint(labelend_[bv]);
    bv = inblossom_[v];
  }
  path.push_back(bb);
  std::reverse(path.begin(), path.end());
  std::reverse(endps.begin(), endps.end());
  endps.push_back(2 * k);
  while (bw != bb) {
    parent_[bw] = b;
    path.push_back(bw);
    endps.push_back(labelend_[bw] ^ 1);
    w = endpoint(labelend_[bw]);
    bw = inblossom_[w];
  }
  label_[b] = 1;
  labelend_[b] = labelend_[bb];
  dual_[b] = 0;
  for (int leaf : leaves(b)) {
    if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
    inblossom_[leaf] = b;
  }
  std::vector<int> bestedgeto(static_cast<std::size_t>(2 * nv_), -1);
  for (int sub : path) {
    std::vector<std::vector<int>> nblists;
    if (!has_bestedges_[sub]) {
      for (int leaf : leaves(sub)) {
        std::vector<int> lst;
        for (int p : neighbend_[leaf]) lst.push_back(p / 2);
        nblists.push_back(std::move(lst));
      }
    } else {
      nblists.push_back(bestedges_[sub]);
    }
    for (const auto& lst : nblists) {
      for (int kk : lst) {
        int i = edges_[static_cast<std::size_t>(kk)].u;
        int j = edges_[static_cast<std::size_t>(kk)].v;
        if (inblossom_[j] == b) std::swap(i, j);
        const int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
          bestedgeto[bj] = kk;
      }
    }
    bestedges_[sub].clear();
    has_bestedges_[sub] = false;
    bestedge_[sub] = -1;
  }
  bestedges_[b].clear();
  for (int kk : bestedgeto)
    if (kk != -1) bestedges_[b].push_back(kk);
  has_bestedges_[b] = true;
  bestedge_[b] = -1;
  for (int kk : bestedges_[b])
    if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
}

void Blossom::expand_blossom(int b, bool endstage) {
  const std::vector<int> children = childs_[b];
  for (int s : children) {
    parent_[s] = -1;
    if (s < nv_) {
      inblossom_[s] = s;
    } else if (endstage && dual_[s] == 0) {
      expand_blossom(s, endstage);
    } else {
      for (int leaf : leaves(s)) inblossom_[leaf] = s;
    }
  }
  if (!endstage && label_[b] == 2) {
    const auto& ch = childs_[b];
    const auto& ep = endps_[b];
    const int len = static_cast<int>(ch.size());
    auto at = [len](const std::vector<int>& vec, int idx) { return vec[static_cast<std::size_t>(((idx % len) + len) % len)]; };
    const int entrychild = inblossom_[endpoint(labelend_[b] ^ 1)];
    int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
    int jstep, endptrick;
    if (j & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    int p = labelend_[b];
    while (j != 0) {
      label_[endpoint(p ^ 1)] = 0;
      label_[endpoint(at(ep, j - endptrick) ^ endptrick ^ 1)] = 0;
      assign_label(endpoint(p ^ 1), 2, p);
      allowedge_[static_cast<std::size_t>(at(ep, j - endptrick) / 2)] = true;
      j += jstep;
      p = at(ep, j - endptrick) ^ endptrick;
      allowedge_[static_cast<std::size_t>(p / 2)] = true;
      j += jstep;
    }
    int bv = at(ch, j);
    label_[endpoint(p ^ 1)] = label_[bv] = 2;
    labelend_[endpoint(p ^ 1)] = labelend_[bv] = p;
    bestedge_[bv] = -1;
    j += jstep;
    while (at(ch, j) != entrychild) {
      bv = at(ch, j);
      if (label_[bv] == 1) {
        j += jstep;
        continue;
      }
      int found = -1;
      for (int leaf : leaves(bv))
        if (label_[leaf] != 0) {
          found = leaf;
          break;
        }
      if (found != -1) {
        label_[found] = 0;
        label_[endpoint(mate_[base_[bv]])] = 0;
        assign_label(found, 2, labelend_[found]);
      }
      j += jstep;
    }
  }
  label_[b] = labelend_[b] = -1;
  childs_[b].clear();
  endps_[b].clear();
  base_[b] = -1;
  bestedges_[b].clear();
  has_bestedges_[b] = false;
  bestedge_[b] = -1;
  unused_.push_back(b);
}

void Blossom::augment_blossom(int b, int v) {
  int t = v;
  while (parent_[t] != b) t = parent_[t];
  if (t >= nv_) augment_blossom(t, v);
  auto& ch = childs_[b];
  auto& ep = endps_[b];
  const int len = static_cast<int>(ch.size());
  auto at = [len](const std::vector<int>& vec, int idx) { return vec[static_cast<std::size_t>(((idx % len) + len) % len)]; };
  const int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
  int j = i;
  int jstep, endptrick;
  if (i & 1) {
    j -= len;
    jstep = 1;
    endptrick = 0;
  } else {
    jstep = -1;
    endptrick = 1;
  }
  while (j != 0) {
    j += jstep;
    t = at(ch, j);
    const int p = at(ep, j - endptrick) ^ endptrick;
    if (t >= nv_) augment_blossom(t, endpoint(p));
    j += jstep;
    t = at(ch, j);
    if (t >= nv_) augment_blossom(t, endpoint(p ^ 1));
    mate_[endpoint(p)] = p ^ 1;
    mate_[endpoint(p ^ 1)] = p;
  }
  std::rotate(ch.begin(), ch.begin() + i, ch.end());
  std::rotate(ep.begin(), ep.begin() + i, ep.end());
  base_[b] = base_[ch.front()];
}

void Blossom::augment_matching(int k) {
  const int v = edges_[static_cast<std::size_t>(k)].u;
  const int w = edges_[static_cast<std::size_t>(k)].v;
  for (auto [s, p] : {std::pair<int, int>{v, 2 * k + 1}, std::pair<int, int>{w, 2 * k}}) {
    while (true) {
      const int bs = inblossom_[s];
      if (bs >= nv_) augment_blossom(bs, s);
      mate_[s] = p;
      if (labelend_[bs] == -1) break;
      const int t = endpoint(labelend_[bs]);
      const int bt = inblossom_[t];
      s = endpoint(labelend_[bt]);
      const int j = endpoint(labelend_[bt] ^ 1);
      if (bt >= nv_) augment_blossom(bt, j);
      mate_[j] = labelend_[bt];
      p = labelend_[bt] ^ 1;
    }
  }
}

std::vector<int> Blossom::solve() {
  const int n = nv_;
  const int ne = static_cast<int>(edges_.size());
  if (n == 0) return {};
  i64 maxweight = 0;
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v)
      throw std::invalid_argument("matching: bad edge");
    maxweight = std::max(maxweight, e.weight);
  }
  neighbend_.assign(static_cast<std::size_t>(n), {});
  for (int k = 0; k < ne; ++k) {
    neighbend_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(k)].u)].push_back(2 * k + 1);
    neighbend_[static_cast<std::size_t>(edges_[static_cast<std::size_t>(k)].v)].push_back(2 * k);
  }
  mate_.assign(static_cast<std::size_t>(n), -1);
  label_.assign(static_cast<std::size_t>(2 * n), 0);
  labelend_.assign(static_cast<std::size_t>(2 * n), -1);
  inblossom_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) inblossom_[static_cast<std::size_t>(i)] = i;
  parent_.assign(static_cast<std::size_t>(2 * n), -1);
  childs_.assign(static_cast<std::size_t>(2 * n), {});
  endps_.assign(static_cast<std::size_t>(2 * n), {});
  base_.assign(static_cast<std::size_t>(2 * n), -1);
  for (int i = 0; i < n; ++i) base_[static_cast<std::size_t>(i)] = i;
  bestedge_.assign(static_cast<std::size_t>(2 * n), -1);
  bestedges_.assign(static_cast<std::size_t>(2 * n), {});
  has_bestedges_.assign(static_cast<std::size_t>(2 * n), false);
  unused_.clear();
  for (int i = 2 * n - 1; i >= n; --i) unused_.push_back(i);
  std::reverse(unused_.begin(), unused_.end());
  dual_.assign(static_cast<std::size_t>(2 * n), 0);
  for (int i = 0; i < n; ++i) dual_[static_cast<std::size_t>(i)] = maxweight;
  allowedge_.assign(static_cast<std::size_t>(ne), false);

  for (int stage = 0; stage < n; ++stage) {
    std::fill(label_.begin(), label_.end(), 0);
    std::fill(bestedge_.begin(), bestedge_.end(), -1);
    for (int b = n; b < 2 * n; ++b) {
      bestedges_[static_cast<std::size_t>(b)].clear();
      has_bestedges_[static_cast<std::size_t>(b)] = false;
    }
    std::fill(allowedge_.begin(), allowedge_.end(), false);
    queue_.clear();
    for (int v = 0; v < n; ++v)
      if (mate_[static_cast<std::size_t>(v)] == -1 && label_[static_cast<std::size_t>(inblossom_[static_cast<std::size_t>(v)])] == 0)
        assign_label(v, 1, -1);
    bool augmented = false;
    while (true) {
      while (!queue_.empty() && !augmented) {
        const int v = queue_.back();
        queue_.pop_back();
        for (int p : neighbend_[static_cast<std::size_t>(v)]) {
          const int k = p / 2;
          const int w = endpoint(p);
          if (inblossom_[v] == inblossom_[w]) continue;
          i64 kslack = 0;
          if (!allowedge_[static_cast<std::size_t>(k)]) {
            kslack = slack(k);
            if (kslack <= 0) allowedge_[static_cast<std::size_t>(k)] = true;
          }
          if (allowedge_[static_cast<std::size_t>(k)]) {
            if (label_[inblossom_[w]] == 0) {
              assign_label(w, 2, p ^ 1);
            } else if (label_[inblossom_[w]] == 1) {
              const int base = scan_blossom(v, w);
              if (base >= 0) {
                add_blossom(base, k);
              } else {
                augment_matching(k);
                augmented = true;
                break;
              }
            } else if (label_[w] == 0) {
              label_[w] = 2;
              labelend_[w] = p ^ 1;
            }
          } else if (label_[inblossom_[w]] == 1) {
            const int b = inblossom_[v];
            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
          } else if (label_[w] == 0) {
            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
          }
        }
      }
      if (augmented) break;

      int deltatype = -1;
      i64 delta = 0;
      int deltaedge = -1, deltablossom = -1;
      if (!maxcard_) {
        deltatype = 1;
        delta = *std::min_element(dual_.begin(), dual_.begin() + n);
      }
      for (int v = 0; v < n; ++v) {
        if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
          const i64 d = slack(bestedge_[v]);
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 2;
            deltaedge = bestedge_[v];
          }
        }
      }
      for (int b = 0; b < 2 * n; ++b) {
        if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
          const i64 ks = slack(bestedge_[b]);
          if (ks % 2 != 0) throw std::logic_error("matching: odd slack");
          const i64 d = ks / 2;
          if (deltatype == -1 || d < delta) {
            delta = d;
            deltatype = 3;
            deltaedge = bestedge_[b];
          }
        }
      }
      for (int b = n; b < 2 * n; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
          delta = dual_[b];
          deltatype = 4;
          deltablossom = b;
        }
      }
      if (deltatype == -1) {
        deltatype = 1;
        delta = std::max<i64>(0, *std::min_element(dual_.begin(), dual_.begin() + n));
      }
      for (int v = 0; v < n; ++v) {
        const int l = label_[inblossom_[v]];
        if (l == 1) dual_[v] -= delta;
        else if (l == 2) dual_[v] += delta;
      }
      for (int b = n; b < 2 * n; ++b) {
        if (base_[b] >= 0 && parent_[b] == -1) {
          if (label_[b] == 1) dual_[b] += delta;
          else if (label_[b] == 2) dual_[b] -= delta;
        }
      }
      if (deltatype == 1) {
        break;
      } else if (deltatype == 2) {
        allowedge_[static_cast<std::size_t>(deltaedge)] = true;
        int i = edges_[static_cast<std::size_t>(deltaedge)].u;
        const int j = edges_[static_cast<std::size_t>(deltaedge)].v;
        if (label_[inblossom_[i]] == 0) i = j;
        queue_.push_back(i);
      } else if (deltatype == 3) {
        allowedge_[static_cast<std::size_t>(deltaedge)] = true;
        queue_.push_back(edges_[static_cast<std::size_t>(deltaedge)].u);
      } else {
        expand_blossom(deltablossom, false);
      }
    }
    if (!augmented) break;
    for (int b = n; b < 2 * n; ++b)
      if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) expand_blossom(b, true);
  }
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v)
    if (mate_[v] >= 0) out[static_cast<std::size_t>(v)] = endpoint(mate_[v]);
  return out;
}

}  // namespace

std::vector<int> max_weight_matching(int n_nodes, const std::vector<MatchingEdge>& edges, bool max_cardinality) {
  Blossom b(n_nodes, edges, max_cardinality);
  return b.solve();
}

std::vector<int> min_weight_perfect_matching(int n_nodes, const std::vector<MatchingEdge>& edges) {
  if (n_nodes % 2 != 0) throw std::logic_error("min_weight_perfect_matching: odd node count");
  std::int64_t top = 0;
  for (const auto& e : edges) {
    if (e.weight < 0) throw std::invalid_argument("min_weight_perfect_matching: negative weight");
    top = std::max(top, e.weight);
  }
  std::vector<MatchingEdge> flipped;
  flipped.reserve(edges.size());
  for (const auto& e : edges) flipped.push_back({e.u, e.v, top + 1 - e.weight});
  auto mate = max_weight_matching(n_nodes, flipped, true);
  for (int m : mate)
    if (m < 0) throw std::logic_error("min_weight_perfect_matching: no perfect matching");
  return mate;
}

std::vector<int> mwpm(const MatchingGraph& g) { return min_weight_perfect_matching(g.n_nodes(), g.edges); }

std::int64_t matching_weight(const std::vector<MatchingEdge>& edges, const std::vector<int>& mate) {
  std::map<std::pair<int, int>, std::int64_t> best;
  for (const auto& e : edges) {
    const auto key = std::minmax(e.u, e.v);
    auto it = best.find(key);
    if (it == best.end() || e.weight < it->second) best[key] = e.weight;
  }
  std::int64_t total = 0;
  for (int v = 0; v < static_cast<int>(mate.size()); ++v) {
    const int w = mate[static_cast<std::size_t>(v)];
    if (w < 0 || w < v) continue;
    auto it = best.find({v, w});
    if (it == best.end()) throw std::logic_error("matching_weight: matched pair without an edge");
    total += it->second;
  }
  return total;
}

}  // namespace spinqec
