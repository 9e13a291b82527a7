#include "spinqec/sampler.hpp"

#include <numeric>
#include <stdexcept>

namespace spinqec {

AliasTable::AliasTable(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("AliasTable: empty distribution");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0)) throw std::invalid_argument("AliasTable: zero total weight");
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 0) throw std::invalid_argument("AliasTable: negative weight");
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t g = large.back();
    prob_[s] = scaled[s];
    alias_[s] = g;
    scaled[g] = (scaled[g] + scaled[s]) - 1.0;
    if (scaled[g] < 1.0) {
      large.pop_back();
      small.push_back(g);
    }
  }
  for (std::size_t i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (std::size_t i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

SampledTable::SampledTable(ErrorTable t) : table(std::move(t)) {
  std::vector<double> w;
  for (const auto& e : table.entries) {
    w.push_back(e.probability);
    draws.push_back({static_cast<std::uint8_t>(e.data_pauli.x_bits()),
                     static_cast<std::uint8_t>(e.data_pauli.z_bits()), e.parity_flip});
  }
  alias = AliasTable(w);
}

ErrorTables::ErrorTables(const ErrorModelParams& params, const Lattice& lattice) : params_(params) {
  params.validate();
  for (CheckBasis b : {CheckBasis::x, CheckBasis::z}) {
    for (const auto& p : lattice.plaquettes(b)) {
      const auto key = std::make_pair(static_cast<int>(b), p.slot_mask());
      if (tables_.count(key)) continue;
      const CheckCircuit c = build_check_circuit(b, params.flavour, p.slot_mask());
      tables_.emplace(key, SampledTable(compile_error_table(c, params)));
    }
  }
}

const SampledTable& ErrorTables::get(CheckBasis b, unsigned mask) const {
  auto it = tables_.find({static_cast<int>(b), mask});
  if (it == tables_.end()) throw std::out_of_range("ErrorTables: no table for this plaquette shape");
  return it->second;
}

SyndromeGrid::SyndromeGrid(int rounds_, int n_plaquettes_)
    : rounds(rounds_),
      n_plaquettes(n_plaquettes_),
      parities(static_cast<std::size_t>(rounds_ * n_plaquettes_), 0),
      detection_events(static_cast<std::size_t>(rounds_ * n_plaquettes_), 0) {}

void SyndromeGrid::compute_events() {
  for (int r = 0; r < rounds; ++r)
    for (int p = 0; p < n_plaquettes; ++p) {
      const std::uint8_t prev = r == 0 ? 0 : parity(r - 1, p);
      detection_events[static_cast<std::size_t>(r * n_plaquettes + p)] = parity(r, p) ^ prev;
    }
}

std::vector<std::pair<int, int>> SyndromeGrid::event_list() const {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < rounds; ++r)
    for (int p = 0; p < n_plaquettes; ++p)
      if (event(r, p)) out.emplace_back(r, p);
  return out;
}

bool frame_parity(const PauliFrame& f, const Plaquette& p) {
  const auto& bits = p.basis == CheckBasis::z ? f.x : f.z;
  std::uint8_t acc = 0;
  for (int q : p.data) acc ^= bits[static_cast<std::size_t>(q)];
  return acc != 0;
}

void apply_draw(PauliFrame& f, const Plaquette& p, const TableDraw& d) {
  for (std::size_t s = 0; s < 4; ++s) {
    const int q = p.slots[s];
    if (q < 0) continue;
    f.x[static_cast<std::size_t>(q)] ^= (d.x >> s) & 1u;
    f.z[static_cast<std::size_t>(q)] ^= (d.z >> s) & 1u;
  }
}

ShotRecord sample_shot(const Lattice& l, const ErrorTables& tables, int rounds, std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  // Table lookups resolved once per plaquette.
  std::vector<const SampledTable*> xt, zt;
  for (const auto& p : l.x_plaquettes) xt.push_back(&tables.get(CheckBasis::x, p.slot_mask()));
  for (const auto& p : l.z_plaquettes) zt.push_back(&tables.get(CheckBasis::z, p.slot_mask()));
  return run_check_rounds(
      l, rounds,
      [&](CheckBasis b, const Plaquette& p, int) {
        const auto* t = (b == CheckBasis::x ? xt : zt)[static_cast<std::size_t>(p.id)];
        return t->sample(uniform01(rng));
      },
      [](int, PauliFrame&) {});
}

}  // namespace spinqec
