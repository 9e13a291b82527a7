#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "spinqec/error_table.hpp"
#include "spinqec/lattice.hpp"

namespace spinqec {

// Walker alias sampler over a fixed discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& weights);

  std::size_t size() const { return prob_.size(); }
  // u uniform in [0, 1).
  std::size_t sample(double u) const {
    const double x = u * static_cast<double>(prob_.size());
    std::size_t i = static_cast<std::size_t>(x);
    if (i >= prob_.size()) i = prob_.size() - 1;
    return (x - static_cast<double>(i)) < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

// One table outcome in the check's slot order: bit s of x/z is data slot s.
struct TableDraw {
  std::uint8_t x = 0;
  std::uint8_t z = 0;
  bool flip = false;
};

struct SampledTable {
  ErrorTable table;
  AliasTable alias;
  std::vector<TableDraw> draws;

  explicit SampledTable(ErrorTable t);
  TableDraw sample(double u) const { return draws[alias.sample(u)]; }
};

// Compiled tables for every (basis, slot mask) that a lattice needs. The
// charge-leakage depolarisation of each half is folded into the tables.
class ErrorTables {
 public:
  ErrorTables(const ErrorModelParams& params, const Lattice& lattice);

  const SampledTable& get(CheckBasis b, unsigned mask) const;
  const ErrorModelParams& params() const { return params_; }

 private:
  ErrorModelParams params_;
  std::map<std::pair<int, unsigned>, SampledTable> tables_;
};

struct PauliFrame {
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> z;

  PauliFrame() = default;
  explicit PauliFrame(std::size_t n) : x(n, 0), z(n, 0) {}
  std::size_t size() const { return x.size(); }
};

struct SyndromeGrid {
  int rounds = 0;  // noisy rounds plus the final perfect round
  int n_plaquettes = 0;
  std::vector<std::uint8_t> parities;
  std::vector<std::uint8_t> detection_events;

  SyndromeGrid() = default;
  SyndromeGrid(int rounds_, int n_plaquettes_);
  std::uint8_t& parity(int r, int p) { return parities[static_cast<std::size_t>(r * n_plaquettes + p)]; }
  std::uint8_t parity(int r, int p) const { return parities[static_cast<std::size_t>(r * n_plaquettes + p)]; }
  std::uint8_t event(int r, int p) const { return detection_events[static_cast<std::size_t>(r * n_plaquettes + p)]; }
  // Recomputes detection events against an all-zero initial parity.
  void compute_events();
  std::vector<std::pair<int, int>> event_list() const;
};

struct ShotRecord {
  SyndromeGrid x_grid;
  SyndromeGrid z_grid;
  PauliFrame frame;
};

// Parity of a plaquette on the frame: Z checks see X errors and vice versa.
bool frame_parity(const PauliFrame& f, const Plaquette& p);
void apply_draw(PauliFrame& f, const Plaquette& p, const TableDraw& d);

// Runs `noisy_rounds` rounds of checks in colour order followed by one
// perfect round. `draw(basis, plaquette, round)` supplies each check's
// outcome; `between(round, frame)` may modify the frame before each noisy
// round.
template <typename Draw, typename Between>
ShotRecord run_check_rounds(const Lattice& l, int noisy_rounds, Draw&& draw, Between&& between) {
  ShotRecord rec;
  rec.frame = PauliFrame(l.n_data());
  const int total = noisy_rounds + 1;
  rec.x_grid = SyndromeGrid(total, static_cast<int>(l.x_plaquettes.size()));
  rec.z_grid = SyndromeGrid(total, static_cast<int>(l.z_plaquettes.size()));
  for (int r = 0; r < noisy_rounds; ++r) {
    between(r, rec.frame);
    for (int colour : kColourSchedule) {
      for (CheckBasis b : {CheckBasis::x, CheckBasis::z}) {
        auto& grid = b == CheckBasis::x ? rec.x_grid : rec.z_grid;
        for (const auto& p : l.plaquettes(b)) {
          if (p.colour != colour) continue;
          const TableDraw d = draw(b, p, r);
          grid.parity(r, p.id) = static_cast<std::uint8_t>(frame_parity(rec.frame, p) ^ d.flip);
          apply_draw(rec.frame, p, d);
        }
      }
    }
  }
  for (CheckBasis b : {CheckBasis::x, CheckBasis::z}) {
    auto& grid = b == CheckBasis::x ? rec.x_grid : rec.z_grid;
    for (const auto& p : l.plaquettes(b)) grid.parity(noisy_rounds, p.id) = frame_parity(rec.frame, p);
  }
  rec.x_grid.compute_events();
  rec.z_grid.compute_events();
  return rec;
}

// 53-bit uniform double from a 64-bit engine.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ShotRecord sample_shot(const Lattice& l, const ErrorTables& tables, int rounds, std::uint64_t rng_seed);

}  // namespace spinqec
