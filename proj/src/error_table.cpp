#include "spinqec/error_table.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "spinqec/clifford.hpp"

namespace spinqec {

namespace {

constexpr std::size_t kNpos = static_cast<std::size_t>(-1);
constexpr std::size_t kSixQubitPaulis = 4096;

std::size_t pauli_index(const PauliString& p) {
  return static_cast<std::size_t>(p.x_bits() | (p.z_bits() << kCheckQubits));
}

PauliString pauli_from_index(std::size_t idx) {
  return PauliString(kCheckQubits, idx & 0x3F, (idx >> kCheckQubits) & 0x3F);
}

// Uniform over all 4^k Paulis on the listed qubits, identity included.
PauliDistribution full_depolarising(const std::vector<int>& qubits, double weight) {
  PauliDistribution out;
  const std::size_t k = qubits.size();
  const std::size_t count = std::size_t{1} << (2 * k);
  for (std::size_t code = 0; code < count; ++code) {
    PauliString p(kCheckQubits);
    for (std::size_t i = 0; i < k; ++i) {
      static constexpr char kL[4] = {'I', 'X', 'Y', 'Z'};
      p.set_letter(static_cast<std::size_t>(qubits[i]), kL[(code >> (2 * i)) & 3u]);
    }
    out.emplace_back(p, weight / static_cast<double>(count));
  }
  return out;
}

PauliDistribution one_qubit_depolarising(int q, double p1) {
  PauliDistribution out;
  for (char l : {'X', 'Y', 'Z'}) out.emplace_back(PauliString::single(kCheckQubits, static_cast<std::size_t>(q), l), p1 / 3);
  return out;
}

// Places a 2-qubit Pauli on (data, ancilla) of the 6-qubit register.
PauliString place_pair(const PauliString& two, int d, int a) {
  PauliString out(kCheckQubits);
  out.set_letter(static_cast<std::size_t>(d), two.letter(0));
  out.set_letter(static_cast<std::size_t>(a), two.letter(1));
  return out;
}

PauliDistribution non_identity(const PauliChannel& ch, int d, int a) {
  PauliDistribution out;
  for (const auto& [p, w] : ch.terms)
    if (!p.is_identity() && w > 0) out.emplace_back(place_pair(p, d, a), w);
  return out;
}

class Propagator {
 public:
  explicit Propagator(const CheckCircuit& c) : c_(c) {
    const auto& locs = c.locations;
    unit_of_.assign(locs.size(), -1);
    std::map<int, int> block_unit;
    for (std::size_t i = 0; i < locs.size(); ++i) {
      const auto& l = locs[i];
      if (l.block >= 0) {
        auto it = block_unit.find(l.block);
        if (it != block_unit.end()) {
          unit_of_[i] = it->second;
          continue;
        }
        const int d = l.qubits.front();
        const int a = d < 2 ? kA1 : kA2;
        block_unit[l.block] = static_cast<int>(maps_.size());
        unit_of_[i] = static_cast<int>(maps_.size());
        maps_.push_back(CliffordMap::cz(kCheckQubits, static_cast<std::size_t>(d), static_cast<std::size_t>(a)));
        continue;
      }
      unit_of_[i] = static_cast<int>(maps_.size());
      switch (l.kind) {
        case GateKind::y_rot: {
          if (std::abs(std::abs(l.angle) - std::numbers::pi / 2) > 1e-12)
            throw std::invalid_argument("propagation: only +-pi/2 Y rotations are supported");
          maps_.push_back(CliffordMap::ry_half_pi(kCheckQubits, static_cast<std::size_t>(l.qubits.front()),
                                                  l.angle > 0 ? 1 : -1));
          break;
        }
        case GateKind::init_singlet:
        case GateKind::readout_st: maps_.push_back(CliffordMap::identity(kCheckQubits)); break;
        default: throw std::invalid_argument("propagation: gate outside a CZ block: " + to_string(l.kind));
      }
    }
    after_.assign(maps_.size(), CliffordMap::identity(kCheckQubits));
    for (std::size_t u = maps_.size(); u-- > 1;) after_[u - 1] = maps_[u].then(after_[u]);
  }

  PauliDistribution propagate(std::size_t loc, const PauliString& err) const {
    if (err.n_qubits() != kCheckQubits) throw std::invalid_argument("propagate: need a 6-qubit Pauli");
    std::map<std::size_t, double> acc;
    if (loc == kNpos) {
      acc[pauli_index(err)] = 1;
    } else {
      if (loc >= c_.locations.size()) throw std::out_of_range("propagate: location");
      const auto& l = c_.locations[loc];
      const auto& after = after_[static_cast<std::size_t>(unit_of_[loc])];
      if (l.block < 0) {
        acc[pauli_index(conjugate_through(after, err))] = 1;
      } else {
        for (const auto& [p, w] : through_block_rest(loc, err))
          acc[pauli_index(conjugate_through(after, p))] += w;
      }
    }
    PauliDistribution out;
    for (const auto& [idx, w] : acc) out.emplace_back(pauli_from_index(idx), w);
    return out;
  }

 private:
  PauliDistribution through_block_rest(std::size_t loc, const PauliString& err) const {
    const auto& l = c_.locations[loc];
    // The block's first location always acts on its data qubit.
    std::size_t first = loc;
    while (first > 0 && c_.locations[first - 1].block == l.block) --first;
    const int d = c_.locations[first].qubits.front();
    const int a = d < 2 ? kA1 : kA2;
    const std::uint64_t support = (std::uint64_t{1} << d) | (std::uint64_t{1} << a);
    if ((err.x_bits() | err.z_bits()) & ~support)
      throw std::invalid_argument("propagate: fault inside a block must stay on the block's qubits");
    DenseOperator rest = DenseOperator::identity(2);
    for (std::size_t i = loc + 1; i < c_.locations.size() && c_.locations[i].block == l.block; ++i) {
      const auto& s = c_.locations[i];
      std::vector<std::size_t> pos;
      for (int q : s.qubits) pos.push_back(q == d ? 0 : 1);
      rest = embed(location_unitary(s), pos, 2) * rest;
    }
    PauliString two(2);
    two.set_letter(0, err.letter(static_cast<std::size_t>(d)));
    two.set_letter(1, err.letter(static_cast<std::size_t>(a)));
    PauliDistribution out;
    for (const auto& [p, w] : twirled_conjugation(rest, two)) out.emplace_back(place_pair(p, d, a), w);
    return out;
  }

  const CheckCircuit& c_;
  std::vector<int> unit_of_;
  std::vector<CliffordMap> maps_;
  std::vector<CliffordMap> after_;
};

}  // namespace

std::string to_string(LeakModel m) { return m == LeakModel::worst_case ? "worst_case" : "refined"; }

LeakModel leak_model_from_string(const std::string& s) {
  if (s == "worst_case" || s == "worst") return LeakModel::worst_case;
  if (s == "refined") return LeakModel::refined;
  throw std::invalid_argument("unknown leak model: " + s);
}

ErrorModelParams ErrorModelParams::standard(double p2, double p_leak, GateFlavour flavour,
                                            LeakModel model) {
  ErrorModelParams p;
  p.p1 = 0.1 * p2;
  p.p2 = p2;
  p.p_readout = p2;
  p.p_leak = p_leak;
  p.flavour = flavour;
  p.leak_model = model;
  return p;
}

void ErrorModelParams::validate() const {
  for (double v : {p1, p2, p_readout, p_leak})
    if (!(v >= 0 && v <= 1)) throw std::invalid_argument("ErrorModelParams: probability out of range");
  if (p_leak > 0.25) throw std::invalid_argument("ErrorModelParams: p_leak above 0.25");
  if (p2 > 0.25) throw std::invalid_argument("ErrorModelParams: p2 above 0.25");
}

std::string LeakagePattern::label() const {
  if (!ancilla && !first_data && !second_data) return "none";
  std::string s = "{";
  auto add = [&](const char* n) {
    if (s.size() > 1) s += ",";
    s += n;
  };
  if (ancilla) add("A");
  if (first_data) add("D1");
  if (second_data) add("D2");
  return s + "}";
}

std::vector<LeakagePattern> leakage_event_table(double p_leak, LeakModel model) {
  return leakage_event_table(p_leak, model, 2);
}

std::vector<LeakagePattern> leakage_event_table(double p, LeakModel model, int stages) {
  if (!(p >= 0 && p <= 0.25)) throw std::invalid_argument("leakage_event_table: p_leak out of range");
  if (stages < 0 || stages > 2) throw std::invalid_argument("leakage_event_table: stages");
  if (stages == 0) return {{false, false, false, 1.0}};
  if (stages == 1) return {{false, false, false, 1 - p}, {true, true, false, p}};
  if (model == LeakModel::worst_case) return {{false, false, false, 1 - 2 * p}, {true, true, true, 2 * p}};
  const double q = 1 - p;
  return {
      {false, false, false, q * q},
      {true, false, true, q * p},
      {true, true, false, 0.75 * p * q},
      {true, true, true, 0.25 * p + 0.75 * p * p},
  };
}

std::vector<ErrorSource> error_sources(const CheckCircuit& c, const ErrorModelParams& params) {
  params.validate();
  if (params.flavour != c.flavour) throw std::invalid_argument("error_sources: flavour mismatch");
  std::vector<ErrorSource> out;
  const GateErrorPair ge = gate_error_pair(params.p2);
  for (std::size_t i = 0; i < c.locations.size(); ++i) {
    const auto& l = c.locations[i];
    switch (l.kind) {
      case GateKind::init_singlet:
        if (params.p1 > 0)
          for (int a : l.qubits) out.push_back({i, "init", one_qubit_depolarising(a, params.p1)});
        break;
      case GateKind::y_rot:
        if (params.p1 > 0) out.push_back({i, "y_rot", one_qubit_depolarising(l.qubits.front(), params.p1)});
        break;
      case GateKind::z_rot:
        if (l.bracketed && params.p1 > 0)
          out.push_back({i, "z_pi", one_qubit_depolarising(l.qubits.front(), params.p1)});
        break;
      case GateKind::s_interaction:
        if (ge.p_s > 0) {
          const auto ch = fluctuation_channel(std::vector<std::pair<PauliString, double>>{{PauliString::from_string("ZZ"), 1.0}},
                                              std::sqrt(ge.p_s));
          out.push_back({i, "s_interaction", non_identity(ch, l.qubits[0], l.qubits[1])});
        }
        break;
      case GateKind::sqrt_swap:
        if (ge.p_sw > 0) {
          const auto ch = pauli_twirl(fluctuation_channel(gates::swap(), std::sqrt(ge.p_sw)));
          out.push_back({i, "sqrt_swap", non_identity(ch, l.qubits[0], l.qubits[1])});
        }
        break;
      case GateKind::readout_st: break;
    }
  }
  if (params.p_leak > 0) {
    for (int half = 1; half <= 2; ++half) {
      std::vector<int> data;
      for (int s = (half - 1) * 2; s < half * 2; ++s)
        if ((c.data_mask >> s) & 1u) data.push_back(s);
      if (data.empty()) continue;
      const int anc = half == 1 ? kA1 : kA2;
      ErrorSource src{kNpos, "leak half" + std::to_string(half), {}};
      for (const auto& pat : leakage_event_table(params.p_leak, params.leak_model, static_cast<int>(data.size()))) {
        std::vector<int> qs;
        if (pat.ancilla) qs.push_back(anc);
        if (pat.first_data) qs.push_back(data[0]);
        if (pat.second_data) qs.push_back(data[1]);
        if (qs.empty()) continue;
        for (auto& [p, w] : full_depolarising(qs, pat.probability))
          if (!p.is_identity()) src.channel.emplace_back(p, w);
      }
      out.push_back(std::move(src));
    }
  }
  return out;
}

PauliDistribution propagate_to_end(const CheckCircuit& c, std::size_t location, const PauliString& err) {
  return Propagator(c).propagate(location, err);
}

bool ancilla_pair_flips_parity(const PauliString& p) {
  return p.letter(kA1) != p.letter(kA2);
}

double ErrorTable::total() const {
  double s = 0;
  for (const auto& e : entries) s += e.probability;
  return s;
}

double ErrorTable::probability_of(const std::string& data_letters, bool flip) const {
  const PauliString target = PauliString::from_string(data_letters);
  for (const auto& e : entries)
    if (e.parity_flip == flip && e.data_pauli.same_letters(target)) return e.probability;
  return 0;
}

nlohmann::json ErrorTable::to_json() const {
  nlohmann::json j;
  j["basis"] = to_string(basis);
  j["data_mask"] = data_mask;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : entries)
    j["entries"].push_back({{"pauli", e.data_pauli.letters()}, {"flip", e.parity_flip}, {"p", e.probability}});
  return j;
}

ErrorTable ErrorTable::from_json(const nlohmann::json& j) {
  ErrorTable t;
  const std::string b = j.at("basis").get<std::string>();
  if (b != "X" && b != "Z") throw std::invalid_argument("ErrorTable: bad basis " + b);
  t.basis = b == "X" ? CheckBasis::x : CheckBasis::z;
  t.data_mask = j.at("data_mask").get<unsigned>();
  for (const auto& e : j.at("entries")) {
    t.entries.push_back({PauliString::from_string(e.at("pauli").get<std::string>()), e.at("flip").get<bool>(),
                         e.at("p").get<double>()});
    if (t.entries.back().data_pauli.n_qubits() != 4) throw std::invalid_argument("ErrorTable: pauli must have 4 letters");
  }
  return t;
}

ErrorTable compile_error_table(const CheckCircuit& c, const ErrorModelParams& params) {
  const Propagator prop(c);
  std::vector<double> dist(kSixQubitPaulis, 0.0);
  dist[0] = 1.0;
  std::vector<double> next(kSixQubitPaulis);
  for (const auto& src : error_sources(c, params)) {
    std::map<std::size_t, double> ch;
    double err_total = 0;
    for (const auto& [p, w] : src.channel) {
      for (const auto& [q, v] : prop.propagate(src.location, p)) {
        ch[pauli_index(q)] += w * v;
      }
      err_total += w;
    }
    ch[0] += 1.0 - err_total;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < kSixQubitPaulis; ++a) {
      if (dist[a] == 0) continue;
      for (const auto& [b, w] : ch) next[a ^ b] += dist[a] * w;
    }
    dist.swap(next);
  }

  // Collapse onto (data Pauli, parity flip) and fold in the readout error.
  std::map<std::pair<std::uint32_t, bool>, double> acc;
  const double pr = params.p_readout;
  for (std::size_t idx = 0; idx < kSixQubitPaulis; ++idx) {
    if (dist[idx] == 0) continue;
    const PauliString six = pauli_from_index(idx);
    const bool flip = ancilla_pair_flips_parity(six);
    const auto data_key = static_cast<std::uint32_t>((six.x_bits() & 0xF) | ((six.z_bits() & 0xF) << 4));
    acc[{data_key, flip}] += dist[idx] * (1 - pr);
    if (pr > 0) acc[{data_key, !flip}] += dist[idx] * pr;
  }
  ErrorTable t;
  t.basis = c.basis;
  t.data_mask = c.data_mask;
  for (const auto& [key, p] : acc) {
    if (p <= 0) continue;
    t.entries.push_back({PauliString(4, key.first & 0xF, key.first >> 4), key.second, p});
  }
  return t;
}

}  // namespace spinqec
