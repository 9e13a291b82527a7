#include "spinqec/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace spinqec {

namespace {

std::uint64_t mask_for(std::size_t n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

// Exponent of i picked up by the single-qubit product P(x1,z1) * P(x2,z2).
int product_phase(unsigned x1, unsigned z1, unsigned x2, unsigned z2) {
  if (x1 == 0 && z1 == 0) return 0;
  if (x1 == 1 && z1 == 1) return static_cast<int>(z2) - static_cast<int>(x2);
  if (x1 == 1) return static_cast<int>(z2) * (2 * static_cast<int>(x2) - 1);
  return static_cast<int>(x2) * (1 - 2 * static_cast<int>(z2));
}

}  // namespace

PauliString::PauliString(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > kMaxQubits) throw std::invalid_argument("PauliString: too many qubits");
}

PauliString::PauliString(std::size_t n_qubits, std::uint64_t x_bits, std::uint64_t z_bits,
                         unsigned phase)
    : n_(n_qubits), x_(x_bits), z_(z_bits), phase_(phase & 3u) {
  if (n_qubits > kMaxQubits) throw std::invalid_argument("PauliString: too many qubits");
  if ((x_bits | z_bits) & ~mask_for(n_qubits))
    throw std::invalid_argument("PauliString: bits set beyond n_qubits");
}

PauliString PauliString::from_string(std::string_view text) {
  unsigned phase = 0;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    if (text[0] == '-') phase = 2;
    text.remove_prefix(1);
  }
  if (!text.empty() && text[0] == 'i') {
    phase = (phase + 1) & 3u;
    text.remove_prefix(1);
  }
  PauliString p(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) p.set_letter(q, text[q]);
  p.phase_ = phase;
  return p;
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, char letter) {
  PauliString p(n_qubits);
  p.set_letter(qubit, letter);
  return p;
}

char PauliString::letter(std::size_t qubit) const {
  if (qubit >= n_) throw std::out_of_range("PauliString: qubit index");
  const unsigned x = (x_ >> qubit) & 1u;
  const unsigned z = (z_ >> qubit) & 1u;
  static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  return kLetters[x | (z << 1)];
}

void PauliString::set_letter(std::size_t qubit, char letter) {
  if (qubit >= n_) throw std::out_of_range("PauliString: qubit index");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  x_ &= ~bit;
  z_ &= ~bit;
  switch (letter) {
    case 'I': case '_': break;
    case 'X': x_ |= bit; break;
    case 'Z': z_ |= bit; break;
    case 'Y': x_ |= bit; z_ |= bit; break;
    default: throw std::invalid_argument(std::string("PauliString: bad letter ") + letter);
  }
}

std::size_t PauliString::weight() const { return static_cast<std::size_t>(std::popcount(x_ | z_)); }

bool PauliString::commutes_with(const PauliString& other) const {
  return symplectic_product(*this, other) == 0;
}

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("PauliString: size mismatch");
  int k = static_cast<int>(phase_) + static_cast<int>(rhs.phase_);
  std::uint64_t active = (x_ | z_) & (rhs.x_ | rhs.z_);
  while (active) {
    const int q = std::countr_zero(active);
    active &= active - 1;
    k += product_phase((x_ >> q) & 1u, (z_ >> q) & 1u, (rhs.x_ >> q) & 1u, (rhs.z_ >> q) & 1u);
  }
  PauliString out(n_, x_ ^ rhs.x_, z_ ^ rhs.z_);
  out.phase_ = static_cast<unsigned>(((k % 4) + 4) % 4);
  return out;
}

std::string PauliString::letters() const {
  std::string s(n_, 'I');
  for (std::size_t q = 0; q < n_; ++q) s[q] = letter(q);
  return s;
}

std::string PauliString::str() const {
  static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  return kPrefix[phase_] + letters();
}

PauliString pauli_multiply(const PauliString& a, const PauliString& b) { return a * b; }

int symplectic_product(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("PauliString: size mismatch");
  return std::popcount((a.x_bits() & b.z_bits()) ^ (a.z_bits() & b.x_bits())) & 1;
}

}  // namespace spinqec
