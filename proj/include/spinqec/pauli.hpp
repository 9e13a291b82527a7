#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace spinqec {

// Pauli string on up to 64 qubits in symplectic form.
// The operator is i^phase * P_0 (x) P_1 (x) ... with P_q in {I, X, Y, Z}
// and (x_q, z_q) = (1, 1) meaning Y (not XZ).
class PauliString {
 public:
  static constexpr std::size_t kMaxQubits = 64;

  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);
  PauliString(std::size_t n_qubits, std::uint64_t x_bits, std::uint64_t z_bits,
              unsigned phase = 0);

  // Accepts an optional sign prefix ("+", "-", "i", "+i", "-i") followed by
  // one letter per qubit from {I, X, Y, Z, _}.
  static PauliString from_string(std::string_view text);
  static PauliString single(std::size_t n_qubits, std::size_t qubit, char letter);

  std::size_t n_qubits() const { return n_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  // Exponent k of the prefactor i^k, in [0, 4).
  unsigned phase() const { return phase_; }

  char letter(std::size_t qubit) const;
  void set_letter(std::size_t qubit, char letter);
  void set_phase(unsigned k) { phase_ = k & 3u; }

  bool is_identity() const { return x_ == 0 && z_ == 0; }
  std::size_t weight() const;
  bool commutes_with(const PauliString& other) const;

  // Same letters on every qubit, phase ignored.
  bool same_letters(const PauliString& other) const {
    return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
  }

  PauliString operator*(const PauliString& rhs) const;
  bool operator==(const PauliString& rhs) const = default;

  // Letters only, e.g. "XIZ".
  std::string letters() const;
  // Letters with sign prefix, e.g. "-iXIZ".
  std::string str() const;

 private:
  std::size_t n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  unsigned phase_ = 0;
};

PauliString pauli_multiply(const PauliString& a, const PauliString& b);

// Symplectic inner product: 0 if a and b commute, 1 otherwise.
int symplectic_product(const PauliString& a, const PauliString& b);

}  // namespace spinqec
