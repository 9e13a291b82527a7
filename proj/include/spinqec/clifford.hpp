#pragma once

#include <cstddef>
#include <vector>

#include "spinqec/dense.hpp"
#include "spinqec/pauli.hpp"

namespace spinqec {

// Clifford unitary stored as the images of the single-qubit X and Z
// generators under conjugation U P U^dagger.
class CliffordMap {
 public:
  CliffordMap() = default;
  CliffordMap(std::vector<PauliString> x_images, std::vector<PauliString> z_images);

  static CliffordMap identity(std::size_t n_qubits);
  // Reads off the generator images from a dense unitary. Throws if the
  // unitary does not map Paulis to Paulis.
  static CliffordMap from_dense(const DenseOperator& u);

  static CliffordMap cz(std::size_t n_qubits, std::size_t a, std::size_t b);
  static CliffordMap swap(std::size_t n_qubits, std::size_t a, std::size_t b);
  // Y rotation by +pi/2 (sign = +1) or -pi/2 (sign = -1).
  static CliffordMap ry_half_pi(std::size_t n_qubits, std::size_t q, int sign);

  std::size_t n_qubits() const { return x_images_.size(); }
  const PauliString& x_image(std::size_t q) const { return x_images_.at(q); }
  const PauliString& z_image(std::size_t q) const { return z_images_.at(q); }

  // Applies this map first, then `next`.
  CliffordMap then(const CliffordMap& next) const;

 private:
  std::vector<PauliString> x_images_;
  std::vector<PauliString> z_images_;
};

PauliString conjugate_through(const CliffordMap& map, const PauliString& p);

}  // namespace spinqec
